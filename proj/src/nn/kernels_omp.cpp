
#include "semcom/nn/kernels.hpp"
#include "semcom/parallel.hpp"

namespace semcom::nn {

namespace parallel {

// Every output element is owned by exactly one thread and accumulated in a
// fixed order, so results do not depend on the thread count.

void dense_forward(DenseShape s, std::span<const double> x, std::span<const double> w,
                   std::span<const double> b, std::span<double> y) {
  const double* xp = x.data();
  const double* wp = w.data();
  const double* bp = b.data();
  double* yp = y.data();
#pragma omp parallel for schedule(static) if (s.batch * s.out * s.in > 32768)
  for (int r = 0; r < s.batch; ++r) {
    const double* xr = xp + static_cast<std::ptrdiff_t>(r) * s.in;
    double* yr = yp + static_cast<std::ptrdiff_t>(r) * s.out;
    for (int o = 0; o < s.out; ++o) {
      const double* wo = wp + static_cast<std::ptrdiff_t>(o) * s.in;
      double acc = 0.0;
#pragma omp simd reduction(+ : acc)
      for (int i = 0; i < s.in; ++i) acc += xr[i] * wo[i];
      yr[o] = acc + bp[o];
    }
  }
}

void dense_backward_input(DenseShape s, std::span<const double> gy, std::span<const double> w,
                          std::span<double> gx) {
  const double* gyp = gy.data();
  const double* wp = w.data();
  double* gxp = gx.data();
#pragma omp parallel for schedule(static) if (s.batch * s.out * s.in > 32768)
  for (int r = 0; r < s.batch; ++r) {
    const double* gyr = gyp + static_cast<std::ptrdiff_t>(r) * s.out;
    double* gxr = gxp + static_cast<std::ptrdiff_t>(r) * s.in;
    for (int i = 0; i < s.in; ++i) gxr[i] = 0.0;
    for (int o = 0; o < s.out; ++o) {
      const double g = gyr[o];
      const double* wo = wp + static_cast<std::ptrdiff_t>(o) * s.in;
#pragma omp simd
      for (int i = 0; i < s.in; ++i) gxr[i] += g * wo[i];
    }
  }
}

void dense_backward_params(DenseShape s, std::span<const double> gy, std::span<const double> x,
                           std::span<double> gw, std::span<double> gb) {
  const double* gyp = gy.data();
  const double* xp = x.data();
  double* gwp = gw.data();
  double* gbp = gb.data();
#pragma omp parallel for schedule(static) if (s.batch * s.out * s.in > 32768)
  for (int o = 0; o < s.out; ++o) {
    double* gwo = gwp + static_cast<std::ptrdiff_t>(o) * s.in;
    double bias_acc = 0.0;
    for (int r = 0; r < s.batch; ++r) {
      const double g = gyp[static_cast<std::ptrdiff_t>(r) * s.out + o];
      bias_acc += g;
      if (g == 0.0) continue;  // rectifier zeros are common
      const double* xr = xp + static_cast<std::ptrdiff_t>(r) * s.in;
#pragma omp simd
      for (int i = 0; i < s.in; ++i) gwo[i] += g * xr[i];
    }
    gbp[o] += bias_acc;
  }
}

}  // namespace parallel

void dense_forward(Backend backend, DenseShape s, std::span<const double> x,
                   std::span<const double> w, std::span<const double> b, std::span<double> y) {
  if (backend == Backend::Serial) {
    serial::dense_forward(s, x, w, b, y);
  } else {
    parallel::dense_forward(s, x, w, b, y);
  }
}

void dense_backward_input(Backend backend, DenseShape s, std::span<const double> gy,
                          std::span<const double> w, std::span<double> gx) {
  if (backend == Backend::Serial) {
    serial::dense_backward_input(s, gy, w, gx);
  } else {
    parallel::dense_backward_input(s, gy, w, gx);
  }
}

void dense_backward_params(Backend backend, DenseShape s, std::span<const double> gy,
                           std::span<const double> x, std::span<double> gw, std::span<double> gb) {
  if (backend == Backend::Serial) {
    serial::dense_backward_params(s, gy, x, gw, gb);
  } else {
    parallel::dense_backward_params(s, gy, x, gw, gb);
  }
}

}  // namespace semcom::nn
