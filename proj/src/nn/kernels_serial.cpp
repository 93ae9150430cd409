#include "semcom/nn/kernels.hpp"

namespace semcom::nn::serial {

void dense_forward(DenseShape s, std::span<const double> x, std::span<const double> w,
                   std::span<const double> b, std::span<double> y) {
  for (int r = 0; r < s.batch; ++r) {
    for (int o = 0; o < s.out; ++o) {
      double acc = b[o];
      for (int i = 0; i < s.in; ++i) acc += x[r * s.in + i] * w[o * s.in + i];
      y[r * s.out + o] = acc;
    }
  }
}

void dense_backward_input(DenseShape s, std::span<const double> gy, std::span<const double> w,
                          std::span<double> gx) {
  for (int r = 0; r < s.batch; ++r) {
    for (int i = 0; i < s.in; ++i) {
      double acc = 0.0;
      for (int o = 0; o < s.out; ++o) acc += gy[r * s.out + o] * w[o * s.in + i];
      gx[r * s.in + i] = acc;
    }
  }
}

void dense_backward_params(DenseShape s, std::span<const double> gy, std::span<const double> x,
                           std::span<double> gw, std::span<double> gb) {
  for (int o = 0; o < s.out; ++o) {
    for (int i = 0; i < s.in; ++i) {
      double acc = 0.0;
      for (int r = 0; r < s.batch; ++r) acc += gy[r * s.out + o] * x[r * s.in + i];
      gw[o * s.in + i] += acc;
    }
    double acc = 0.0;
    for (int r = 0; r < s.batch; ++r) acc += gy[r * s.out + o];
    gb[o] += acc;
  }
}

}  // namespace semcom::nn::serial
