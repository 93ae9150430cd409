#pragma once

#include <span>

namespace semcom::nn {

/// Which implementation of the dense-layer kernels to run. `Serial` is the
/// straightforward reference kept for testing; `Parallel` distributes rows
/// across OpenMP threads and vectorizes the inner loops.
enum class Backend { Serial, Parallel };

/// Shapes: x is batch x in, w is out x in (row-major), b has out entries,
/// y is batch x out.
struct DenseShape {
  int batch = 0;
  int in = 0;
  int out = 0;
};

/// y = x * w^T + b
void dense_forward(Backend backend, DenseShape s, std::span<const double> x,
                   std::span<const double> w, std::span<const double> b, std::span<double> y);

/// gx = gy * w   (gy is batch x out, gx is batch x in; overwritten)
void dense_backward_input(Backend backend, DenseShape s, std::span<const double> gy,
                          std::span<const double> w, std::span<double> gx);

/// gw += gy^T * x, gb += column sums of gy
void dense_backward_params(Backend backend, DenseShape s, std::span<const double> gy,
                           std::span<const double> x, std::span<double> gw, std::span<double> gb);

namespace serial {
void dense_forward(DenseShape s, std::span<const double> x, std::span<const double> w,
                   std::span<const double> b, std::span<double> y);
void dense_backward_input(DenseShape s, std::span<const double> gy, std::span<const double> w,
                          std::span<double> gx);
void dense_backward_params(DenseShape s, std::span<const double> gy, std::span<const double> x,
                           std::span<double> gw, std::span<double> gb);
}  // namespace serial

namespace parallel {
void dense_forward(DenseShape s, std::span<const double> x, std::span<const double> w,
                   std::span<const double> b, std::span<double> y);
void dense_backward_input(DenseShape s, std::span<const double> gy, std::span<const double> w,
                          std::span<double> gx);
void dense_backward_params(DenseShape s, std::span<const double> gy, std::span<const double> x,
                           std::span<double> gw, std::span<double> gb);
}  // namespace parallel

}  // namespace semcom::nn
