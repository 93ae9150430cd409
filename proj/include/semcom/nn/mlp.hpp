#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "semcom/common.hpp"
#include "semcom/nn/kernels.hpp"

namespace semcom::nn {

/// Dense row-major matrix; one row per batch sample.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}

  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  std::span<double> row(int r) { return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)}; }
  std::span<const double> row(int r) const {
    return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)};
  }
};

enum class Activation { Identity, Relu, Tanh };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

/// Fully connected network. Parameters live in one flat array, layer by layer,
/// weights (out x in, row-major) then biases.
class Mlp {
 public:
  struct Cache {
    std::vector<Matrix> inputs;  // input to each layer
    std::vector<Matrix> pre;     // pre-activation of each layer
    Matrix output;
    std::uint64_t version = 0;
    const Mlp* owner = nullptr;
  };

  Mlp() = default;
  /// Zero-initialized parameters. Throws ConfigError for fewer than two dims or
  /// a non-positive width.
  Mlp(std::vector<int> dims, Activation hidden, Activation output);
  /// Uniform(-1/sqrt(in), 1/sqrt(in)) weights and biases.
  static Mlp initialized(std::vector<int> dims, Activation hidden, Activation output, Rng& rng);

  int input_dim() const { return dims_.front(); }
  int output_dim() const { return dims_.back(); }
  int num_layers() const { return static_cast<int>(dims_.size()) - 1; }
  const std::vector<int>& dims() const { return dims_; }
  Activation hidden_activation() const { return hidden_; }
  Activation output_activation() const { return output_; }

  Backend backend() const { return backend_; }
  void set_backend(Backend b) { backend_ = b; }

  /// Batched forward; fills `cache` for a later backward when non-null.
  /// Throws StateError on an input width mismatch.
  Matrix forward(const Matrix& x, Cache* cache = nullptr) const;
  std::vector<double> forward(std::span<const double> x) const;

  /// Accumulates d(loss)/d(params) into `param_grads` (skipped when empty)
  /// and returns d(loss)/d(input) (empty when !want_input_grad). Throws
  /// StateError if parameters changed since the forward that filled `cache`.
  Matrix backward(const Cache& cache, const Matrix& grad_output, std::span<double> param_grads,
                  bool want_input_grad = true) const;

  std::size_t num_parameters() const { return params_.size(); }
  std::span<const double> parameters() const { return params_; }
  /// Mutable view; invalidates outstanding caches.
  std::span<double> mutable_parameters() {
    ++version_;
    return params_;
  }
  void copy_parameters_from(const Mlp& other);
  std::uint64_t version() const { return version_; }

  /// Versioned text format; doubles are written as hex floats so a round trip
  /// is bit-exact.
  void save(std::ostream& out) const;
  static Mlp load(std::istream& in);
  void save_file(const std::string& path) const;
  static Mlp load_file(const std::string& path);

  bool same_architecture(const Mlp& other) const;

 private:
  std::size_t weight_offset(int layer) const { return offsets_[layer]; }
  std::size_t bias_offset(int layer) const {
    return offsets_[layer] + static_cast<std::size_t>(dims_[layer]) * dims_[layer + 1];
  }
  std::span<const double> weights(int layer) const {
    return {params_.data() + weight_offset(layer),
            static_cast<std::size_t>(dims_[layer]) * dims_[layer + 1]};
  }
  std::span<const double> biases(int layer) const {
    return {params_.data() + bias_offset(layer), static_cast<std::size_t>(dims_[layer + 1])};
  }
  Activation layer_activation(int layer) const {
    return layer + 1 == num_layers() ? output_ : hidden_;
  }

  std::vector<int> dims_;
  Activation hidden_ = Activation::Relu;
  Activation output_ = Activation::Identity;
  std::vector<double> params_;
  std::vector<std::size_t> offsets_;
  Backend backend_ = Backend::Parallel;
  std::uint64_t version_ = 0;
};

}  // namespace semcom::nn
