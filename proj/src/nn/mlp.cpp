#include "semcom/nn/mlp.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace semcom::nn {

namespace {

constexpr const char* kMagic = "semcom-mlp";
constexpr int kFormatVersion = 1;

void apply_activation(Activation a, std::span<double> v) {
  switch (a) {
    case Activation::Identity:
      break;
    case Activation::Relu:
      for (auto& x : v) x = x > 0.0 ? x : 0.0;
      break;
    case Activation::Tanh:
      for (auto& x : v) x = std::tanh(x);
      break;
  }
}

// grad <- grad * act'(pre), using the post-activation value where cheaper.
void activation_backward(Activation a, std::span<const double> pre, std::span<const double> post,
                         std::span<double> grad) {
  switch (a) {
    case Activation::Identity:
      break;
    case Activation::Relu:
      for (std::size_t i = 0; i < grad.size(); ++i) {
        if (!(pre[i] > 0.0)) grad[i] = 0.0;
      }
      break;
    case Activation::Tanh:
      for (std::size_t i = 0; i < grad.size(); ++i) grad[i] *= 1.0 - post[i] * post[i];
      break;
  }
}

std::string expect_token(std::istream& in, const std::string& want) {
  std::string tok;
  if (!(in >> tok) || tok != want) {
    throw ConfigError("mlp checkpoint: expected '" + want + "', found '" + tok + "'");
  }
  return tok;
}

}  // namespace

std::string to_string(Activation a) {
  switch (a) {
    case Activation::Identity:
      return "identity";
    case Activation::Relu:
      return "relu";
    case Activation::Tanh:
      return "tanh";
  }
  return "identity";
}

Activation activation_from_string(const std::string& s) {
  if (s == "identity") return Activation::Identity;
  if (s == "relu") return Activation::Relu;
  if (s == "tanh") return Activation::Tanh;
  throw ConfigError("unknown activation '" + s + "'");
}

Mlp::Mlp(std::vector<int> dims, Activation hidden, Activation output)
    : dims_(std::move(dims)), hidden_(hidden), output_(output) {
  if (dims_.size() < 2) throw ConfigError("mlp: need at least input and output widths");
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
    if (dims_[l] < 1 || dims_[l + 1] < 1) throw ConfigError("mlp: widths must be positive");
    offsets_.push_back(total);
    total += static_cast<std::size_t>(dims_[l]) * dims_[l + 1] + dims_[l + 1];
  }
  params_.assign(total, 0.0);
}

Mlp Mlp::initialized(std::vector<int> dims, Activation hidden, Activation output, Rng& rng) {
  Mlp net(std::move(dims), hidden, output);
  for (int l = 0; l < net.num_layers(); ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(net.dims_[l]));
    std::uniform_real_distribution<double> u(-bound, bound);
    const std::size_t begin = net.offsets_[l];
    const std::size_t end = net.bias_offset(l) + net.dims_[l + 1];
    for (std::size_t i = begin; i < end; ++i) net.params_[i] = u(rng);
  }
  return net;
}

Matrix Mlp::forward(const Matrix& x, Cache* cache) const {
  if (x.cols != input_dim()) {
    throw StateError("mlp forward: input width " + std::to_string(x.cols) + " != " +
                     std::to_string(input_dim()));
  }
  if (cache) {
    cache->inputs.clear();
    cache->pre.clear();
    cache->owner = this;
    cache->version = version_;
  }
  Matrix current = x;
  for (int l = 0; l < num_layers(); ++l) {
    const DenseShape shape{x.rows, dims_[l], dims_[l + 1]};
    Matrix pre(x.rows, dims_[l + 1]);
    dense_forward(backend_, shape, current.data, weights(l), biases(l), pre.data);
    Matrix post = pre;
    apply_activation(layer_activation(l), post.data);
    if (cache) {
      cache->inputs.push_back(std::move(current));
      cache->pre.push_back(std::move(pre));
    }
    current = std::move(post);
  }
  if (cache) cache->output = current;
  return current;
}

std::vector<double> Mlp::forward(std::span<const double> x) const {
  Matrix m(1, static_cast<int>(x.size()));
  std::copy(x.begin(), x.end(), m.data.begin());
  return forward(m).data;
}

Matrix Mlp::backward(const Cache& cache, const Matrix& grad_output,
                     std::span<double> param_grads, bool want_input_grad) const {
  if (cache.owner != this || cache.version != version_ ||
      static_cast<int>(cache.inputs.size()) != num_layers()) {
    throw StateError("mlp backward: stale or foreign cache");
  }
  const bool want_params = !param_grads.empty();
  if (want_params && param_grads.size() != params_.size()) {
    throw StateError("mlp backward: gradient buffer has wrong size");
  }
  const int batch = cache.output.rows;
  if (grad_output.rows != batch || grad_output.cols != output_dim()) {
    throw StateError("mlp backward: output gradient shape mismatch");
  }

  Matrix grad = grad_output;
  for (int l = num_layers() - 1; l >= 0; --l) {
    const Matrix& post = l + 1 == num_layers() ? cache.output : cache.inputs[l + 1];
    activation_backward(layer_activation(l), cache.pre[l].data, post.data, grad.data);
    const DenseShape shape{batch, dims_[l], dims_[l + 1]};
    if (want_params) {
      std::span<double> gw = param_grads.subspan(
          weight_offset(l), static_cast<std::size_t>(dims_[l]) * dims_[l + 1]);
      std::span<double> gb = param_grads.subspan(bias_offset(l), dims_[l + 1]);
      dense_backward_params(backend_, shape, grad.data, cache.inputs[l].data, gw, gb);
    }
    if (l == 0 && !want_input_grad) return Matrix{};
    Matrix grad_in(batch, dims_[l]);
    dense_backward_input(backend_, shape, grad.data, weights(l), grad_in.data);
    grad = std::move(grad_in);
  }
  return grad;
}

void Mlp::copy_parameters_from(const Mlp& other) {
  if (!same_architecture(other)) throw StateError("mlp: architecture mismatch on copy");
  params_ = other.params_;
  ++version_;
}

bool Mlp::same_architecture(const Mlp& other) const {
  return dims_ == other.dims_ && hidden_ == other.hidden_ && output_ == other.output_;
}

void Mlp::save(std::ostream& out) const {
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "dims " << dims_.size();
  for (int d : dims_) out << ' ' << d;
  out << '\n';
  out << "hidden " << to_string(hidden_) << '\n';
  out << "output " << to_string(output_) << '\n';
  out << "params " << params_.size() << '\n';
  out << std::hexfloat;
  for (double p : params_) out << p << '\n';
  out << std::defaultfloat;
  out << "end\n";
}

Mlp Mlp::load(std::istream& in) {
  expect_token(in, kMagic);
  int version = 0;
  if (!(in >> version) || version != kFormatVersion) {
    throw ConfigError("mlp checkpoint: unsupported format version " + std::to_string(version));
  }
  expect_token(in, "dims");
  std::size_t n = 0;
  in >> n;
  std::vector<int> dims(n);
  for (auto& d : dims) in >> d;
  expect_token(in, "hidden");
  std::string hidden;
  in >> hidden;
  expect_token(in, "output");
  std::string output;
  in >> output;
  if (!in) throw ConfigError("mlp checkpoint: truncated header");
  Mlp net(dims, activation_from_string(hidden), activation_from_string(output));
  expect_token(in, "params");
  std::size_t count = 0;
  in >> count;
  if (count != net.params_.size()) throw ConfigError("mlp checkpoint: parameter count mismatch");
  for (auto& p : net.params_) {
    std::string tok;
    if (!(in >> tok)) throw ConfigError("mlp checkpoint: truncated parameters");
    char* end = nullptr;
    p = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') {
      throw ConfigError("mlp checkpoint: bad number '" + tok + "'");
    }
  }
  expect_token(in, "end");
  return net;
}

void Mlp::save_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  save(out);
}

Mlp Mlp::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  return load(in);
}

}  // namespace semcom::nn
