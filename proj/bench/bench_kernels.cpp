#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "semcom/agents/sac.hpp"
#include "semcom/nn/kernels.hpp"
#include "semcom/nn/mlp.hpp"

using namespace semcom;
using namespace semcom::nn;

namespace {

struct Buffers {
  DenseShape s;
  std::vector<double> x, w, b, y, gy, gx, gw, gb;

  explicit Buffers(DenseShape shape) : s(shape) {
    Rng rng(1);
    std::normal_distribution<double> g;
    auto fill = [&](std::vector<double>& v, std::size_t n) {
      v.resize(n);
      for (auto& e : v) e = g(rng);
    };
    const auto bi = static_cast<std::size_t>(s.batch) * s.in;
    const auto bo = static_cast<std::size_t>(s.batch) * s.out;
    const auto oi = static_cast<std::size_t>(s.out) * s.in;
    fill(x, bi);
    fill(w, oi);
    fill(b, s.out);
    fill(gy, bo);
    y.assign(bo, 0.0);
    gx.assign(bi, 0.0);
    gw.assign(oi, 0.0);
    gb.assign(s.out, 0.0);
  }
};

DenseShape shape_of(const benchmark::State& st) {
  return {static_cast<int>(st.range(0)), static_cast<int>(st.range(1)), static_cast<int>(st.range(1))};
}

template <Backend B>
void BM_DenseForward(benchmark::State& st) {
  Buffers buf(shape_of(st));
  for (auto _ : st) {
    dense_forward(B, buf.s, buf.x, buf.w, buf.b, buf.y);
    benchmark::DoNotOptimize(buf.y.data());
  }
  st.SetItemsProcessed(st.iterations() * buf.s.batch * buf.s.in * buf.s.out);
}

template <Backend B>
void BM_DenseBackward(benchmark::State& st) {
  Buffers buf(shape_of(st));
  for (auto _ : st) {
    dense_backward_input(B, buf.s, buf.gy, buf.w, buf.gx);
    dense_backward_params(B, buf.s, buf.gy, buf.x, buf.gw, buf.gb);
    benchmark::DoNotOptimize(buf.gw.data());
  }
  st.SetItemsProcessed(st.iterations() * 2 * buf.s.batch * buf.s.in * buf.s.out);
}

template <Backend B>
void BM_SacUpdate(benchmark::State& st) {
  agents::SacConfig cfg;
  cfg.hidden = {static_cast<int>(st.range(1)), static_cast<int>(st.range(1))};
  Rng rng(2);
  agents::SacAgent agent(23, 12, cfg, rng);
  agent.set_backend(B);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<agents::Transition> data(static_cast<std::size_t>(st.range(0)));
  for (auto& t : data) {
    t.observation.resize(23);
    t.next_observation.resize(23);
    t.action.resize(12);
    for (auto& v : t.observation) v = u(rng);
    for (auto& v : t.next_observation) v = u(rng);
    for (auto& v : t.action) v = u(rng);
  }
  std::vector<const agents::Transition*> batch;
  for (const auto& t : data) batch.push_back(&t);
  for (auto _ : st) benchmark::DoNotOptimize(agent.update(batch, rng).critic1);
}

}  // namespace

#define SHAPES Args({1, 64})->Args({128, 64})->Args({256, 128})->Args({1024, 256})

BENCHMARK(BM_DenseForward<Backend::Serial>)->SHAPES;
BENCHMARK(BM_DenseForward<Backend::Parallel>)->SHAPES;
BENCHMARK(BM_DenseBackward<Backend::Serial>)->SHAPES;
BENCHMARK(BM_DenseBackward<Backend::Parallel>)->SHAPES;
BENCHMARK(BM_SacUpdate<Backend::Serial>)->Args({128, 64})->Args({256, 128})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SacUpdate<Backend::Parallel>)->Args({128, 64})->Args({256, 128})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
