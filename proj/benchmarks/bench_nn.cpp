#include <benchmark/benchmark.h>

#include "credo/nn.hpp"

namespace {

void BM_LstmForward(benchmark::State& state) {
  credo::Rng rng(5);
  auto hidden = static_cast<std::size_t>(state.range(0));
  auto params = credo::nn::LstmParams::random(32, hidden, rng);
  credo::RowMatrix inputs = credo::RowMatrix::Random(40, 32);
  for (auto _ : state) benchmark::DoNotOptimize(credo::nn::lstm_forward(params, inputs));
}
BENCHMARK(BM_LstmForward)->Arg(16)->Arg(64);

void BM_LstmBackward(benchmark::State& state) {
  credo::Rng rng(6);
  auto hidden = static_cast<std::size_t>(state.range(0));
  auto params = credo::nn::LstmParams::random(32, hidden, rng);
  credo::RowMatrix inputs = credo::RowMatrix::Random(40, 32);
  auto trace = credo::nn::lstm_forward(params, inputs);
  credo::RowMatrix dh = credo::RowMatrix::Ones(40, static_cast<Eigen::Index>(hidden));
  for (auto _ : state) {
    auto grads = credo::nn::LstmParams::zeros(32, hidden);
    credo::RowMatrix dinputs;
    credo::nn::lstm_backward(params, inputs, trace, dh, grads, &dinputs);
    benchmark::DoNotOptimize(grads);
  }
}
BENCHMARK(BM_LstmBackward)->Arg(16)->Arg(64);

}  // namespace
