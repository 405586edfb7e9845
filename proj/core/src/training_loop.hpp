#pragma once

#include <numeric>
#include <vector>

#include "credo/nn.hpp"
#include "credo/random.hpp"

namespace credo::detail {

/// Mean of `example_loss(model, i, nullptr)` over all examples.
template <typename Model, typename ExampleLoss>
double mean_loss(const Model& model, std::size_t n, ExampleLoss&& example_loss) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += example_loss(model, i, nullptr);
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

/// Shuffled minibatch Adam with global-norm clipping. `example_loss(model, i,
/// grads)` returns the loss of example i and, when `grads` is non-null, adds
/// its gradient there. Gradients are summed in example order, so a fixed seed
/// gives bit-identical models.
template <typename Model, typename ExampleLoss>
nn::TrainingReport fit_minibatch(Model& model, std::size_t n, const nn::TrainingConfig& cfg,
                                 Rng& rng, ExampleLoss&& example_loss) {
  nn::TrainingReport report;
  report.initial_loss = mean_loss(model, n, example_loss);

  Model grads = model;
  nn::ParamList params = model.parameters();
  nn::ParamList grad_params = grads.parameters();
  nn::Adam adam(nn::total_size(params), {cfg.learning_rate});

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t batch = std::max<std::size_t>(1, cfg.batch_size);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(order, rng);
    double epoch_total = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      std::size_t end = std::min(n, start + batch);
      nn::set_zero(grad_params);
      for (std::size_t k = start; k < end; ++k) {
        epoch_total += example_loss(model, order[k], &grads);
      }
      std::vector<double> g = nn::flatten(grad_params);
      double scale = 1.0 / static_cast<double>(end - start);
      for (double& v : g) v *= scale;
      nn::clip_global_norm(g, cfg.grad_clip);
      std::vector<double> p = nn::flatten(params);
      adam.step(p, g);
      nn::assign(params, p);
    }
    report.epoch_losses.push_back(n == 0 ? 0.0 : epoch_total / static_cast<double>(n));
  }
  report.final_loss = mean_loss(model, n, example_loss);
  return report;
}

}  // namespace credo::detail
