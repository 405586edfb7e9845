#pragma once

#include <algorithm>
#include <span>

#include "credo/nn.hpp"

namespace fixtures {

/// Wraps `f(model, grads_or_null) -> loss` as a LossFn over the model's
/// flattened parameters. The model is modified in place while checking.
template <typename Model, typename F>
credo::nn::LossFn model_loss(Model& model, F f) {
  return [&model, f](std::span<const double> p, std::span<double> grad) {
    credo::nn::assign(model.parameters(), p);
    if (grad.empty()) return f(model, static_cast<Model*>(nullptr));
    Model grads = model;
    auto grad_params = grads.parameters();
    credo::nn::set_zero(grad_params);
    double loss = f(model, &grads);
    auto flat = credo::nn::flatten(grad_params);
    std::copy(flat.begin(), flat.end(), grad.begin());
    return loss;
  };
}

}  // namespace fixtures
