#include "credo/mlp.hpp"

#include <cmath>
#include <set>

#include "credo/error.hpp"

namespace credo {

Mlp::Mlp(std::size_t inputs, std::size_t hidden, std::size_t classes, Rng& rng)
    : classes_(classes) {
  if (inputs == 0 || hidden == 0 || classes < 2) {
    throw ConfigError("MLP needs inputs, hidden units and at least two classes");
  }
  std::size_t outputs = classes == 2 ? 1 : classes;
  auto xavier = [&rng](RowMatrix& m, std::size_t fan_in, std::size_t fan_out) {
    double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = uniform(rng, -bound, bound);
  };
  w1.resize(static_cast<Eigen::Index>(hidden), static_cast<Eigen::Index>(inputs));
  w2.resize(static_cast<Eigen::Index>(outputs), static_cast<Eigen::Index>(hidden));
  xavier(w1, inputs, hidden);
  xavier(w2, hidden, outputs);
  b1 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(hidden));
  b2 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(outputs));
}

nn::ParamList Mlp::parameters() {
  return {nn::param_ref("w1", w1), nn::param_ref("b1", b1), nn::param_ref("w2", w2),
          nn::param_ref("b2", b2)};
}

Eigen::VectorXd Mlp::predict_proba(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != inputs()) {
    throw ConfigError("MLP input has " + std::to_string(x.size()) + " features, expected " +
                      std::to_string(inputs()));
  }
  Eigen::VectorXd hidden = (w1 * x + b1).array().tanh().matrix();
  Eigen::VectorXd z = w2 * hidden + b2;
  Eigen::VectorXd p(static_cast<Eigen::Index>(classes_));
  if (classes_ == 2) {
    p[1] = nn::sigmoid(z[0]);
    p[0] = 1.0 - p[1];
    return p;
  }
  double top = z.maxCoeff();
  p = (z.array() - top).exp().matrix();
  return p / p.sum();
}

std::size_t Mlp::predict(const Eigen::VectorXd& x) const {
  Eigen::VectorXd p = predict_proba(x);
  if (classes_ == 2) return p[1] >= 0.5 ? 1 : 0;
  Eigen::Index best = 0;
  p.maxCoeff(&best);
  return static_cast<std::size_t>(best);
}

double Mlp::example_loss(const Eigen::VectorXd& x, std::size_t cls, Mlp* grads,
                         double grad_scale) const {
  if (cls >= classes_) throw ValidationError("class index out of range");
  Eigen::VectorXd hidden = (w1 * x + b1).array().tanh().matrix();
  Eigen::VectorXd z = w2 * hidden + b2;
  double loss = 0.0;
  Eigen::VectorXd dz(z.size());
  if (classes_ == 2) {
    double y = cls == 1 ? 1.0 : 0.0;
    // softplus(z) - y z, written to avoid overflow
    loss = (z[0] > 0 ? z[0] + std::log1p(std::exp(-z[0])) : std::log1p(std::exp(z[0]))) - y * z[0];
    dz[0] = nn::sigmoid(z[0]) - y;
  } else {
    double top = z.maxCoeff();
    double log_norm = top + std::log((z.array() - top).exp().sum());
    loss = log_norm - z[static_cast<Eigen::Index>(cls)];
    dz = (z.array() - log_norm).exp().matrix();
    dz[static_cast<Eigen::Index>(cls)] -= 1.0;
  }
  if (grads == nullptr) return loss;
  dz *= grad_scale;
  grads->w2 += dz * hidden.transpose();
  grads->b2 += dz;
  Eigen::VectorXd dhidden =
      ((w2.transpose() * dz).array() * (1.0 - hidden.array().square())).matrix();
  grads->w1 += dhidden * x.transpose();
  grads->b1 += dhidden;
  return loss;
}

double mlp_dataset_loss(const Mlp& model, std::span<const Eigen::VectorXd> xs,
                        std::span<const std::size_t> classes,
                        std::span<const double> sample_weights, Mlp* grads) {
  if (xs.size() != classes.size() || xs.size() != sample_weights.size()) {
    throw ValidationError("MLP inputs, classes and weights differ in length");
  }
  if (grads) nn::set_zero(grads->parameters());
  double total = 0.0;
  double weight = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    total += sample_weights[i] * model.example_loss(xs[i], classes[i], grads, sample_weights[i]);
    weight += sample_weights[i];
  }
  if (weight <= 0.0) throw ValidationError("sample weights sum to zero");
  if (grads) {
    for (auto& p : grads->parameters()) {
      for (std::size_t k = 0; k < p.size; ++k) p.data[k] /= weight;
    }
  }
  return total / weight;
}

Mlp train_mlp(std::span<const Eigen::VectorXd> xs, std::span<const std::size_t> classes,
              std::size_t num_classes, const MlpConfig& config) {
  if (xs.empty()) throw ValidationError("MLP training set is empty");
  std::set<std::size_t> present(classes.begin(), classes.end());
  if (present.size() < 2) throw ValidationError("MLP training needs at least two classes");

  std::vector<double> sample_weights(xs.size(), 1.0);
  if (config.class_balanced) {
    std::vector<double> counts(num_classes, 0.0);
    for (std::size_t c : classes) {
      if (c >= num_classes) throw ValidationError("class index out of range");
      counts[c] += 1.0;
    }
    double n = static_cast<double>(xs.size());
    double k = static_cast<double>(present.size());
    for (std::size_t i = 0; i < xs.size(); ++i) sample_weights[i] = n / (k * counts[classes[i]]);
  }

  Rng rng(config.seed);
  Mlp model(static_cast<std::size_t>(xs.front().size()), config.hidden, num_classes, rng);
  Mlp grads = model;
  nn::ParamList params = model.parameters();
  nn::ParamList grad_params = grads.parameters();
  nn::Adam adam(nn::total_size(params), {config.learning_rate});
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    mlp_dataset_loss(model, xs, classes, sample_weights, &grads);
    std::vector<double> g = nn::flatten(grad_params);
    std::vector<double> p = nn::flatten(params);
    adam.step(p, g);
    nn::assign(params, p);
  }
  return model;
}

}  // namespace credo
