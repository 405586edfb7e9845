#include "credo/nn.hpp"

#include <algorithm>
#include <cmath>

#include "credo/error.hpp"

namespace credo::nn {

Tensor::Tensor(std::vector<std::size_t> shape_, double fill) : shape(std::move(shape_)) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  values.assign(n, fill);
}

void Tensor::validate() const {
  std::size_t n = 1;
  for (auto d : shape) {
    if (d == 0) throw ConfigError("tensor dimension must be positive");
    n *= d;
  }
  if (n != values.size()) {
    throw ConfigError("tensor shape product " + std::to_string(n) + " != value count " +
                      std::to_string(values.size()));
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw ConfigError("tensor contains a non-finite value");
  }
}

ParamRef param_ref(std::string name, RowMatrix& m) {
  return {std::move(name),
          {static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())},
          m.data(),
          static_cast<std::size_t>(m.size())};
}

ParamRef param_ref(std::string name, VectorXd& v) {
  return {std::move(name), {static_cast<std::size_t>(v.size())}, v.data(),
          static_cast<std::size_t>(v.size())};
}

std::size_t total_size(const ParamList& params) {
  std::size_t n = 0;
  for (const auto& p : params) n += p.size;
  return n;
}

std::vector<double> flatten(const ParamList& params) {
  std::vector<double> out;
  out.reserve(total_size(params));
  for (const auto& p : params) out.insert(out.end(), p.data, p.data + p.size);
  return out;
}

void assign(const ParamList& params, std::span<const double> values) {
  if (values.size() != total_size(params)) {
    throw ConfigError("flat parameter vector has wrong length");
  }
  std::size_t offset = 0;
  for (const auto& p : params) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(offset), p.size, p.data);
    offset += p.size;
  }
}

void set_zero(const ParamList& params) {
  for (const auto& p : params) std::fill_n(p.data, p.size, 0.0);
}

// ---------------------------------------------------------------------------

LstmParams LstmParams::zeros(std::size_t input_size, std::size_t hidden_size) {
  LstmParams p;
  p.input_size = input_size;
  p.hidden_size = hidden_size;
  auto gates = static_cast<Eigen::Index>(4 * hidden_size);
  p.w_input = RowMatrix::Zero(gates, static_cast<Eigen::Index>(input_size));
  p.w_recurrent = RowMatrix::Zero(gates, static_cast<Eigen::Index>(hidden_size));
  p.bias = VectorXd::Zero(gates);
  return p;
}

LstmParams LstmParams::random(std::size_t input_size, std::size_t hidden_size, Rng& rng) {
  LstmParams p = zeros(input_size, hidden_size);
  double scale = 1.0 / std::sqrt(static_cast<double>(hidden_size));
  for (Eigen::Index i = 0; i < p.w_input.size(); ++i) p.w_input.data()[i] = uniform(rng, -scale, scale);
  for (Eigen::Index i = 0; i < p.w_recurrent.size(); ++i) {
    p.w_recurrent.data()[i] = uniform(rng, -scale, scale);
  }
  for (Eigen::Index i = 0; i < p.bias.size(); ++i) p.bias[i] = uniform(rng, -scale, scale);
  auto h = static_cast<Eigen::Index>(hidden_size);
  p.bias.segment(h, h).setOnes();
  return p;
}

void LstmParams::append_to(ParamList& params, const std::string& prefix) {
  params.push_back(param_ref(prefix + ".w_input", w_input));
  params.push_back(param_ref(prefix + ".w_recurrent", w_recurrent));
  params.push_back(param_ref(prefix + ".bias", bias));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

// Turns pre-activations into gate values in place.
void activate_gates(Eigen::Ref<VectorXd> z, Eigen::Index h) {
  for (Eigen::Index k = 0; k < 3 * h; ++k) z[k] = sigmoid(z[k]);
  for (Eigen::Index k = 3 * h; k < 4 * h; ++k) z[k] = std::tanh(z[k]);
}

void check_size(Eigen::Index got, std::size_t want, const char* operand) {
  if (static_cast<std::size_t>(got) != want) {
    throw ConfigError(std::string("lstm shape mismatch in ") + operand + ": expected " +
                      std::to_string(want) + ", got " + std::to_string(got));
  }
}

void check_params(const LstmParams& p) {
  check_size(p.w_input.rows(), 4 * p.hidden_size, "w_input rows");
  check_size(p.w_input.cols(), p.input_size, "w_input cols");
  check_size(p.w_recurrent.rows(), 4 * p.hidden_size, "w_recurrent rows");
  check_size(p.w_recurrent.cols(), p.hidden_size, "w_recurrent cols");
  check_size(p.bias.size(), 4 * p.hidden_size, "bias");
}

}  // namespace

LstmState lstm_step(const VectorXd& x, const VectorXd& h_prev, const VectorXd& c_prev,
                    const LstmParams& params) {
  check_params(params);
  check_size(x.size(), params.input_size, "x");
  check_size(h_prev.size(), params.hidden_size, "h_prev");
  check_size(c_prev.size(), params.hidden_size, "c_prev");
  auto h = static_cast<Eigen::Index>(params.hidden_size);
  VectorXd z = params.w_input * x + params.w_recurrent * h_prev + params.bias;
  activate_gates(z, h);
  LstmState s;
  s.c = z.segment(h, h).cwiseProduct(c_prev) + z.segment(0, h).cwiseProduct(z.segment(3 * h, h));
  s.h = z.segment(2 * h, h).cwiseProduct(s.c.array().tanh().matrix());
  return s;
}

LstmTrace lstm_forward(const LstmParams& params, const RowMatrix& inputs) {
  check_params(params);
  check_size(inputs.cols(), params.input_size, "inputs");
  const Eigen::Index steps = inputs.rows();
  const auto h = static_cast<Eigen::Index>(params.hidden_size);

  LstmTrace tr;
  tr.gates.resize(steps, 4 * h);
  tr.c.resize(steps, h);
  tr.tanh_c.resize(steps, h);
  tr.h.resize(steps, h);

  VectorXd h_prev = VectorXd::Zero(h);
  VectorXd c_prev = VectorXd::Zero(h);
  VectorXd z(4 * h);
  for (Eigen::Index t = 0; t < steps; ++t) {
    z.noalias() = params.w_input * inputs.row(t).transpose();
    z.noalias() += params.w_recurrent * h_prev;
    z += params.bias;
    activate_gates(z, h);
    for (Eigen::Index k = 0; k < h; ++k) {
      double c = z[h + k] * c_prev[k] + z[k] * z[3 * h + k];
      double tc = std::tanh(c);
      c_prev[k] = c;
      h_prev[k] = z[2 * h + k] * tc;
      tr.c(t, k) = c;
      tr.tanh_c(t, k) = tc;
      tr.h(t, k) = h_prev[k];
    }
    tr.gates.row(t) = z.transpose();
  }
  return tr;
}

void lstm_backward(const LstmParams& params, const RowMatrix& inputs, const LstmTrace& trace,
                   const RowMatrix& dh, LstmParams& grads, RowMatrix* dinputs) {
  const Eigen::Index steps = inputs.rows();
  const auto h = static_cast<Eigen::Index>(params.hidden_size);
  check_size(dh.rows(), static_cast<std::size_t>(steps), "dh rows");
  check_size(dh.cols(), params.hidden_size, "dh cols");
  if (dinputs) dinputs->setZero(steps, static_cast<Eigen::Index>(params.input_size));

  VectorXd dh_next = VectorXd::Zero(h);
  VectorXd dc_next = VectorXd::Zero(h);
  VectorXd dz(4 * h);
  for (Eigen::Index t = steps - 1; t >= 0; --t) {
    for (Eigen::Index k = 0; k < h; ++k) {
      double i = trace.gates(t, k);
      double f = trace.gates(t, h + k);
      double o = trace.gates(t, 2 * h + k);
      double g = trace.gates(t, 3 * h + k);
      double tc = trace.tanh_c(t, k);
      double c_prev = t > 0 ? trace.c(t - 1, k) : 0.0;
      double dht = dh(t, k) + dh_next[k];
      double dc = dc_next[k] + dht * o * (1.0 - tc * tc);
      dz[k] = dc * g * i * (1.0 - i);
      dz[h + k] = dc * c_prev * f * (1.0 - f);
      dz[2 * h + k] = dht * tc * o * (1.0 - o);
      dz[3 * h + k] = dc * i * (1.0 - g * g);
      dc_next[k] = dc * f;
    }
    grads.w_input.noalias() += dz * inputs.row(t);
    if (t > 0) grads.w_recurrent.noalias() += dz * trace.h.row(t - 1);
    grads.bias += dz;
    dh_next.noalias() = params.w_recurrent.transpose() * dz;
    if (dinputs) dinputs->row(t).noalias() = (params.w_input.transpose() * dz).transpose();
  }
}

RowMatrix reverse_rows(const RowMatrix& m) { return m.colwise().reverse(); }

VectorXd bilstm_encode(const RowMatrix& inputs, const LstmParams& fwd, const LstmParams& bwd,
                       BiLstmTrace* trace) {
  if (inputs.rows() == 0) throw EmptySequence();
  BiLstmTrace local;
  BiLstmTrace& tr = trace ? *trace : local;
  tr.forward = lstm_forward(fwd, inputs);
  tr.backward = lstm_forward(bwd, reverse_rows(inputs));
  const auto hf = static_cast<Eigen::Index>(fwd.hidden_size);
  const auto hb = static_cast<Eigen::Index>(bwd.hidden_size);
  VectorXd out(hf + hb);
  out.head(hf) = tr.forward.h.row(inputs.rows() - 1).transpose();
  out.tail(hb) = tr.backward.h.row(inputs.rows() - 1).transpose();
  return out;
}

void bilstm_backward(const RowMatrix& inputs, const LstmParams& fwd, const LstmParams& bwd,
                     const BiLstmTrace& trace, const VectorXd& dencoding, LstmParams& dfwd,
                     LstmParams& dbwd, RowMatrix* dinputs) {
  const Eigen::Index steps = inputs.rows();
  const auto hf = static_cast<Eigen::Index>(fwd.hidden_size);
  const auto hb = static_cast<Eigen::Index>(bwd.hidden_size);
  RowMatrix dh_f = RowMatrix::Zero(steps, hf);
  RowMatrix dh_b = RowMatrix::Zero(steps, hb);
  dh_f.row(steps - 1) = dencoding.head(hf).transpose();
  dh_b.row(steps - 1) = dencoding.tail(hb).transpose();

  RowMatrix dx_f;
  RowMatrix dx_b;
  lstm_backward(fwd, inputs, trace.forward, dh_f, dfwd, dinputs ? &dx_f : nullptr);
  RowMatrix reversed = reverse_rows(inputs);
  lstm_backward(bwd, reversed, trace.backward, dh_b, dbwd, dinputs ? &dx_b : nullptr);
  if (dinputs) *dinputs = dx_f + reverse_rows(dx_b);
}

VectorXd mean_pool(const RowMatrix& hiddens) {
  if (hiddens.rows() == 0) throw EmptySequence();
  return hiddens.colwise().mean().transpose();
}

RowMatrix gather_rows(const RowMatrix& table, std::span<const Vocabulary::Id> ids) {
  RowMatrix out(static_cast<Eigen::Index>(ids.size()), table.cols());
  for (std::size_t t = 0; t < ids.size(); ++t) {
    out.row(static_cast<Eigen::Index>(t)) = table.row(ids[t]);
  }
  return out;
}

void scatter_add_rows(RowMatrix& dtable, std::span<const Vocabulary::Id> ids,
                      const RowMatrix& dinputs) {
  for (std::size_t t = 0; t < ids.size(); ++t) {
    dtable.row(ids[t]) += dinputs.row(static_cast<Eigen::Index>(t));
  }
}

// ---------------------------------------------------------------------------

void sgd_step(std::span<double> params, std::span<const double> grads, double learning_rate) {
  if (params.size() != grads.size()) throw ConfigError("sgd_step: size mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) params[i] -= learning_rate * grads[i];
}

Adam::Adam(std::size_t parameter_count, AdamConfig config)
    : config_(config), m_(parameter_count, 0.0), v_(parameter_count, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grads) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw ConfigError("adam_step: size mismatch");
  }
  ++t_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double bias1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double bias2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    double g = grads[i];
    m_[i] = b1 * m_[i] + (1.0 - b1) * g;
    v_[i] = b2 * v_[i] + (1.0 - b2) * g * g;
    double m_hat = m_[i] / bias1;
    double v_hat = v_[i] / bias2;
    params[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
  }
}

double clip_global_norm(std::span<double> grads, double max_norm) {
  double sq = 0.0;
  for (double g : grads) sq += g * g;
  double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    double scale = max_norm / norm;
    for (double& g : grads) g *= scale;
  }
  return norm;
}

GradCheckResult grad_check(const LossFn& loss, std::span<const double> params, double epsilon) {
  std::vector<double> p(params.begin(), params.end());
  std::vector<double> analytic(p.size(), 0.0);
  double base = loss(p, analytic);
  if (!std::isfinite(base)) throw Error("grad_check: non-finite loss");

  GradCheckResult result;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double orig = p[i];
    auto at = [&](double offset) {
      p[i] = orig + offset;
      double v = loss(p, {});
      if (!std::isfinite(v)) throw Error("grad_check: non-finite loss");
      return v;
    };
    double plus2 = at(2.0 * epsilon);
    double plus1 = at(epsilon);
    double minus1 = at(-epsilon);
    double minus2 = at(-2.0 * epsilon);
    p[i] = orig;
    double numeric = (8.0 * (plus1 - minus1) - (plus2 - minus2)) / (12.0 * epsilon);
    double denom = std::max({std::abs(analytic[i]), std::abs(numeric), 1e-8});
    double rel = std::abs(analytic[i] - numeric) / denom;
    if (i == 0 || rel > result.max_relative_error) {
      result = {rel, i, analytic[i], numeric};
    }
  }
  return result;
}

}  // namespace credo::nn
