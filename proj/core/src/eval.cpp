#include "credo/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "credo/error.hpp"
#include "credo/random.hpp"

namespace credo {

std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k,
                                                  std::uint64_t seed) {
  if (k < 2) throw ValidationError("k-fold needs k >= 2");
  if (k > n) {
    throw ValidationError("k = " + std::to_string(k) + " exceeds dataset size " +
                          std::to_string(n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  shuffle(order, rng);

  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t base = n / k;
  std::size_t extra = n % k;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < k; ++f) {
    std::size_t size = base + (f < extra ? 1 : 0);
    folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                    order.begin() + static_cast<std::ptrdiff_t>(pos + size));
    pos += size;
  }
  return folds;
}

std::vector<std::vector<std::string>> kfold_split(std::span<const std::string> ids,
                                                  std::size_t k, std::uint64_t seed) {
  std::vector<std::vector<std::string>> out;
  for (const auto& fold : kfold_split(ids.size(), k, seed)) {
    auto& dst = out.emplace_back();
    for (std::size_t i : fold) dst.push_back(ids[i]);
  }
  return out;
}

double auc(std::span<const double> scores, const std::vector<bool>& labels) {
  if (scores.size() != labels.size()) throw MetricError("scores and labels differ in length");
  std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double n_pos = 0.0;
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    double mid_rank = 0.5 * static_cast<double>(i + 1 + j);  // mean of ranks i+1..j
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]]) {
        rank_sum += mid_rank;
        n_pos += 1.0;
      }
    }
    i = j;
  }
  double n_neg = static_cast<double>(n) - n_pos;
  if (n_pos == 0.0 || n_neg == 0.0) throw MetricError("AUC needs both classes");
  return (rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

MetricsReport compute_metrics(std::span<const double> scores, const std::vector<bool>& predictions,
                              const std::vector<bool>& labels) {
  if (scores.size() != labels.size() || predictions.size() != labels.size()) {
    throw MetricError("scores, predictions and labels differ in length");
  }
  double tp = 0, tn = 0, fp = 0, fn = 0;  // credible = positive
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i]) {
      (predictions[i] ? tp : fn) += 1.0;
    } else {
      (predictions[i] ? fp : tn) += 1.0;
    }
  }
  bool no_true = tp + fn == 0.0;
  bool no_false = tn + fp == 0.0;
  if (no_true || no_false) {
    throw MetricError(std::string("metrics need both classes; missing: ") +
                      (no_true ? "credible" : "non-credible"));
  }
  MetricsReport r;
  r.overall_accuracy = (tp + tn) / static_cast<double>(labels.size());
  r.true_accuracy = tp / (tp + fn);
  r.false_accuracy = tn / (tn + fp);
  r.macro_accuracy = 0.5 * (r.true_accuracy + r.false_accuracy);
  r.auc = auc(scores, labels);
  r.fake_precision = tn + fn > 0.0 ? tn / (tn + fn) : 0.0;
  r.fake_recall = r.false_accuracy;
  double pr = r.fake_precision + r.fake_recall;
  r.fake_f1 = pr > 0.0 ? 2.0 * r.fake_precision * r.fake_recall / pr : 0.0;
  return r;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw MetricError("pearson inputs differ in length");
  if (x.size() < 2) throw MetricError("pearson needs at least two points");
  double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw MetricError("correlation undefined for a constant series");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

MetricsReport mean_report(std::span<const MetricsReport> reports) {
  MetricsReport m;
  if (reports.empty()) return m;
  for (const auto& r : reports) {
    m.overall_accuracy += r.overall_accuracy;
    m.true_accuracy += r.true_accuracy;
    m.false_accuracy += r.false_accuracy;
    m.macro_accuracy += r.macro_accuracy;
    m.auc += r.auc;
    m.fake_precision += r.fake_precision;
    m.fake_recall += r.fake_recall;
    m.fake_f1 += r.fake_f1;
  }
  double n = static_cast<double>(reports.size());
  m.overall_accuracy /= n;
  m.true_accuracy /= n;
  m.false_accuracy /= n;
  m.macro_accuracy /= n;
  m.auc /= n;
  m.fake_precision /= n;
  m.fake_recall /= n;
  m.fake_f1 /= n;
  return m;
}

}  // namespace credo
