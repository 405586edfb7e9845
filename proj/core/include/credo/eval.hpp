#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace credo {

/// Seeded shuffle of 0..n-1 cut into k folds; the first n mod k folds get
/// one extra element. Throws ValidationError when k < 2 or k > n.
std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, std::size_t k,
                                                  std::uint64_t seed);

/// The same partition applied to a list of ids.
std::vector<std::vector<std::string>> kfold_split(std::span<const std::string> ids,
                                                  std::size_t k, std::uint64_t seed);

struct MetricsReport {
  double overall_accuracy = 0.0;
  double true_accuracy = 0.0;   ///< accuracy on credible claims
  double false_accuracy = 0.0;  ///< accuracy on non-credible claims
  double macro_accuracy = 0.0;  ///< mean of the two class accuracies
  double auc = 0.0;
  double fake_precision = 0.0;  ///< the non-credible class is the positive one here
  double fake_recall = 0.0;
  double fake_f1 = 0.0;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// `scores` rank claims by credibility (used for AUC); `predictions` and
/// `labels` are true for credible. Throws MetricError naming a missing class.
MetricsReport compute_metrics(std::span<const double> scores, const std::vector<bool>& predictions,
                              const std::vector<bool>& labels);

/// Probability that a random credible claim outscores a random non-credible
/// one, ties counting one half (Mann-Whitney statistic with mid-ranks).
double auc(std::span<const double> scores, const std::vector<bool>& labels);

/// Product-moment correlation. Throws MetricError for fewer than two points
/// or a constant series.
double pearson(std::span<const double> x, std::span<const double> y);

/// Field-wise mean.
MetricsReport mean_report(std::span<const MetricsReport> reports);

}  // namespace credo
