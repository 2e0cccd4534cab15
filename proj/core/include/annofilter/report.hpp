#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace annofilter {

/// Annotator scoring methods.
enum class Method { mace, crowdtruth, kappa, random };

std::string_view to_string(Method method) noexcept;
std::optional<Method> parse_method(std::string_view name) noexcept;

/// Reliability score per annotator under one method; lower means more
/// spam-like. An empty value marks an annotator the method could not
/// score; such annotators rank below every real score.
struct ScoreTable {
  Method method = Method::random;
  std::map<std::string, std::optional<double>, std::less<>> scores;
};

/// The five evaluation metrics for one filtered view.
struct MetricRow {
  double accuracy = 0.0;
  double stddev = 0.0;
  double mean_entropy = 0.0;  // bits
  double mae = 0.0;
  double kl = 0.0;  // bits
};

struct SweepRow {
  Method method = Method::random;
  std::size_t k = 0;
  double frac_removed = 0.0;
  MetricRow metrics;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  /// Methods whose scoring failed; their rows are omitted.
  std::vector<std::pair<Method, std::string>> errors;
  /// Weighting used for the kappa method ("none", "linear" or "quadratic").
  std::string kappa_weighting = "none";
};

/// One point of the per-annotator entropy vs. score scatter.
struct ScatterRow {
  Method method = Method::random;
  std::string annotator_id;
  bool is_spam = false;
  double annotator_entropy = 0.0;
  std::optional<double> score;
};

}  // namespace annofilter
