#include "annofilter/agreement.hpp"

#include <cmath>
#include <vector>

#include "annofilter/error.hpp"

namespace annofilter {

namespace {

constexpr double kDegenerate = 1e-12;

double agreement_weight(std::size_t i, std::size_t j, std::size_t k, KappaWeighting w) {
  if (w == KappaWeighting::none) return i == j ? 1.0 : 0.0;
  const double d = std::abs(static_cast<double>(i) - static_cast<double>(j)) /
                   static_cast<double>(k - 1);
  return w == KappaWeighting::linear ? 1.0 - d : 1.0 - d * d;
}

// Kappa from a K x K table of paired label-index counts.
double kappa_from_table(const std::vector<double>& table, std::size_t k, double n,
                        KappaWeighting weighting) {
  std::vector<double> row(k, 0.0), col(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      row[i] += table[i * k + j];
      col[j] += table[i * k + j];
    }
  }
  double p_o = 0.0, p_e = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double w = agreement_weight(i, j, k, weighting);
      if (w == 0.0) continue;
      p_o += w * table[i * k + j] / n;
      p_e += w * (row[i] / n) * (col[j] / n);
    }
  }
  if (1.0 - p_e < kDegenerate) return 0.0;
  return (p_o - p_e) / (1.0 - p_e);
}

}  // namespace

std::string_view to_string(KappaWeighting weighting) noexcept {
  switch (weighting) {
    case KappaWeighting::none:
      return "none";
    case KappaWeighting::linear:
      return "linear";
    case KappaWeighting::quadratic:
      return "quadratic";
  }
  return "none";
}

std::optional<KappaWeighting> parse_kappa_weighting(std::string_view name) noexcept {
  for (auto w : {KappaWeighting::none, KappaWeighting::linear, KappaWeighting::quadratic}) {
    if (to_string(w) == name) return w;
  }
  return std::nullopt;
}

double cohens_kappa(std::span<const int> a, std::span<const int> b, const LabelScale& scale,
                    const KappaOptions& options) {
  if (a.size() != b.size()) {
    throw ValidationError("kappa sequences have different lengths (" + std::to_string(a.size()) +
                          " vs " + std::to_string(b.size()) + ")");
  }
  if (a.empty()) throw ValidationError("kappa needs at least one paired label");
  const std::size_t k = scale.cardinality();
  std::vector<double> table(k * k, 0.0);
  for (std::size_t n = 0; n < a.size(); ++n) {
    const auto i = scale.index_of(a[n]);
    const auto j = scale.index_of(b[n]);
    if (!i || !j) throw RangeError("kappa label outside scale " + scale.to_string());
    table[*i * k + *j] += 1.0;
  }
  return kappa_from_table(table, k, static_cast<double>(a.size()), options.weighting);
}

ScoreTable mean_pairwise_kappa(const AnnotationMatrix& matrix, const KappaOptions& options) {
  const std::size_t n = matrix.num_annotators();
  if (n < 2) throw PreconditionError("pairwise kappa needs at least two annotators");
  const std::size_t k = matrix.scale().cardinality();

  std::vector<double> sum(n, 0.0);
  std::vector<std::size_t> partners(n, 0);
  std::vector<double> table(k * k);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      std::fill(table.begin(), table.end(), 0.0);
      double shared = 0.0;
      // Response lists are sorted by item; merge them.
      const auto rx = matrix.responses_of_annotator(x);
      const auto ry = matrix.responses_of_annotator(y);
      std::size_t p = 0, q = 0;
      while (p < rx.size() && q < ry.size()) {
        if (rx[p].item < ry[q].item) {
          ++p;
        } else if (ry[q].item < rx[p].item) {
          ++q;
        } else {
          table[rx[p].label_index * k + ry[q].label_index] += 1.0;
          shared += 1.0;
          ++p;
          ++q;
        }
      }
      if (shared == 0.0) continue;
      const double kappa = kappa_from_table(table, k, shared, options.weighting);
      sum[x] += kappa;
      sum[y] += kappa;
      ++partners[x];
      ++partners[y];
    }
  }

  ScoreTable out{.method = Method::kappa, .scores = {}};
  for (std::size_t j = 0; j < n; ++j) {
    std::optional<double> score;
    if (partners[j] > 0) score = sum[j] / static_cast<double>(partners[j]);
    out.scores.emplace(matrix.annotator_id(j), score);
  }
  return out;
}

}  // namespace annofilter
