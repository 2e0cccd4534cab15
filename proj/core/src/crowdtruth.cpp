#include "annofilter/crowdtruth.hpp"

#include <algorithm>
#include <cmath>

#include "annofilter/error.hpp"

namespace annofilter {

namespace {

double ratio_or_zero(double num, double den) { return den > 0.0 ? num / den : 0.0; }

void check_units(const AnnotationMatrix& matrix) {
  for (std::size_t u = 0; u < matrix.num_items(); ++u) {
    if (matrix.ratings_of_item(u).size() < 2) {
      throw PreconditionError("unit '" + matrix.item_id(u) +
                              "' has fewer than two workers; CrowdTruth needs at least two");
    }
  }
}

}  // namespace

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw RangeError("cosine of vectors with different lengths");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na <= 0.0 || nb <= 0.0) return 0.0;
  return dot / std::sqrt(na * nb);
}

std::vector<double> worker_vector(const AnnotationMatrix& matrix, std::string_view worker,
                                  std::string_view unit) {
  const auto k = matrix.label_index(matrix.item_index(unit), matrix.annotator_index(worker));
  if (!k) {
    throw LookupError("worker '" + std::string(worker) + "' did not annotate unit '" +
                      std::string(unit) + "'");
  }
  std::vector<double> v(matrix.scale().cardinality(), 0.0);
  v[*k] = 1.0;
  return v;
}

std::vector<double> unit_vector(const AnnotationMatrix& matrix, std::string_view unit,
                                std::optional<std::string_view> excluding) {
  std::optional<std::size_t> skip;
  if (excluding) skip = matrix.annotator_index(*excluding);
  std::vector<double> v(matrix.scale().cardinality(), 0.0);
  for (const auto& r : matrix.ratings_of_item(matrix.item_index(unit))) {
    if (skip && r.annotator == *skip) continue;
    v[r.label_index] += 1.0;
  }
  return v;
}

CrowdTruthState crowdtruth_initial_state(const AnnotationMatrix& matrix) {
  const std::size_t n = matrix.num_annotators();
  const std::size_t m = matrix.num_items();
  return CrowdTruthState{.workers = matrix.annotators(),
                         .units = matrix.items(),
                         .wqs = std::vector<double>(n, 1.0),
                         .wwa = std::vector<double>(n, 1.0),
                         .wua = std::vector<double>(n, 1.0),
                         .uqs = std::vector<double>(m, 1.0),
                         .iterations_run = 0,
                         .converged = false};
}

CrowdTruthState crowdtruth_step(const AnnotationMatrix& matrix, const CrowdTruthState& prev) {
  const std::size_t n = matrix.num_annotators();
  const std::size_t m = matrix.num_items();
  const std::size_t k = matrix.scale().cardinality();
  if (prev.wqs.size() != n || prev.uqs.size() != m) {
    throw PreconditionError("CrowdTruth state does not match the matrix");
  }

  CrowdTruthState next = prev;
  ++next.iterations_run;
  next.converged = false;

  // Per unit: previous-WQS mass per label, raw label counts.
  std::vector<std::vector<double>> weight_by_label(m, std::vector<double>(k, 0.0));
  std::vector<std::vector<double>> count_by_label(m, std::vector<double>(k, 0.0));
  std::vector<double> weight_total(m, 0.0);

  for (std::size_t u = 0; u < m; ++u) {
    double sq = 0.0;
    for (const auto& r : matrix.ratings_of_item(u)) {
      const double w = prev.wqs[r.annotator];
      weight_by_label[u][r.label_index] += w;
      count_by_label[u][r.label_index] += 1.0;
      weight_total[u] += w;
      sq += w * w;
    }
    // Pairwise sums via (sum w)^2 - sum w^2 = 2 * sum_{i<j} w_i w_j; the
    // cosine of two one-hot vectors is 1 for equal labels and 0 otherwise.
    double sq_same = 0.0;
    for (std::size_t a = 0; a < k; ++a) sq_same += weight_by_label[u][a] * weight_by_label[u][a];
    const double same = 0.5 * (sq_same - sq);
    const double all = 0.5 * (weight_total[u] * weight_total[u] - sq);
    next.uqs[u] = std::clamp(ratio_or_zero(same, all), 0.0, 1.0);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double w_i = prev.wqs[i];
    double wwa_num = 0.0, wwa_den = 0.0, wua_num = 0.0, wua_den = 0.0;
    for (const auto& r : matrix.responses_of_annotator(i)) {
      const std::size_t u = r.item;
      const std::size_t a = r.label_index;
      const double q = next.uqs[u];
      wwa_num += q * (weight_by_label[u][a] - w_i);
      wwa_den += q * (weight_total[u] - w_i);

      // cos(e_a, V_u - e_a) = (c_a - 1) / ||V_u - e_a||
      const auto& counts = count_by_label[u];
      double norm_sq = 0.0;
      for (std::size_t b = 0; b < k; ++b) {
        const double c = counts[b] - (b == a ? 1.0 : 0.0);
        norm_sq += c * c;
      }
      const double cos = norm_sq > 0.0 ? (counts[a] - 1.0) / std::sqrt(norm_sq) : 0.0;
      wua_num += q * cos;
      wua_den += q;
    }
    next.wwa[i] = std::clamp(ratio_or_zero(wwa_num, wwa_den), 0.0, 1.0);
    next.wua[i] = std::clamp(ratio_or_zero(wua_num, wua_den), 0.0, 1.0);
    next.wqs[i] = next.wwa[i] * next.wua[i];
  }
  return next;
}

double crowdtruth_max_change(const CrowdTruthState& a, const CrowdTruthState& b) {
  double change = 0.0;
  for (std::size_t i = 0; i < a.wqs.size(); ++i) change = std::max(change, std::abs(a.wqs[i] - b.wqs[i]));
  for (std::size_t u = 0; u < a.uqs.size(); ++u) change = std::max(change, std::abs(a.uqs[u] - b.uqs[u]));
  return change;
}

CrowdTruthState crowdtruth_fit(const AnnotationMatrix& matrix, const CrowdTruthConfig& config) {
  if (!(config.tolerance > 0.0)) throw RangeError("CrowdTruth tolerance must be > 0");
  if (config.max_iterations == 0) throw RangeError("CrowdTruth needs at least one iteration");
  check_units(matrix);

  auto state = crowdtruth_initial_state(matrix);
  while (state.iterations_run < config.max_iterations) {
    auto next = crowdtruth_step(matrix, state);
    const double change = crowdtruth_max_change(state, next);
    state = std::move(next);
    if (change <= config.tolerance) {
      state.converged = true;
      break;
    }
  }
  return state;
}

ScoreTable crowdtruth_scores(const CrowdTruthState& state) {
  ScoreTable table{.method = Method::crowdtruth, .scores = {}};
  for (std::size_t i = 0; i < state.workers.size(); ++i) {
    table.scores.emplace(state.workers[i], state.wqs[i]);
  }
  return table;
}

}  // namespace annofilter
