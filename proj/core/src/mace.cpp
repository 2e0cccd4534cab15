#include "annofilter/mace.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>

#include "annofilter/error.hpp"
#include "annofilter/random.hpp"

namespace annofilter {

namespace {

double safe_log(double p) { return std::log(std::max(p, DBL_MIN)); }

double log_sum_exp(const std::vector<double>& v) {
  const double hi = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - hi);
  return hi + std::log(sum);
}

void check_parameters(const AnnotationMatrix& matrix, const MaceParameters& params) {
  const std::size_t k = matrix.scale().cardinality();
  if (params.competence.size() != matrix.num_annotators() ||
      params.spam_strategy.size() != matrix.num_annotators()) {
    throw PreconditionError("MACE parameters do not match the annotator count");
  }
  for (const auto& zeta : params.spam_strategy) {
    if (zeta.size() != k) throw PreconditionError("spam strategy length does not match scale");
  }
}

void check_fittable(const AnnotationMatrix& matrix) {
  if (matrix.scale().cardinality() < 2) throw RangeError("MACE needs a scale with K >= 2");
  if (matrix.num_cells() == 0) throw PreconditionError("MACE needs a non-empty matrix");
  for (std::size_t j = 0; j < matrix.num_annotators(); ++j) {
    if (matrix.responses_of_annotator(j).empty()) {
      throw PreconditionError("annotator '" + matrix.annotator_id(j) + "' has no annotations");
    }
  }
}

// log P(A_ij = a | T_i = t) for a == t and a != t.
struct CellLogLikelihoods {
  std::vector<std::vector<double>> match;
  std::vector<std::vector<double>> mismatch;
};

CellLogLikelihoods cell_log_likelihoods(const MaceParameters& params, std::size_t k) {
  CellLogLikelihoods out;
  const std::size_t n = params.competence.size();
  out.match.assign(n, std::vector<double>(k));
  out.mismatch.assign(n, std::vector<double>(k));
  for (std::size_t j = 0; j < n; ++j) {
    const double theta = params.competence[j];
    for (std::size_t a = 0; a < k; ++a) {
      const double spam = (1.0 - theta) * params.spam_strategy[j][a];
      out.match[j][a] = safe_log(theta + spam);
      out.mismatch[j][a] = safe_log(spam);
    }
  }
  return out;
}

// Unnormalized log posterior over T_i, i.e. log P(T_i = t, A_i).
std::vector<double> item_joint(const AnnotationMatrix& matrix, std::size_t item,
                               const CellLogLikelihoods& cell) {
  const std::size_t k = matrix.scale().cardinality();
  std::vector<double> joint(k, -std::log(static_cast<double>(k)));
  for (const auto& r : matrix.ratings_of_item(item)) {
    for (std::size_t t = 0; t < k; ++t) {
      joint[t] += (r.label_index == t) ? cell.match[r.annotator][r.label_index]
                                        : cell.mismatch[r.annotator][r.label_index];
    }
  }
  return joint;
}

double penalized(double log_likelihood, const MaceParameters& params, double smoothing) {
  return smoothing > 0.0 ? log_likelihood + mace_log_prior(params, smoothing) : log_likelihood;
}

}  // namespace

double mace_log_likelihood(const AnnotationMatrix& matrix, const MaceParameters& params) {
  check_parameters(matrix, params);
  const auto cell = cell_log_likelihoods(params, matrix.scale().cardinality());
  double ll = 0.0;
  for (std::size_t i = 0; i < matrix.num_items(); ++i) {
    if (matrix.ratings_of_item(i).empty()) continue;
    ll += log_sum_exp(item_joint(matrix, i, cell));
  }
  return ll;
}

double mace_log_prior(const MaceParameters& params, double smoothing) {
  double lp = 0.0;
  for (std::size_t j = 0; j < params.competence.size(); ++j) {
    const double theta = params.competence[j];
    lp += smoothing * (safe_log(theta) + safe_log(1.0 - theta));
    for (double z : params.spam_strategy[j]) lp += smoothing * safe_log(z);
  }
  return lp;
}

MaceExpectation mace_e_step(const AnnotationMatrix& matrix, const MaceParameters& params) {
  check_parameters(matrix, params);
  const std::size_t k = matrix.scale().cardinality();
  const std::size_t n = matrix.num_annotators();
  const auto cell = cell_log_likelihoods(params, k);

  MaceExpectation e;
  e.posteriors.assign(matrix.num_items(), std::vector<double>(k, 1.0 / static_cast<double>(k)));
  e.honest_counts.assign(n, 0.0);
  e.response_counts.assign(n, 0.0);
  e.spam_label_counts.assign(n, std::vector<double>(k, 0.0));

  for (std::size_t i = 0; i < matrix.num_items(); ++i) {
    const auto ratings = matrix.ratings_of_item(i);
    if (ratings.empty()) continue;
    auto joint = item_joint(matrix, i, cell);
    const double log_marginal = log_sum_exp(joint);
    e.log_likelihood += log_marginal;
    auto& post = e.posteriors[i];
    for (std::size_t t = 0; t < k; ++t) post[t] = std::exp(joint[t] - log_marginal);

    for (const auto& r : ratings) {
      const std::size_t j = r.annotator;
      const std::size_t a = r.label_index;
      const double theta = params.competence[j];
      const double spam = (1.0 - theta) * params.spam_strategy[j][a];
      // Honest only if T_i = a; then P(S = 0 | T_i = a, A) = theta / (theta + spam).
      const double honest = theta + spam > 0.0 ? post[a] * (theta / (theta + spam)) : 0.0;
      e.honest_counts[j] += honest;
      e.response_counts[j] += 1.0;
      e.spam_label_counts[j][a] += 1.0 - honest;
    }
  }
  return e;
}

MaceParameters mace_m_step(const MaceExpectation& e, double smoothing) {
  const std::size_t n = e.honest_counts.size();
  MaceParameters p;
  p.competence.resize(n);
  p.spam_strategy.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    p.competence[j] = (e.honest_counts[j] + smoothing) / (e.response_counts[j] + 2.0 * smoothing);
    const auto& counts = e.spam_label_counts[j];
    const std::size_t k = counts.size();
    double total = 0.0;
    for (double c : counts) total += c + smoothing;
    auto& zeta = p.spam_strategy[j];
    zeta.resize(k);
    if (total > 0.0) {
      for (std::size_t a = 0; a < k; ++a) zeta[a] = (counts[a] + smoothing) / total;
    } else {
      std::fill(zeta.begin(), zeta.end(), 1.0 / static_cast<double>(k));
    }
  }
  return p;
}

MaceFit mace_run_em(const AnnotationMatrix& matrix, MaceParameters params, std::size_t iterations,
                    double smoothing) {
  check_fittable(matrix);
  check_parameters(matrix, params);
  if (smoothing < 0.0) throw RangeError("MACE smoothing must be >= 0");

  MaceFit fit{.scale = matrix.scale(),
              .items = matrix.items(),
              .annotators = matrix.annotators(),
              .competence = {},
              .spam_strategy = {},
              .posterior_labels = {},
              .log_likelihood_trace = {},
              .objective_trace = {},
              .best_restart = 0};
  fit.log_likelihood_trace.reserve(iterations + 1);
  fit.objective_trace.reserve(iterations + 1);

  MaceExpectation e;
  for (std::size_t it = 0; it <= iterations; ++it) {
    e = mace_e_step(matrix, params);
    fit.log_likelihood_trace.push_back(e.log_likelihood);
    fit.objective_trace.push_back(penalized(e.log_likelihood, params, smoothing));
    if (it == iterations) break;
    params = mace_m_step(e, smoothing);
  }

  fit.competence = std::move(params.competence);
  fit.spam_strategy = std::move(params.spam_strategy);
  fit.posterior_labels.reserve(e.posteriors.size());
  for (auto& post : e.posteriors) {
    fit.posterior_labels.push_back(LabelDistribution::from_weights(matrix.scale(), std::move(post)));
  }
  return fit;
}

MaceParameters mace_initial_parameters(std::size_t annotators, std::size_t cardinality,
                                       std::uint64_t seed) {
  SplitMix64 rng(seed);
  MaceParameters p;
  p.competence.resize(annotators);
  p.spam_strategy.assign(annotators, std::vector<double>(cardinality));
  for (std::size_t j = 0; j < annotators; ++j) {
    p.competence[j] = rng.uniform(0.5, 1.0);
    double total = 0.0;
    for (auto& z : p.spam_strategy[j]) {
      z = 1.0 - rng.uniform();  // (0, 1]
      total += z;
    }
    for (auto& z : p.spam_strategy[j]) z /= total;
  }
  return p;
}

MaceFit mace_fit(const AnnotationMatrix& matrix, const MaceConfig& config) {
  if (config.restarts == 0) throw RangeError("MACE needs at least one restart");
  if (config.em_iterations == 0) throw RangeError("MACE needs at least one EM iteration");
  check_fittable(matrix);
  const std::size_t k = matrix.scale().cardinality();
  const double smoothing = config.smoothing_for(k);

  std::optional<MaceFit> best;
  for (std::size_t r = 0; r < config.restarts; ++r) {
    auto init = mace_initial_parameters(matrix.num_annotators(), k, derive_seed(config.seed, r));
    auto fit = mace_run_em(matrix, std::move(init), config.em_iterations, smoothing);
    fit.best_restart = r;
    if (!best || fit.log_likelihood_trace.back() > best->log_likelihood_trace.back()) {
      best = std::move(fit);
    }
  }
  return std::move(*best);
}

ScoreTable mace_scores(const MaceFit& fit) {
  ScoreTable table{.method = Method::mace, .scores = {}};
  for (std::size_t j = 0; j < fit.annotators.size(); ++j) {
    table.scores.emplace(fit.annotators[j], fit.competence[j]);
  }
  return table;
}

std::vector<int> mace_estimated_labels(const MaceFit& fit) {
  std::vector<int> out;
  out.reserve(fit.posterior_labels.size());
  for (const auto& post : fit.posterior_labels) {
    const auto p = post.probabilities();
    const auto best = std::max_element(p.begin(), p.end()) - p.begin();
    out.push_back(fit.scale.value(static_cast<std::size_t>(best)));
  }
  return out;
}

MaceDistanceDiagnostic mace_distance_diagnostic(const MaceFit& fit, const AnnotationMatrix& matrix,
                                                const AnnotatorRoster& roster) {
  if (fit.items != matrix.items() || fit.annotators != matrix.annotators()) {
    throw ValidationError("MACE fit does not belong to this matrix");
  }
  validate_roster(matrix, roster);
  const auto truth = mace_estimated_labels(fit);

  MaceDistanceDiagnostic diag;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t j = 0; j < matrix.num_annotators(); ++j) {
    double total = 0.0;
    const auto responses = matrix.responses_of_annotator(j);
    for (const auto& r : responses) {
      total += std::abs(matrix.scale().value(r.label_index) - truth[r.item]);
    }
    const double d = total / static_cast<double>(responses.size());
    diag.raw_distance.emplace(matrix.annotator_id(j), d);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  diag.degenerate = !(hi > lo);

  double sums[2] = {0.0, 0.0};
  std::size_t counts[2] = {0, 0};
  for (const auto& [id, d] : diag.raw_distance) {
    const double norm = diag.degenerate ? 0.0 : (d - lo) / (hi - lo);
    diag.normalized_distance.emplace(id, norm);
    const int group = roster.is_spam(id) ? 1 : 0;
    sums[group] += norm;
    ++counts[group];
  }
  if (counts[0] > 0) diag.non_spam_mean = sums[0] / static_cast<double>(counts[0]);
  if (counts[1] > 0) diag.spam_mean = sums[1] / static_cast<double>(counts[1]);
  return diag;
}

}  // namespace annofilter
