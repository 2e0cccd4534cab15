#include "annofilter/sweep.hpp"

#include <algorithm>
#include <optional>

#include "annofilter/metrics.hpp"
#include "annofilter/random.hpp"

namespace annofilter {

ScoreTable random_scores(std::span<const std::string> annotators, std::uint64_t seed) {
  if (annotators.empty()) throw PreconditionError("random scores need at least one annotator");
  ScoreTable table{.method = Method::random, .scores = {}};
  for (const auto& id : annotators) {
    table.scores.emplace(id, to_unit_interval(splitmix64(seed ^ splitmix64(fnv1a64(id)))));
  }
  return table;
}

ScoreTable score_annotators(const AnnotationMatrix& matrix, Method method,
                            const ScoringOptions& options) {
  switch (method) {
    case Method::mace: {
      MaceConfig config = options.mace;
      config.seed = derive_seed(options.seed, "mace");
      return mace_scores(mace_fit(matrix, config));
    }
    case Method::crowdtruth:
      return crowdtruth_scores(crowdtruth_fit(matrix, options.crowdtruth));
    case Method::kappa:
      return mean_pairwise_kappa(matrix, options.kappa);
    case Method::random:
      return random_scores(matrix.annotators(), derive_seed(options.seed, "random"));
  }
  throw ValidationError("unknown scoring method");
}

std::vector<std::string> removal_order(const ScoreTable& scores, const AnnotationMatrix& matrix) {
  struct Entry {
    std::optional<double> score;
    const std::string* id;
  };
  std::vector<Entry> entries;
  entries.reserve(matrix.num_annotators());
  for (const auto& id : matrix.annotators()) {
    auto it = scores.scores.find(id);
    entries.push_back({it == scores.scores.end() ? std::nullopt : it->second, &id});
  }
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.score.has_value() != b.score.has_value()) return !a.score.has_value();
    if (a.score && *a.score != *b.score) return *a.score < *b.score;
    return *a.id < *b.id;
  });
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(*e.id);
  return out;
}

Removal rank_and_remove(const ScoreTable& scores, std::size_t k, const AnnotationMatrix& matrix) {
  if (k >= matrix.num_annotators()) {
    throw RangeError("k = " + std::to_string(k) + " must be below the annotator count " +
                     std::to_string(matrix.num_annotators()));
  }
  const auto order = removal_order(scores, matrix);
  AnnotatorSet removed(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  auto filtered = matrix.without_annotators(removed);
  return Removal{std::move(removed), std::move(filtered)};
}

SweepReport sweep(const AnnotationMatrix& matrix, const AnnotatorRoster& roster,
                  std::span<const Method> methods, std::size_t k_max,
                  const ScoringOptions& options, Diagnostics* diag) {
  if (methods.empty()) throw PreconditionError("sweep needs at least one method");
  if (k_max >= matrix.num_annotators()) {
    throw RangeError("k_max = " + std::to_string(k_max) + " must be below the annotator count " +
                     std::to_string(matrix.num_annotators()));
  }
  validate_roster(matrix, roster);

  std::vector<Method> unique;
  for (Method m : methods) {
    if (std::find(unique.begin(), unique.end(), m) != unique.end()) {
      warn(diag, "method '" + std::string(to_string(m)) + "' listed more than once; ignoring repeats");
      continue;
    }
    unique.push_back(m);
  }

  SweepReport report;
  report.kappa_weighting = std::string(to_string(options.kappa.weighting));
  const double n = static_cast<double>(matrix.num_annotators());

  for (Method method : unique) {
    ScoreTable scores;
    try {
      scores = score_annotators(matrix, method, options);
    } catch (const Error& e) {
      report.errors.emplace_back(method, e.what());
      warn(diag, "method '" + std::string(to_string(method)) + "' failed: " + e.what());
      continue;
    }
    // One ranking per method; removal sets are prefixes of it and so nested.
    const auto order = removal_order(scores, matrix);
    for (std::size_t k = 0; k <= k_max; ++k) {
      AnnotatorSet removed(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
      const auto filtered = matrix.without_annotators(removed);
      report.rows.push_back(SweepRow{.method = method,
                                     .k = k,
                                     .frac_removed = static_cast<double>(k) / n,
                                     .metrics = evaluate_filtering(removed, filtered, matrix,
                                                                   roster, diag)});
    }
  }
  return report;
}

std::vector<ScatterRow> scatter_rows(const AnnotationMatrix& matrix, const AnnotatorRoster& roster,
                                     std::span<const ScoreTable> tables) {
  validate_roster(matrix, roster);
  std::vector<double> entropy(matrix.num_annotators());
  for (std::size_t j = 0; j < matrix.num_annotators(); ++j) {
    entropy[j] = annotator_entropy(matrix, matrix.annotator_id(j));
  }
  std::vector<ScatterRow> rows;
  rows.reserve(tables.size() * matrix.num_annotators());
  for (const auto& table : tables) {
    for (std::size_t j = 0; j < matrix.num_annotators(); ++j) {
      const auto& id = matrix.annotator_id(j);
      auto it = table.scores.find(id);
      rows.push_back(ScatterRow{.method = table.method,
                                .annotator_id = id,
                                .is_spam = roster.is_spam(id),
                                .annotator_entropy = entropy[j],
                                .score = it == table.scores.end() ? std::nullopt : it->second});
    }
  }
  return rows;
}

}  // namespace annofilter
