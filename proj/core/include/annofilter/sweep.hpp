#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "annofilter/agreement.hpp"
#include "annofilter/annotation.hpp"
#include "annofilter/crowdtruth.hpp"
#include "annofilter/error.hpp"
#include "annofilter/mace.hpp"
#include "annofilter/report.hpp"

namespace annofilter {

struct ScoringOptions {
  /// `mace.seed` is ignored; each seeded method gets a sub-seed derived from
  /// `seed` and the method name.
  MaceConfig mace;
  CrowdTruthConfig crowdtruth;
  KappaOptions kappa;
  std::uint64_t seed = 0;
};

/// Independent uniform score in [0, 1) per annotator. A score depends only on
/// (seed, annotator id).
ScoreTable random_scores(std::span<const std::string> annotators, std::uint64_t seed);

/// Scores every annotator of `matrix` with `method`.
ScoreTable score_annotators(const AnnotationMatrix& matrix, Method method,
                            const ScoringOptions& options);

/// Annotators of `matrix` from most to least spam-like: missing scores first,
/// then ascending score, ties by annotator id.
std::vector<std::string> removal_order(const ScoreTable& scores, const AnnotationMatrix& matrix);

struct Removal {
  AnnotatorSet removed;
  AnnotationMatrix filtered;
};

/// Removes the k lowest-ranked annotators. Throws RangeError unless
/// 0 <= k < annotator count.
Removal rank_and_remove(const ScoreTable& scores, std::size_t k, const AnnotationMatrix& matrix);

/// Scores once per method on the full matrix, then emits one row per
/// k = 0..k_max. Methods that fail to score are reported in `errors`.
/// Duplicate methods are dropped with a warning.
SweepReport sweep(const AnnotationMatrix& matrix, const AnnotatorRoster& roster,
                  std::span<const Method> methods, std::size_t k_max,
                  const ScoringOptions& options, Diagnostics* diag = nullptr);

/// One row per (table, annotator) with the annotator's own label entropy.
std::vector<ScatterRow> scatter_rows(const AnnotationMatrix& matrix, const AnnotatorRoster& roster,
                                     std::span<const ScoreTable> tables);

}  // namespace annofilter
