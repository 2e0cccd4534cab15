#pragma once

#include "annofilter/annotation.hpp"
#include "annofilter/error.hpp"
#include "annofilter/report.hpp"

namespace annofilter {

/// Additive smoothing applied to both sides of the per-item KL divergence.
inline constexpr double kKlSmoothing = 0.5;

/// Fraction of roster annotators classified correctly when `removed` is the
/// predicted spam set. Throws ValidationError if `removed` has ids outside
/// the roster.
double spam_accuracy(const AnnotatorSet& removed, const AnnotatorRoster& roster);

/// Population standard deviation of all label values.
double dataset_stddev(const AnnotationMatrix& matrix);

/// Mean over items of the per-item label entropy (bits). Items without
/// labels are skipped with a warning.
double mean_instance_entropy(const AnnotationMatrix& matrix, Diagnostics* diag = nullptr);

/// Mean over items of |mean label in `filtered` - mean label of the
/// reference annotators in `original`|. Items empty on either side are
/// skipped with a warning.
double mae_vs_reference(const AnnotationMatrix& filtered, const AnnotatorSet& reference,
                        const AnnotationMatrix& original, Diagnostics* diag = nullptr);

/// Mean over items of D_KL(P_ref || P_filtered) in bits, both histograms
/// smoothed by kKlSmoothing per scale value.
double mean_kl_vs_reference(const AnnotationMatrix& filtered, const AnnotatorSet& reference,
                            const AnnotationMatrix& original, Diagnostics* diag = nullptr);

/// All five metrics for one filtered view; the reference population is the
/// roster's non-spam annotators on `original`.
MetricRow evaluate_filtering(const AnnotatorSet& removed, const AnnotationMatrix& filtered,
                             const AnnotationMatrix& original, const AnnotatorRoster& roster,
                             Diagnostics* diag = nullptr);

}  // namespace annofilter
