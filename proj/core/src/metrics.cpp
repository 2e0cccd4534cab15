#include "annofilter/metrics.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace annofilter {

namespace {

std::optional<double> mean_label(const AnnotationMatrix& m, std::size_t item,
                                 const std::vector<bool>* mask) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : m.ratings_of_item(item)) {
    if (mask != nullptr && !(*mask)[r.annotator]) continue;
    sum += m.scale().value(r.label_index);
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

double smoothed_kl_bits(const std::vector<std::size_t>& ref, const std::vector<std::size_t>& filt) {
  const double k = static_cast<double>(ref.size());
  double ref_total = 0.0, filt_total = 0.0;
  for (std::size_t a = 0; a < ref.size(); ++a) {
    ref_total += static_cast<double>(ref[a]);
    filt_total += static_cast<double>(filt[a]);
  }
  ref_total += kKlSmoothing * k;
  filt_total += kKlSmoothing * k;
  double kl = 0.0;
  for (std::size_t a = 0; a < ref.size(); ++a) {
    const double p = (static_cast<double>(ref[a]) + kKlSmoothing) / ref_total;
    const double q = (static_cast<double>(filt[a]) + kKlSmoothing) / filt_total;
    kl += p * std::log2(p / q);
  }
  return kl;
}

// Calls `term(original_item, filtered_item)` for every item of `original`
// and averages the values it returns; empty results are skipped.
double average_over_items(
    const AnnotationMatrix& filtered, const AnnotationMatrix& original, Diagnostics* diag,
    const char* metric,
    const std::function<std::optional<double>(std::size_t, std::size_t)>& term) {
  if (filtered.scale() != original.scale()) {
    throw ValidationError("filtered and original matrices use different scales");
  }
  double sum = 0.0;
  std::size_t used = 0, skipped = 0;
  for (std::size_t i = 0; i < original.num_items(); ++i) {
    const auto fi = filtered.find_item(original.item_id(i));
    std::optional<double> value;
    if (fi) value = term(i, *fi);
    if (!value) {
      ++skipped;
      continue;
    }
    sum += *value;
    ++used;
  }
  if (skipped > 0) {
    warn(diag, std::string(metric) + ": skipped " + std::to_string(skipped) +
                   " item(s) with no labels in the filtered or reference view");
  }
  if (used == 0) throw PreconditionError(std::string(metric) + ": no item has labels on both sides");
  return sum / static_cast<double>(used);
}

}  // namespace

double spam_accuracy(const AnnotatorSet& removed, const AnnotatorRoster& roster) {
  if (roster.empty()) throw PreconditionError("spam accuracy over an empty roster");
  for (const auto& id : removed) {
    if (!roster.contains(id)) {
      throw ValidationError("removed annotator '" + id + "' is not in the roster");
    }
  }
  std::size_t correct = 0;
  for (const auto& [id, spam] : roster.entries()) {
    if (removed.contains(id) == spam) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(roster.size());
}

double dataset_stddev(const AnnotationMatrix& matrix) {
  if (matrix.num_cells() == 0) throw PreconditionError("standard deviation of an empty matrix");
  const auto& scale = matrix.scale();
  double sum = 0.0;
  for (std::size_t i = 0; i < matrix.num_items(); ++i) {
    for (const auto& r : matrix.ratings_of_item(i)) sum += scale.value(r.label_index);
  }
  const double n = static_cast<double>(matrix.num_cells());
  const double mean = sum / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < matrix.num_items(); ++i) {
    for (const auto& r : matrix.ratings_of_item(i)) {
      const double d = scale.value(r.label_index) - mean;
      ss += d * d;
    }
  }
  return std::sqrt(ss / n);
}

double mean_instance_entropy(const AnnotationMatrix& matrix, Diagnostics* diag) {
  double sum = 0.0;
  std::size_t used = 0, skipped = 0;
  for (std::size_t i = 0; i < matrix.num_items(); ++i) {
    const auto counts = item_label_counts(matrix, i);
    std::size_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) {
      ++skipped;
      continue;
    }
    sum += LabelDistribution::from_counts(matrix.scale(), counts).entropy_bits();
    ++used;
  }
  if (skipped > 0) {
    warn(diag, "mean_entropy: skipped " + std::to_string(skipped) + " item(s) with no labels");
  }
  if (used == 0) throw PreconditionError("mean_entropy: no item has labels");
  return sum / static_cast<double>(used);
}

double mae_vs_reference(const AnnotationMatrix& filtered, const AnnotatorSet& reference,
                        const AnnotationMatrix& original, Diagnostics* diag) {
  const auto mask = annotator_mask(original, reference);
  return average_over_items(filtered, original, diag, "mae",
                            [&](std::size_t oi, std::size_t fi) -> std::optional<double> {
                              const auto ref = mean_label(original, oi, &mask);
                              const auto filt = mean_label(filtered, fi, nullptr);
                              if (!ref || !filt) return std::nullopt;
                              return std::abs(*filt - *ref);
                            });
}

double mean_kl_vs_reference(const AnnotationMatrix& filtered, const AnnotatorSet& reference,
                            const AnnotationMatrix& original, Diagnostics* diag) {
  const auto mask = annotator_mask(original, reference);
  return average_over_items(filtered, original, diag, "kl",
                            [&](std::size_t oi, std::size_t fi) -> std::optional<double> {
                              const auto ref = item_label_counts(original, oi, &mask);
                              const auto filt = item_label_counts(filtered, fi);
                              std::size_t nr = 0, nf = 0;
                              for (auto c : ref) nr += c;
                              for (auto c : filt) nf += c;
                              if (nr == 0 || nf == 0) return std::nullopt;
                              return smoothed_kl_bits(ref, filt);
                            });
}

MetricRow evaluate_filtering(const AnnotatorSet& removed, const AnnotationMatrix& filtered,
                             const AnnotationMatrix& original, const AnnotatorRoster& roster,
                             Diagnostics* diag) {
  const auto reference = roster.non_spammers();
  return MetricRow{.accuracy = spam_accuracy(removed, roster),
                   .stddev = dataset_stddev(filtered),
                   .mean_entropy = mean_instance_entropy(filtered, diag),
                   .mae = mae_vs_reference(filtered, reference, original, diag),
                   .kl = mean_kl_vs_reference(filtered, reference, original, diag)};
}

}  // namespace annofilter
