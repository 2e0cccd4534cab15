#include "annofilter/synthesis.hpp"

#include <vector>

#include "annofilter/random.hpp"

namespace annofilter {

namespace {

std::vector<bool> spam_mask(const AnnotationMatrix& matrix, const AnnotatorRoster& roster) {
  validate_roster(matrix, roster);
  std::vector<bool> mask(matrix.num_annotators());
  for (std::size_t j = 0; j < matrix.num_annotators(); ++j) {
    mask[j] = roster.is_spam(matrix.annotator_id(j));
  }
  return mask;
}

bool any(const std::vector<bool>& mask) {
  for (bool b : mask) {
    if (b) return true;
  }
  return false;
}

}  // namespace

AnnotationMatrix synth_random(const AnnotationMatrix& matrix, const AnnotatorRoster& roster,
                              std::uint64_t seed, Diagnostics* diag) {
  const auto spam = spam_mask(matrix, roster);
  if (!any(spam)) {
    warn(diag, "roster has no spammers; random spam synthesis is a no-op");
    return matrix;
  }
  const auto& scale = matrix.scale();
  return matrix.with_labels([&](std::size_t i, std::size_t j, int label) {
    if (!spam[j]) return label;
    const std::uint64_t key = splitmix64(seed ^ fnv1a64(matrix.item_id(i))) ^
                              splitmix64(fnv1a64(matrix.annotator_id(j)) + 0x5851F42D4C957F2DULL);
    SplitMix64 rng(key);
    return scale.value(rng.below(scale.cardinality()));
  });
}

AnnotationMatrix synth_fixed(const AnnotationMatrix& matrix, const AnnotatorRoster& roster,
                             Diagnostics* diag) {
  const auto spam = spam_mask(matrix, roster);
  if (!any(spam)) {
    warn(diag, "roster has no spammers; fixed spam synthesis is a no-op");
    return matrix;
  }
  const int mode = dataset_mode(matrix);
  return matrix.with_labels(
      [&](std::size_t, std::size_t j, int label) { return spam[j] ? mode : label; });
}

}  // namespace annofilter
