#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "annofilter/error.hpp"

namespace annofilter {

/// Ordered set of integer label values, e.g. 1..3 or 1..7.
class LabelScale {
 public:
  /// Throws RangeError unless `values` is strictly increasing with >= 2 entries.
  explicit LabelScale(std::vector<int> values);

  /// The contiguous scale lo..hi inclusive.
  static LabelScale range(int lo, int hi);

  std::span<const int> values() const noexcept { return values_; }
  std::size_t cardinality() const noexcept { return values_.size(); }
  int value(std::size_t index) const { return values_.at(index); }
  int min() const noexcept { return values_.front(); }
  int max() const noexcept { return values_.back(); }

  std::optional<std::size_t> index_of(int label) const noexcept;
  bool contains(int label) const noexcept { return index_of(label).has_value(); }

  /// "LO..HI" for contiguous scales, otherwise a comma-separated list.
  std::string to_string() const;

  friend bool operator==(const LabelScale&, const LabelScale&) = default;

 private:
  std::vector<int> values_;
};

/// One observed label in long format.
struct AnnotationRecord {
  std::string item_id;
  std::string annotator_id;
  int label = 0;

  friend bool operator==(const AnnotationRecord&, const AnnotationRecord&) = default;
};

using AnnotatorSet = std::set<std::string, std::less<>>;

/// Item x annotator matrix of categorical labels with missing cells allowed.
///
/// Item and annotator identifiers are stored in lexicographic order, so two
/// matrices holding the same cells compare equal whatever order the records
/// arrived in. Labels are kept as indices into the scale.
///
/// A matrix built from records has at least one cell per item and per
/// annotator. Views produced by `without_annotators` keep the full item list
/// so that items stay aligned with the source matrix; such views may contain
/// items with no remaining cells.
class AnnotationMatrix {
 public:
  struct Rating {
    std::size_t annotator;
    std::size_t label_index;
  };
  struct Response {
    std::size_t item;
    std::size_t label_index;
  };

  /// Throws PreconditionError on empty input, RangeError for labels outside
  /// the scale and DuplicateError for repeated (item, annotator) pairs.
  AnnotationMatrix(LabelScale scale, std::span<const AnnotationRecord> records);

  const LabelScale& scale() const noexcept { return scale_; }
  std::size_t num_items() const noexcept { return items_.size(); }
  std::size_t num_annotators() const noexcept { return annotators_.size(); }
  std::size_t num_cells() const noexcept { return num_cells_; }

  const std::vector<std::string>& items() const noexcept { return items_; }
  const std::vector<std::string>& annotators() const noexcept { return annotators_; }
  const std::string& item_id(std::size_t i) const { return items_.at(i); }
  const std::string& annotator_id(std::size_t j) const { return annotators_.at(j); }

  std::optional<std::size_t> find_item(std::string_view id) const noexcept;
  std::optional<std::size_t> find_annotator(std::string_view id) const noexcept;
  /// Throws LookupError for unknown ids.
  std::size_t item_index(std::string_view id) const;
  std::size_t annotator_index(std::string_view id) const;

  std::optional<std::size_t> label_index(std::size_t item, std::size_t annotator) const;
  std::optional<int> label(std::size_t item, std::size_t annotator) const;

  std::span<const Rating> ratings_of_item(std::size_t item) const { return by_item_.at(item); }
  std::span<const Response> responses_of_annotator(std::size_t annotator) const {
    return by_annotator_.at(annotator);
  }

  /// All cells in (item_id, annotator_id) order.
  std::vector<AnnotationRecord> records() const;

  /// Drops every cell of the given annotators (ids not in the matrix are
  /// ignored). The item list is preserved.
  AnnotationMatrix without_annotators(const AnnotatorSet& removed) const;

  /// Same support, labels rewritten by `relabel(item, annotator, label)`.
  /// Throws RangeError if a new label is outside the scale.
  AnnotationMatrix with_labels(
      const std::function<int(std::size_t item, std::size_t annotator, int label)>& relabel) const;

  friend bool operator==(const AnnotationMatrix& a, const AnnotationMatrix& b) {
    return a.scale_ == b.scale_ && a.items_ == b.items_ && a.annotators_ == b.annotators_ &&
           a.cells_ == b.cells_;
  }

 private:
  static constexpr std::int32_t kMissing = -1;

  AnnotationMatrix(LabelScale scale, std::vector<std::string> items,
                   std::vector<std::string> annotators, std::vector<std::int32_t> cells);
  void build_index();

  LabelScale scale_;
  std::vector<std::string> items_;
  std::vector<std::string> annotators_;
  std::vector<std::int32_t> cells_;  // row-major, items x annotators
  std::vector<std::vector<Rating>> by_item_;
  std::vector<std::vector<Response>> by_annotator_;
  std::size_t num_cells_ = 0;
};

/// Gold spam flags per annotator.
class AnnotatorRoster {
 public:
  AnnotatorRoster() = default;

  /// Throws DuplicateError if `annotator_id` is already present.
  void add(std::string annotator_id, bool is_spam);

  bool contains(std::string_view annotator_id) const noexcept;
  /// Throws LookupError for unknown ids.
  bool is_spam(std::string_view annotator_id) const;

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t spam_count() const noexcept;
  AnnotatorSet spammers() const;
  AnnotatorSet non_spammers() const;
  AnnotatorSet all() const;

  const std::map<std::string, bool, std::less<>>& entries() const noexcept { return entries_; }

  friend bool operator==(const AnnotatorRoster&, const AnnotatorRoster&) = default;

 private:
  std::map<std::string, bool, std::less<>> entries_;
};

/// Throws ValidationError unless the roster lists exactly the matrix's annotators.
void validate_roster(const AnnotationMatrix& matrix, const AnnotatorRoster& roster);

/// Normalized histogram over a label scale.
class LabelDistribution {
 public:
  /// Throws EmptyDistributionError when all counts are zero.
  static LabelDistribution from_counts(const LabelScale& scale, std::span<const std::size_t> counts);
  /// Takes non-negative weights and normalizes them. Throws
  /// EmptyDistributionError when they sum to zero.
  static LabelDistribution from_weights(const LabelScale& scale, std::vector<double> weights);

  const LabelScale& scale() const noexcept { return scale_; }
  std::span<const double> probabilities() const noexcept { return probabilities_; }
  double operator[](std::size_t index) const { return probabilities_.at(index); }
  double probability_of(int label) const;
  double entropy_bits() const;

 private:
  LabelDistribution(LabelScale scale, std::vector<double> probabilities)
      : scale_(std::move(scale)), probabilities_(std::move(probabilities)) {}

  LabelScale scale_;
  std::vector<double> probabilities_;
};

/// Shannon entropy in bits; zero entries contribute nothing.
double entropy_bits(std::span<const double> probabilities);

/// Per-scale-value label counts on one item. When `annotator_mask` is given,
/// only annotators whose mask entry is true are counted.
std::vector<std::size_t> item_label_counts(const AnnotationMatrix& matrix, std::size_t item,
                                           const std::vector<bool>* annotator_mask = nullptr);

/// Mask over `matrix.annotators()` selecting the ids in `subset`.
std::vector<bool> annotator_mask(const AnnotationMatrix& matrix, const AnnotatorSet& subset);

/// Label distribution of `item` among the annotators in `subset`.
/// Throws EmptyDistributionError if none of them labeled the item.
LabelDistribution item_distribution(const AnnotationMatrix& matrix, std::string_view item,
                                    const AnnotatorSet& subset);
/// Same, over all annotators.
LabelDistribution item_distribution(const AnnotationMatrix& matrix, std::string_view item);

/// Most frequent label over all cells; ties go to the smallest label value.
int dataset_mode(const AnnotationMatrix& matrix);

/// Entropy (bits) of one annotator's own label histogram.
double annotator_entropy(const AnnotationMatrix& matrix, std::string_view annotator);

}  // namespace annofilter
