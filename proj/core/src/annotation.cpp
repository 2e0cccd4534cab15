#include "annofilter/annotation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "annofilter/error.hpp"

namespace annofilter {

LabelScale::LabelScale(std::vector<int> values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw RangeError("label scale needs at least two values");
  }
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] <= values_[i - 1]) {
      throw RangeError("label scale values must be strictly increasing");
    }
  }
}

LabelScale LabelScale::range(int lo, int hi) {
  if (hi <= lo) {
    throw RangeError("label scale " + std::to_string(lo) + ".." + std::to_string(hi) +
                     " must span at least two values");
  }
  std::vector<int> values(static_cast<std::size_t>(hi - lo + 1));
  std::iota(values.begin(), values.end(), lo);
  return LabelScale(std::move(values));
}

std::optional<std::size_t> LabelScale::index_of(int label) const noexcept {
  auto it = std::lower_bound(values_.begin(), values_.end(), label);
  if (it == values_.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - values_.begin());
}

std::string LabelScale::to_string() const {
  if (values_.back() - values_.front() + 1 == static_cast<int>(values_.size())) {
    return std::to_string(values_.front()) + ".." + std::to_string(values_.back());
  }
  std::string out;
  for (int v : values_) {
    if (!out.empty()) out += ',';
    out += std::to_string(v);
  }
  return out;
}

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::optional<std::size_t> find_sorted(const std::vector<std::string>& ids, std::string_view id) {
  auto it = std::lower_bound(ids.begin(), ids.end(), id,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == ids.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - ids.begin());
}

}  // namespace

AnnotationMatrix::AnnotationMatrix(LabelScale scale, std::span<const AnnotationRecord> records)
    : scale_(std::move(scale)) {
  if (records.empty()) {
    throw PreconditionError("annotation matrix needs at least one cell");
  }
  std::vector<std::string> items;
  std::vector<std::string> annotators;
  items.reserve(records.size());
  annotators.reserve(records.size());
  for (const auto& r : records) {
    items.push_back(r.item_id);
    annotators.push_back(r.annotator_id);
  }
  items_ = sorted_unique(std::move(items));
  annotators_ = sorted_unique(std::move(annotators));
  cells_.assign(items_.size() * annotators_.size(), kMissing);

  for (const auto& r : records) {
    const auto label = scale_.index_of(r.label);
    if (!label) {
      throw RangeError("label " + std::to_string(r.label) + " for item '" + r.item_id +
                       "', annotator '" + r.annotator_id + "' is outside scale " +
                       scale_.to_string());
    }
    const std::size_t i = *find_sorted(items_, r.item_id);
    const std::size_t j = *find_sorted(annotators_, r.annotator_id);
    auto& cell = cells_[i * annotators_.size() + j];
    if (cell != kMissing) {
      throw DuplicateError("duplicate annotation for item '" + r.item_id + "', annotator '" +
                           r.annotator_id + "'");
    }
    cell = static_cast<std::int32_t>(*label);
  }
  build_index();
}

AnnotationMatrix::AnnotationMatrix(LabelScale scale, std::vector<std::string> items,
                                   std::vector<std::string> annotators,
                                   std::vector<std::int32_t> cells)
    : scale_(std::move(scale)),
      items_(std::move(items)),
      annotators_(std::move(annotators)),
      cells_(std::move(cells)) {
  build_index();
}

void AnnotationMatrix::build_index() {
  const std::size_t n_ann = annotators_.size();
  by_item_.assign(items_.size(), {});
  by_annotator_.assign(n_ann, {});
  num_cells_ = 0;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    for (std::size_t j = 0; j < n_ann; ++j) {
      const auto cell = cells_[i * n_ann + j];
      if (cell == kMissing) continue;
      const auto k = static_cast<std::size_t>(cell);
      by_item_[i].push_back({j, k});
      by_annotator_[j].push_back({i, k});
      ++num_cells_;
    }
  }
}

std::optional<std::size_t> AnnotationMatrix::find_item(std::string_view id) const noexcept {
  return find_sorted(items_, id);
}

std::optional<std::size_t> AnnotationMatrix::find_annotator(std::string_view id) const noexcept {
  return find_sorted(annotators_, id);
}

std::size_t AnnotationMatrix::item_index(std::string_view id) const {
  if (auto i = find_item(id)) return *i;
  throw LookupError("unknown item '" + std::string(id) + "'");
}

std::size_t AnnotationMatrix::annotator_index(std::string_view id) const {
  if (auto j = find_annotator(id)) return *j;
  throw LookupError("unknown annotator '" + std::string(id) + "'");
}

std::optional<std::size_t> AnnotationMatrix::label_index(std::size_t item,
                                                         std::size_t annotator) const {
  if (item >= items_.size() || annotator >= annotators_.size()) {
    throw LookupError("cell index out of range");
  }
  const auto cell = cells_[item * annotators_.size() + annotator];
  if (cell == kMissing) return std::nullopt;
  return static_cast<std::size_t>(cell);
}

std::optional<int> AnnotationMatrix::label(std::size_t item, std::size_t annotator) const {
  if (auto k = label_index(item, annotator)) return scale_.value(*k);
  return std::nullopt;
}

std::vector<AnnotationRecord> AnnotationMatrix::records() const {
  std::vector<AnnotationRecord> out;
  out.reserve(num_cells_);
  for (std::size_t i = 0; i < items_.size(); ++i) {
    for (const auto& r : by_item_[i]) {
      out.push_back({items_[i], annotators_[r.annotator], scale_.value(r.label_index)});
    }
  }
  return out;
}

AnnotationMatrix AnnotationMatrix::without_annotators(const AnnotatorSet& removed) const {
  std::vector<std::size_t> kept;
  std::vector<std::string> annotators;
  for (std::size_t j = 0; j < annotators_.size(); ++j) {
    if (!removed.contains(annotators_[j])) {
      kept.push_back(j);
      annotators.push_back(annotators_[j]);
    }
  }
  std::vector<std::int32_t> cells(items_.size() * kept.size(), kMissing);
  for (std::size_t i = 0; i < items_.size(); ++i) {
    for (std::size_t c = 0; c < kept.size(); ++c) {
      cells[i * kept.size() + c] = cells_[i * annotators_.size() + kept[c]];
    }
  }
  return AnnotationMatrix(scale_, items_, std::move(annotators), std::move(cells));
}

AnnotationMatrix AnnotationMatrix::with_labels(
    const std::function<int(std::size_t, std::size_t, int)>& relabel) const {
  std::vector<std::int32_t> cells = cells_;
  const std::size_t n_ann = annotators_.size();
  for (std::size_t i = 0; i < items_.size(); ++i) {
    for (const auto& r : by_item_[i]) {
      const int value = relabel(i, r.annotator, scale_.value(r.label_index));
      const auto k = scale_.index_of(value);
      if (!k) {
        throw RangeError("relabeled value " + std::to_string(value) + " is outside scale " +
                         scale_.to_string());
      }
      cells[i * n_ann + r.annotator] = static_cast<std::int32_t>(*k);
    }
  }
  return AnnotationMatrix(scale_, items_, annotators_, std::move(cells));
}

void AnnotatorRoster::add(std::string annotator_id, bool is_spam) {
  auto [it, inserted] = entries_.emplace(std::move(annotator_id), is_spam);
  if (!inserted) {
    throw DuplicateError("annotator '" + it->first + "' listed twice in roster");
  }
}

bool AnnotatorRoster::contains(std::string_view annotator_id) const noexcept {
  return entries_.find(annotator_id) != entries_.end();
}

bool AnnotatorRoster::is_spam(std::string_view annotator_id) const {
  auto it = entries_.find(annotator_id);
  if (it == entries_.end()) {
    throw LookupError("annotator '" + std::string(annotator_id) + "' not in roster");
  }
  return it->second;
}

std::size_t AnnotatorRoster::spam_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [](const auto& e) { return e.second; }));
}

AnnotatorSet AnnotatorRoster::spammers() const {
  AnnotatorSet out;
  for (const auto& [id, spam] : entries_) {
    if (spam) out.insert(id);
  }
  return out;
}

AnnotatorSet AnnotatorRoster::non_spammers() const {
  AnnotatorSet out;
  for (const auto& [id, spam] : entries_) {
    if (!spam) out.insert(id);
  }
  return out;
}

AnnotatorSet AnnotatorRoster::all() const {
  AnnotatorSet out;
  for (const auto& entry : entries_) out.insert(entry.first);
  return out;
}

void validate_roster(const AnnotationMatrix& matrix, const AnnotatorRoster& roster) {
  for (const auto& id : matrix.annotators()) {
    if (!roster.contains(id)) {
      throw ValidationError("annotator '" + id + "' has annotations but is missing from roster");
    }
  }
  if (roster.size() != matrix.num_annotators()) {
    for (const auto& [id, spam] : roster.entries()) {
      if (!matrix.find_annotator(id)) {
        throw ValidationError("roster lists annotator '" + id + "' with no annotations");
      }
    }
  }
}

LabelDistribution LabelDistribution::from_counts(const LabelScale& scale,
                                                 std::span<const std::size_t> counts) {
  if (counts.size() != scale.cardinality()) {
    throw RangeError("count vector length does not match scale cardinality");
  }
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (total == 0) {
    throw EmptyDistributionError("no labels to build a distribution from");
  }
  std::vector<double> p(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    p[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
  }
  return LabelDistribution(scale, std::move(p));
}

LabelDistribution LabelDistribution::from_weights(const LabelScale& scale,
                                                  std::vector<double> weights) {
  if (weights.size() != scale.cardinality()) {
    throw RangeError("weight vector length does not match scale cardinality");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw RangeError("distribution weights must be finite and >= 0");
    total += w;
  }
  if (total <= 0.0) throw EmptyDistributionError("distribution weights sum to zero");
  for (double& w : weights) w /= total;
  return LabelDistribution(scale, std::move(weights));
}

double LabelDistribution::probability_of(int label) const {
  const auto k = scale_.index_of(label);
  if (!k) throw RangeError("label " + std::to_string(label) + " not on scale");
  return probabilities_[*k];
}

double LabelDistribution::entropy_bits() const { return annofilter::entropy_bits(probabilities_); }

double entropy_bits(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

std::vector<std::size_t> item_label_counts(const AnnotationMatrix& matrix, std::size_t item,
                                           const std::vector<bool>* annotator_mask) {
  std::vector<std::size_t> counts(matrix.scale().cardinality(), 0);
  for (const auto& r : matrix.ratings_of_item(item)) {
    if (annotator_mask == nullptr || (*annotator_mask)[r.annotator]) {
      ++counts[r.label_index];
    }
  }
  return counts;
}

std::vector<bool> annotator_mask(const AnnotationMatrix& matrix, const AnnotatorSet& subset) {
  std::vector<bool> mask(matrix.num_annotators(), false);
  for (std::size_t j = 0; j < matrix.num_annotators(); ++j) {
    mask[j] = subset.contains(matrix.annotator_id(j));
  }
  return mask;
}

LabelDistribution item_distribution(const AnnotationMatrix& matrix, std::string_view item,
                                    const AnnotatorSet& subset) {
  if (subset.empty()) {
    throw PreconditionError("annotator subset must be non-empty");
  }
  const auto mask = annotator_mask(matrix, subset);
  const auto counts = item_label_counts(matrix, matrix.item_index(item), &mask);
  try {
    return LabelDistribution::from_counts(matrix.scale(), counts);
  } catch (const EmptyDistributionError&) {
    throw EmptyDistributionError("no annotator in the subset labeled item '" + std::string(item) +
                                 "'");
  }
}

LabelDistribution item_distribution(const AnnotationMatrix& matrix, std::string_view item) {
  const auto counts = item_label_counts(matrix, matrix.item_index(item));
  try {
    return LabelDistribution::from_counts(matrix.scale(), counts);
  } catch (const EmptyDistributionError&) {
    throw EmptyDistributionError("item '" + std::string(item) + "' has no labels");
  }
}

int dataset_mode(const AnnotationMatrix& matrix) {
  if (matrix.num_cells() == 0) {
    throw PreconditionError("dataset mode of an empty matrix");
  }
  std::vector<std::size_t> totals(matrix.scale().cardinality(), 0);
  for (std::size_t i = 0; i < matrix.num_items(); ++i) {
    for (const auto& r : matrix.ratings_of_item(i)) ++totals[r.label_index];
  }
  // max_element returns the first maximum, i.e. the smallest label value.
  const auto best = std::max_element(totals.begin(), totals.end()) - totals.begin();
  return matrix.scale().value(static_cast<std::size_t>(best));
}

double annotator_entropy(const AnnotationMatrix& matrix, std::string_view annotator) {
  const auto responses = matrix.responses_of_annotator(matrix.annotator_index(annotator));
  if (responses.empty()) {
    throw PreconditionError("annotator '" + std::string(annotator) + "' has no annotations");
  }
  std::vector<std::size_t> counts(matrix.scale().cardinality(), 0);
  for (const auto& r : responses) ++counts[r.label_index];
  return LabelDistribution::from_counts(matrix.scale(), counts).entropy_bits();
}

}  // namespace annofilter
