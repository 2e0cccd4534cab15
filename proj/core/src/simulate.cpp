#include "annofilter/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "annofilter/error.hpp"
#include "annofilter/random.hpp"

namespace annofilter {

namespace {

std::string padded(char prefix, std::size_t n, std::size_t total) {
  const std::size_t width = std::to_string(total > 0 ? total - 1 : 0).size();
  std::string digits = std::to_string(n);
  return prefix + std::string(width - std::min(width, digits.size()), '0') + digits;
}

std::size_t draw(SplitMix64& rng, const std::vector<double>& weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double u = rng.uniform() * total;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (u < weights[k]) return k;
    u -= weights[k];
  }
  return weights.size() - 1;
}

// Uniform over [0, k) excluding `skip`.
std::size_t draw_other(SplitMix64& rng, std::size_t k, std::size_t skip) {
  const std::size_t r = rng.below(k - 1);
  return r >= skip ? r + 1 : r;
}

std::vector<std::size_t> shuffled(std::size_t n, SplitMix64& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
  return idx;
}

}  // namespace

SimulatedDataset simulate_dataset(const SimulationConfig& config) {
  if (config.items == 0 || config.annotators == 0) {
    throw PreconditionError("simulation needs at least one item and one annotator");
  }
  if (config.spammers > config.annotators) {
    throw PreconditionError("more spammers than annotators");
  }
  const auto scale = LabelScale::range(config.scale_lo, config.scale_hi);
  const std::size_t k = scale.cardinality();
  std::vector<double> prior = config.label_prior;
  if (prior.empty()) prior.assign(k, 1.0);
  if (prior.size() != k) throw RangeError("label prior length does not match the scale");

  SplitMix64 rng(derive_seed(config.seed, "simulate"));

  // Spammers, then the minority group among the rest.
  const auto order = shuffled(config.annotators, rng);
  std::vector<bool> spam(config.annotators, false), minority(config.annotators, false);
  for (std::size_t s = 0; s < config.spammers; ++s) spam[order[s]] = true;
  const std::size_t non_spam = config.annotators - config.spammers;
  const auto n_minority = static_cast<std::size_t>(
      std::llround(config.minority_fraction * static_cast<double>(non_spam)));
  for (std::size_t m = 0; m < n_minority && config.spammers + m < config.annotators; ++m) {
    minority[order[config.spammers + m]] = true;
  }

  std::vector<double> normal(k);
  for (std::size_t a = 0; a < k; ++a) {
    const double z = (scale.value(a) - config.center) / config.spread;
    normal[a] = std::exp(-0.5 * z * z);
  }

  std::vector<AnnotationRecord> records;
  records.reserve(config.items * config.annotators);
  std::vector<int> preferred(config.items);
  for (std::size_t i = 0; i < config.items; ++i) {
    const std::size_t major = draw(rng, prior);
    std::size_t minor = major;
    if (rng.uniform() < config.contested_fraction) {
      auto others = prior;
      others[major] = 0.0;
      if (std::accumulate(others.begin(), others.end(), 0.0) > 0.0) minor = draw(rng, others);
    }
    preferred[i] = scale.value(major);
    const auto item = padded('i', i, config.items);
    for (std::size_t j = 0; j < config.annotators; ++j) {
      std::size_t label = 0;
      if (config.labels == SimulatedLabels::single_mode) {
        label = draw(rng, normal);
      } else {
        const std::size_t target = minority[j] ? minor : major;
        label = rng.uniform() < config.fidelity ? target : draw_other(rng, k, target);
      }
      records.push_back({item, padded('a', j, config.annotators), scale.value(label)});
    }
  }

  AnnotatorRoster roster;
  for (std::size_t j = 0; j < config.annotators; ++j) {
    roster.add(padded('a', j, config.annotators), spam[j]);
  }
  return SimulatedDataset{AnnotationMatrix(scale, records), std::move(roster), std::move(preferred)};
}

}  // namespace annofilter
