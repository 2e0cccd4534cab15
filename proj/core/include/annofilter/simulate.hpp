#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "annofilter/annotation.hpp"

namespace annofilter {

// Planted annotation datasets with a known spam roster. Gold spammers are
// generated with the same behavior as non-spam annotators; synth_random or
// synth_fixed then gives them spam behavior.

enum class SimulatedLabels {
  /// Each item has a preferred label drawn from `label_prior`; annotators
  /// report it with probability `fidelity`, otherwise another label
  /// uniformly. With minority_fraction > 0, a minority group prefers a
  /// different label on a `contested_fraction` of items.
  perspectives,
  /// Every annotator draws from one discretized normal around `center`.
  single_mode,
};

struct SimulationConfig {
  std::size_t items = 50;
  std::size_t annotators = 100;
  std::size_t spammers = 15;
  int scale_lo = 1;
  int scale_hi = 3;
  SimulatedLabels labels = SimulatedLabels::perspectives;
  double fidelity = 0.7;
  /// Weights over scale values for preferred labels; empty means uniform.
  std::vector<double> label_prior;
  /// Share of non-spam annotators in the minority group.
  double minority_fraction = 0.0;
  double contested_fraction = 0.0;
  double center = 4.0;
  double spread = 1.0;
  std::uint64_t seed = 0;
};

struct SimulatedDataset {
  AnnotationMatrix matrix;
  AnnotatorRoster roster;
  /// Majority preferred label per item, aligned with matrix.items().
  std::vector<int> preferred_labels;
};

/// Ids are zero-padded ("i007", "a042") so lexicographic order matches
/// numeric order; spammers are a seeded random subset of annotators.
SimulatedDataset simulate_dataset(const SimulationConfig& config);

}  // namespace annofilter
