#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "annofilter/annotation.hpp"
#include "annofilter/report.hpp"

namespace annofilter {

// CrowdTruth worker and unit quality metrics for closed single-choice tasks.
//
// Annotations are one-hot vectors over the label scale. Per iteration
// (Jacobi style, all terms from the previous iterate):
//
//   UQS(u)  = sum_{i<j on u} WQS(i) WQS(j) cos(v_iu, v_ju) / sum WQS(i) WQS(j)
//   WWA(i)  = sum_{u, j != i} cos(v_iu, v_ju) WQS(j) UQS(u) / sum WQS(j) UQS(u)
//   WUA(i)  = sum_u cos(v_iu, V_u - v_iu) UQS(u) / sum UQS(u)
//   WQS(i)  = WWA(i) * WUA(i)
//
// where V_u is the summed annotation vector of unit u. UQS uses the previous
// WQS; WWA uses the new UQS and the previous WQS. A sum whose weights are all
// zero yields 0.

struct CrowdTruthConfig {
  /// Stop once no WQS or UQS value moves by more than this.
  double tolerance = 1e-6;
  std::size_t max_iterations = 100;
};

struct CrowdTruthState {
  std::vector<std::string> workers;  // matrix.annotators()
  std::vector<std::string> units;    // matrix.items()
  std::vector<double> wqs;
  std::vector<double> wwa;
  std::vector<double> wua;
  std::vector<double> uqs;
  std::size_t iterations_run = 0;
  bool converged = false;
};

double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// One-hot vector of `worker`'s label on `unit`. Throws LookupError if the
/// worker did not annotate the unit.
std::vector<double> worker_vector(const AnnotationMatrix& matrix, std::string_view worker,
                                  std::string_view unit);

/// Element-wise sum of worker vectors on `unit`, optionally leaving one worker out.
std::vector<double> unit_vector(const AnnotationMatrix& matrix, std::string_view unit,
                                std::optional<std::string_view> excluding = std::nullopt);

/// All scores at 1, zero iterations.
CrowdTruthState crowdtruth_initial_state(const AnnotationMatrix& matrix);

/// One update of every score from `previous`.
CrowdTruthState crowdtruth_step(const AnnotationMatrix& matrix, const CrowdTruthState& previous);

/// Largest absolute WQS or UQS difference between two states.
double crowdtruth_max_change(const CrowdTruthState& a, const CrowdTruthState& b);

/// Iterates from the initial state until the change drops to the tolerance
/// or max_iterations is reached (converged = false). Throws
/// PreconditionError if a unit has fewer than two workers.
CrowdTruthState crowdtruth_fit(const AnnotationMatrix& matrix, const CrowdTruthConfig& config = {});

/// score(worker) = WQS.
ScoreTable crowdtruth_scores(const CrowdTruthState& state);

}  // namespace annofilter
