#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "annofilter/annotation.hpp"
#include "annofilter/report.hpp"

namespace annofilter {

// Multi-annotator competence estimation.
//
// Generative model: each item's true label T_i is uniform over the scale.
// For every observed cell, annotator j spams with probability 1 - theta_j;
// a spamming annotator draws its label from its own strategy zeta_j, an
// honest one reports T_i. Parameters are fit by EM on the marginal
// likelihood of the observed labels, with random restarts.

struct MaceConfig {
  std::size_t restarts = 50;
  std::size_t em_iterations = 50;
  /// Pseudo-count added to every M-step count; empty means 0.1 / K.
  std::optional<double> smoothing;
  std::uint64_t seed = 0;

  double smoothing_for(std::size_t cardinality) const {
    return smoothing.value_or(0.1 / static_cast<double>(cardinality));
  }
};

/// Per-annotator parameters, indexed like `matrix.annotators()`.
struct MaceParameters {
  std::vector<double> competence;                  // theta_j
  std::vector<std::vector<double>> spam_strategy;  // zeta_j, length K each
};

/// Output of one E-step.
struct MaceExpectation {
  std::vector<std::vector<double>> posteriors;  // per item, P(T_i = k | A)
  double log_likelihood = 0.0;                  // natural log, marginal over T and S
  std::vector<double> honest_counts;            // per annotator, E[#cells with S = 0]
  std::vector<double> response_counts;          // per annotator, #cells
  std::vector<std::vector<double>> spam_label_counts;  // per annotator and label, E[#spam cells]
};

struct MaceFit {
  LabelScale scale;
  std::vector<std::string> items;
  std::vector<std::string> annotators;
  std::vector<double> competence;
  std::vector<std::vector<double>> spam_strategy;
  std::vector<LabelDistribution> posterior_labels;
  /// Marginal log-likelihood (nats) of the winning restart: entry t is the
  /// value after t EM updates, so the trace has em_iterations + 1 entries.
  std::vector<double> log_likelihood_trace;
  /// Log-likelihood plus the log prior implied by the smoothing pseudo-counts;
  /// this is the quantity each EM update cannot decrease. Equals the
  /// log-likelihood trace when smoothing is zero.
  std::vector<double> objective_trace;
  std::size_t best_restart = 0;
};

/// Marginal log-likelihood of the observed labels under `params`.
double mace_log_likelihood(const AnnotationMatrix& matrix, const MaceParameters& params);

/// Log density of the Beta/Dirichlet prior that additive smoothing corresponds
/// to, up to a constant.
double mace_log_prior(const MaceParameters& params, double smoothing);

MaceExpectation mace_e_step(const AnnotationMatrix& matrix, const MaceParameters& params);
MaceParameters mace_m_step(const MaceExpectation& expectation, double smoothing);

/// Runs `iterations` EM updates from `initial` and fills the traces. The
/// returned fit carries the restart index 0.
MaceFit mace_run_em(const AnnotationMatrix& matrix, MaceParameters initial,
                    std::size_t iterations, double smoothing);

/// Random initial parameters: theta in [0.5, 1), zeta normalized uniform draws.
MaceParameters mace_initial_parameters(std::size_t annotators, std::size_t cardinality,
                                       std::uint64_t seed);

/// Best of `config.restarts` EM runs by final log-likelihood; ties go to the
/// lowest restart index. Throws PreconditionError if an annotator has no
/// annotations.
MaceFit mace_fit(const AnnotationMatrix& matrix, const MaceConfig& config);

/// score(annotator) = theta.
ScoreTable mace_scores(const MaceFit& fit);

/// Argmax of each posterior, ties to the smaller label value.
std::vector<int> mace_estimated_labels(const MaceFit& fit);

struct MaceDistanceDiagnostic {
  std::map<std::string, double, std::less<>> raw_distance;
  std::map<std::string, double, std::less<>> normalized_distance;
  /// Mean normalized distance per roster group; empty when a group has no
  /// members.
  std::optional<double> spam_mean;
  std::optional<double> non_spam_mean;
  /// All raw distances equal, so min-max normalization is undefined and
  /// every normalized distance is reported as zero.
  bool degenerate = false;
};

/// Mean |label - estimated true label| per annotator, min-max normalized over
/// annotators and averaged per spam / non-spam group.
MaceDistanceDiagnostic mace_distance_diagnostic(const MaceFit& fit,
                                                const AnnotationMatrix& matrix,
                                                const AnnotatorRoster& roster);

}  // namespace annofilter
