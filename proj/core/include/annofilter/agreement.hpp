#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "annofilter/annotation.hpp"
#include "annofilter/report.hpp"

namespace annofilter {

enum class KappaWeighting { none, linear, quadratic };

std::string_view to_string(KappaWeighting weighting) noexcept;
std::optional<KappaWeighting> parse_kappa_weighting(std::string_view name) noexcept;

struct KappaOptions {
  KappaWeighting weighting = KappaWeighting::none;
};

/// Cohen's kappa between two aligned label sequences on `scale`:
/// (p_o - p_e) / (1 - p_e), with agreement weights 1 - |i-j|/(K-1) (linear)
/// or 1 - (i-j)^2/(K-1)^2 (quadratic) over scale positions. Returns 0 when
/// 1 - p_e < 1e-12. Throws ValidationError on length mismatch or empty input
/// and RangeError for labels not on the scale.
double cohens_kappa(std::span<const int> a, std::span<const int> b, const LabelScale& scale,
                    const KappaOptions& options = {});

/// Mean kappa of each annotator against every other annotator it shares at
/// least one item with. Annotators sharing no items with anyone get no
/// score. Throws PreconditionError with fewer than two annotators.
ScoreTable mean_pairwise_kappa(const AnnotationMatrix& matrix, const KappaOptions& options = {});

}  // namespace annofilter
