#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "annofilter/annotation.hpp"
#include "annofilter/error.hpp"
#include "annofilter/report.hpp"

namespace annofilter {

// CSV headers, byte-exact.
inline constexpr std::string_view kAnnotationsHeader = "item_id,annotator_id,label";
inline constexpr std::string_view kRosterHeader = "annotator_id,is_spam";
inline constexpr std::string_view kScoresHeader = "method,annotator_id,score";
inline constexpr std::string_view kSweepHeader =
    "method,k,frac_removed,accuracy,stddev,mean_entropy,mae,kl";
inline constexpr std::string_view kScatterHeader =
    "method,annotator_id,is_spam,annotator_entropy,score";

/// Parses "LO..HI" (e.g. "1..7"). Throws RangeError on malformed text or an
/// empty span.
LabelScale parse_scale(std::string_view text);

/// Reads long-format annotations. Without a declared scale the scale is
/// inferred as [min label, max label] and a warning is recorded.
AnnotationMatrix parse_annotations(std::istream& in, const std::optional<LabelScale>& scale,
                                   Diagnostics* diag = nullptr);

AnnotatorRoster parse_roster(std::istream& in);

void write_annotations(std::ostream& out, const AnnotationMatrix& matrix);
void write_roster(std::ostream& out, const AnnotatorRoster& roster);

/// Rows ordered by method name, then annotator id. Missing scores are
/// written as an empty field.
void write_scores(std::ostream& out, std::span<const ScoreTable> tables);

/// Rows ordered by method name, then k.
void write_sweep(std::ostream& out, const SweepReport& report);

/// Rows ordered by method name, then annotator id.
void write_scatter(std::ostream& out, std::span<const ScatterRow> rows);

/// Fixed six-decimal rendering used by every writer; never emits "-0.000000".
std::string format_real(double value);

}  // namespace annofilter
