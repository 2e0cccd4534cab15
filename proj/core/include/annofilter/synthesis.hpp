#pragma once

#include <cstdint>

#include "annofilter/annotation.hpp"
#include "annofilter/error.hpp"

namespace annofilter {

/// Replaces every gold spammer's label with an independent uniform draw over
/// the scale. Each draw depends only on (seed, item id, annotator id), so the
/// result does not depend on iteration order. Non-spam cells are untouched.
/// With no spammers the input is returned and a warning is recorded.
AnnotationMatrix synth_random(const AnnotationMatrix& matrix, const AnnotatorRoster& roster,
                              std::uint64_t seed, Diagnostics* diag = nullptr);

/// Sets every gold spammer's label to dataset_mode(matrix), computed on the
/// input before any replacement.
AnnotationMatrix synth_fixed(const AnnotationMatrix& matrix, const AnnotatorRoster& roster,
                             Diagnostics* diag = nullptr);

}  // namespace annofilter
