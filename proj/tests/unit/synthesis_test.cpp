#include <gtest/gtest.h>

#include <cmath>

#include "annofilter/synthesis.hpp"

using namespace annofilter;

namespace {

struct Fixture {
  AnnotationMatrix matrix;
  AnnotatorRoster roster;
};

// 350 items, two honest annotators with labels 1 and 2, one spammer that
// starts at 3 everywhere. One honest cell is missing.
Fixture dices_like() {
  std::vector<AnnotationRecord> r;
  for (int i = 0; i < 350; ++i) {
    const auto item = "i" + std::to_string(i);
    r.push_back({item, "h1", 1});
    if (i != 7) r.push_back({item, "h2", 1 + i % 2});
    r.push_back({item, "s", 3});
  }
  AnnotatorRoster roster;
  roster.add("h1", false);
  roster.add("h2", false);
  roster.add("s", true);
  return {AnnotationMatrix(LabelScale::range(1, 3), r), roster};
}

}  // namespace

TEST(SynthRandom, OnlySpamCellsChangeAndSupportIsKept) {
  const auto f = dices_like();
  const auto out = synth_random(f.matrix, f.roster, 1);
  EXPECT_EQ(out.items(), f.matrix.items());
  EXPECT_EQ(out.annotators(), f.matrix.annotators());
  EXPECT_EQ(out.num_cells(), f.matrix.num_cells());
  const auto s = out.annotator_index("s");
  for (std::size_t i = 0; i < out.num_items(); ++i) {
    for (std::size_t j = 0; j < out.num_annotators(); ++j) {
      ASSERT_EQ(out.label(i, j).has_value(), f.matrix.label(i, j).has_value());
      if (j != s) EXPECT_EQ(out.label(i, j), f.matrix.label(i, j));
    }
  }
}

TEST(SynthRandom, FrequenciesNearUniform) {
  const auto f = dices_like();
  const auto out = synth_random(f.matrix, f.roster, 2024);
  const auto s = out.annotator_index("s");
  int counts[3] = {0, 0, 0};
  for (const auto& r : out.responses_of_annotator(s)) ++counts[r.label_index];
  // Binomial(350, 1/3): sigma = sqrt(350 * 2/9).
  const double sigma = std::sqrt(350.0 * 2.0 / 9.0);
  for (int c : counts) EXPECT_LT(std::abs(c - 350.0 / 3.0), 4 * sigma);
  EXPECT_GT(annotator_entropy(out, "s"), 1.5);
}

TEST(SynthRandom, SeededAndOrderIndependent) {
  const auto f = dices_like();
  EXPECT_EQ(synth_random(f.matrix, f.roster, 5), synth_random(f.matrix, f.roster, 5));
  EXPECT_NE(synth_random(f.matrix, f.roster, 5), synth_random(f.matrix, f.roster, 6));

  // Dropping items does not change a surviving spam cell.
  const auto records = f.matrix.records();
  std::vector<AnnotationRecord> subset;
  for (const auto& r : records) {
    if (r.item_id.size() == 2) subset.push_back(r);
  }
  AnnotatorRoster roster;
  roster.add("h1", false);
  roster.add("h2", false);
  roster.add("s", true);
  const auto small = synth_random(AnnotationMatrix(f.matrix.scale(), subset), roster, 5);
  const auto full = synth_random(f.matrix, f.roster, 5);
  for (const auto& item : small.items()) {
    EXPECT_EQ(small.label(small.item_index(item), small.annotator_index("s")),
              full.label(full.item_index(item), full.annotator_index("s")));
  }
}

TEST(SynthFixed, ModeOfInputEverywhere) {
  const auto f = dices_like();
  // Input counts: label 1 = 350 + 175, so the mode is 1 even though the spammer said 3.
  const auto out = synth_fixed(f.matrix, f.roster);
  const auto s = out.annotator_index("s");
  for (const auto& r : out.responses_of_annotator(s)) EXPECT_EQ(out.scale().value(r.label_index), 1);
  EXPECT_EQ(annotator_entropy(out, "s"), 0.0);
  EXPECT_EQ(synth_fixed(out, f.roster), out);
}

TEST(Synthesis, NoSpammersIsNoOpWithWarning) {
  std::vector<AnnotationRecord> r = {{"i", "a", 1}, {"i", "b", 2}};
  const AnnotationMatrix m(LabelScale::range(1, 2), r);
  AnnotatorRoster roster;
  roster.add("a", false);
  roster.add("b", false);
  Diagnostics diag;
  EXPECT_EQ(synth_fixed(m, roster, &diag), m);
  EXPECT_EQ(synth_random(m, roster, 1, &diag), m);
  EXPECT_EQ(diag.warnings().size(), 2u);
}

TEST(Synthesis, RosterMustMatch) {
  std::vector<AnnotationRecord> r = {{"i", "a", 1}};
  const AnnotationMatrix m(LabelScale::range(1, 2), r);
  AnnotatorRoster roster;
  roster.add("b", true);
  EXPECT_THROW(synth_fixed(m, roster), ValidationError);
  EXPECT_THROW(synth_random(m, roster, 0), ValidationError);
}
