#include "annofilter/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <vector>

namespace annofilter {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::optional<int> parse_int(std::string_view text) {
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) return std::nullopt;
  return value;
}

// Reads lines, dropping a trailing CR and skipping blank lines. Returns
// false at end of stream.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  }

  std::size_t number() const noexcept { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

void expect_header(LineReader& reader, std::string_view expected) {
  std::string line;
  if (!reader.next(line)) {
    throw ParseError(1, "missing header, expected '" + std::string(expected) + "'");
  }
  if (line != expected) {
    throw ParseError(reader.number(), "bad header '" + line + "', expected '" +
                                          std::string(expected) + "'");
  }
}

void check_stream(std::ostream& out) {
  if (!out) throw Error("write failed");
}

template <class Row, class Key>
std::vector<const Row*> ordered(std::span<const Row> rows, Key key) {
  std::vector<const Row*> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(&r);
  std::stable_sort(out.begin(), out.end(),
                   [&](const Row* a, const Row* b) { return key(*a) < key(*b); });
  return out;
}

}  // namespace

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  std::string s(buf);
  if (s == "-0.000000") s.erase(0, 1);
  return s;
}

LabelScale parse_scale(std::string_view text) {
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    throw RangeError("scale '" + std::string(text) + "' is not of the form LO..HI");
  }
  const auto lo = parse_int(text.substr(0, dots));
  const auto hi = parse_int(text.substr(dots + 2));
  if (!lo || !hi) {
    throw RangeError("scale '" + std::string(text) + "' is not of the form LO..HI");
  }
  return LabelScale::range(*lo, *hi);
}

AnnotationMatrix parse_annotations(std::istream& in, const std::optional<LabelScale>& scale,
                                   Diagnostics* diag) {
  LineReader reader(in);
  expect_header(reader, kAnnotationsHeader);

  std::vector<AnnotationRecord> records;
  std::string line;
  while (reader.next(line)) {
    const auto fields = split_fields(line);
    if (fields.size() != 3) {
      throw ParseError(reader.number(), "expected 3 fields, found " + std::to_string(fields.size()));
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw ParseError(reader.number(), "empty item_id or annotator_id");
    }
    const auto label = parse_int(fields[2]);
    if (!label) {
      throw ParseError(reader.number(), "label '" + std::string(fields[2]) + "' is not an integer");
    }
    if (scale && !scale->contains(*label)) {
      throw RangeError("line " + std::to_string(reader.number()) + ": label " +
                       std::to_string(*label) + " outside declared scale " + scale->to_string());
    }
    records.push_back({std::string(fields[0]), std::string(fields[1]), *label});
  }
  if (records.empty()) {
    throw ParseError(reader.number(), "no annotation rows");
  }

  if (scale) return AnnotationMatrix(*scale, records);

  const auto [lo, hi] = std::minmax_element(records.begin(), records.end(),
                                            [](const auto& a, const auto& b) { return a.label < b.label; });
  if (lo->label == hi->label) {
    throw RangeError("cannot infer a label scale: every label is " + std::to_string(lo->label) +
                     "; declare the scale explicitly");
  }
  auto inferred = LabelScale::range(lo->label, hi->label);
  warn(diag, "no label scale declared; inferred " + inferred.to_string() + " from the data");
  return AnnotationMatrix(std::move(inferred), records);
}

AnnotatorRoster parse_roster(std::istream& in) {
  LineReader reader(in);
  expect_header(reader, kRosterHeader);

  AnnotatorRoster roster;
  std::string line;
  while (reader.next(line)) {
    const auto fields = split_fields(line);
    if (fields.size() != 2) {
      throw ParseError(reader.number(), "expected 2 fields, found " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw ParseError(reader.number(), "empty annotator_id");
    if (fields[1] != "0" && fields[1] != "1") {
      throw ParseError(reader.number(), "is_spam must be 0 or 1, got '" + std::string(fields[1]) + "'");
    }
    try {
      roster.add(std::string(fields[0]), fields[1] == "1");
    } catch (const DuplicateError& e) {
      throw DuplicateError("line " + std::to_string(reader.number()) + ": " + e.what());
    }
  }
  if (roster.empty()) throw ParseError(reader.number(), "roster has no rows");
  return roster;
}

void write_annotations(std::ostream& out, const AnnotationMatrix& matrix) {
  out << kAnnotationsHeader << '\n';
  for (const auto& r : matrix.records()) {
    out << r.item_id << ',' << r.annotator_id << ',' << r.label << '\n';
  }
  check_stream(out);
}

void write_roster(std::ostream& out, const AnnotatorRoster& roster) {
  out << kRosterHeader << '\n';
  for (const auto& [id, spam] : roster.entries()) {
    out << id << ',' << (spam ? 1 : 0) << '\n';
  }
  check_stream(out);
}

void write_scores(std::ostream& out, std::span<const ScoreTable> tables) {
  out << kScoresHeader << '\n';
  for (const ScoreTable* table :
       ordered(tables, [](const ScoreTable& t) { return to_string(t.method); })) {
    // std::map iterates in annotator-id order.
    for (const auto& [id, score] : table->scores) {
      out << to_string(table->method) << ',' << id << ',';
      if (score) out << format_real(*score);
      out << '\n';
    }
  }
  check_stream(out);
}

void write_sweep(std::ostream& out, const SweepReport& report) {
  out << kSweepHeader << '\n';
  const auto rows = ordered(std::span<const SweepRow>(report.rows), [](const SweepRow& r) {
    return std::pair(to_string(r.method), r.k);
  });
  for (const SweepRow* r : rows) {
    const auto& m = r->metrics;
    out << to_string(r->method) << ',' << r->k << ',' << format_real(r->frac_removed) << ','
        << format_real(m.accuracy) << ',' << format_real(m.stddev) << ','
        << format_real(m.mean_entropy) << ',' << format_real(m.mae) << ',' << format_real(m.kl)
        << '\n';
  }
  check_stream(out);
}

void write_scatter(std::ostream& out, std::span<const ScatterRow> rows) {
  out << kScatterHeader << '\n';
  const auto sorted = ordered(rows, [](const ScatterRow& r) {
    return std::pair(to_string(r.method), std::string_view(r.annotator_id));
  });
  for (const ScatterRow* r : sorted) {
    out << to_string(r->method) << ',' << r->annotator_id << ',' << (r->is_spam ? 1 : 0) << ','
        << format_real(r->annotator_entropy) << ',';
    if (r->score) out << format_real(*r->score);
    out << '\n';
  }
  check_stream(out);
}

}  // namespace annofilter
