// Acceptance suite: one PASS/FAIL/SKIP line per criterion. Exits non-zero if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "annofilter/agreement.hpp"
#include "annofilter/crowdtruth.hpp"
#include "annofilter/io.hpp"
#include "annofilter/mace.hpp"
#include "annofilter/metrics.hpp"
#include "annofilter/random.hpp"
#include "annofilter/simulate.hpp"
#include "annofilter/sweep.hpp"
#include "annofilter/synthesis.hpp"
#include "cli.hpp"
#include "oracles.hpp"

using namespace annofilter;
namespace fs = std::filesystem;

namespace {

enum class Status { pass, fail, skip };

struct Outcome {
  Status status;
  std::string detail;
};

Outcome verdict(bool ok, std::string detail) { return {ok ? Status::pass : Status::fail, std::move(detail)}; }

std::string fmt(double x, int precision = 4) {
  std::ostringstream s;
  s << std::setprecision(precision) << x;
  return s.str();
}

// Largest |a - b| seen, so the detail line can report the margin.
struct MaxError {
  double worst = 0.0;
  void add(double a, double b) { worst = std::max(worst, std::abs(a - b)); }
};

Outcome metric_oracles() {
  std::mt19937_64 rng(20240601);
  MaxError err;
  int matrices = 0, kappa_pairs = 0;
  for (; matrices < 200; ++matrices) {
    const auto rm = oracle::random_matrix(rng, {.max_items = 10, .max_annotators = 8, .max_k = 7});
    const AnnotationMatrix m(LabelScale(rm.scale), rm.records);

    err.add(mean_instance_entropy(m), oracle::mean_instance_entropy(rm.records, rm.scale));
    err.add(dataset_stddev(m), oracle::stddev(rm.records));
    for (const auto& item : m.items()) {
      const auto d = item_distribution(m, item);
      const auto expect = oracle::item_distribution(rm.records, rm.scale, item);
      for (std::size_t k = 0; k < expect.size(); ++k) err.add(d[k], expect[k]);
    }

    // Reference = every annotator, filtered = all but the first one when possible.
    AnnotatorSet reference(m.annotators().begin(), m.annotators().end());
    AnnotatorSet removed;
    if (m.num_annotators() > 1) removed.insert(m.annotator_id(0));
    const auto filtered = m.without_annotators(removed);
    oracle::Records kept;
    for (const auto& r : rm.records) {
      if (!removed.contains(r.annotator_id)) kept.push_back(r);
    }
    const std::set<std::string> ref(reference.begin(), reference.end());
    if (!kept.empty()) {
      err.add(mae_vs_reference(filtered, reference, m), oracle::mae(kept, rm.records, ref));
      err.add(mean_kl_vs_reference(filtered, reference, m),
              oracle::kl(kept, rm.records, ref, rm.scale, kKlSmoothing));
    }

    const auto table = oracle::table_of(rm.records);
    for (std::size_t x = 0; x < m.num_annotators(); ++x) {
      for (std::size_t y = x + 1; y < m.num_annotators(); ++y) {
        std::vector<int> a, b;
        for (const auto& [item, row] : table) {
          auto px = row.find(m.annotator_id(x));
          auto py = row.find(m.annotator_id(y));
          if (px != row.end() && py != row.end()) {
            a.push_back(px->second);
            b.push_back(py->second);
          }
        }
        if (a.empty()) continue;
        err.add(cohens_kappa(a, b, m.scale()), oracle::kappa_unweighted(a, b, rm.scale));
        ++kappa_pairs;
      }
    }
  }
  return verdict(err.worst <= 1e-9, std::to_string(matrices) + " matrices, " + std::to_string(kappa_pairs) +
                                        " kappa pairs, max error " + fmt(err.worst, 3));
}

Outcome kappa_goldens() {
  const auto two = LabelScale::range(1, 2);
  const std::vector<int> a1 = {1, 1, 2, 2}, a2 = {1, 2, 1, 2}, b2 = {2, 1, 2, 1}, a3 = {1, 1, 1, 2},
                         b3 = {1, 1, 2, 2};
  const double k1 = cohens_kappa(a1, a1, two);
  const double k2 = cohens_kappa(a2, b2, two);
  const double k3 = cohens_kappa(a3, b3, two);
  return verdict(k1 == 1.0 && k2 == -1.0 && k3 == 0.5,
                 "kappa = " + fmt(k1) + ", " + fmt(k2) + ", " + fmt(k3) + " (want 1, -1, 0.5)");
}

AnnotationMatrix planted_random_annotator(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> label(1, 3);
  std::vector<AnnotationRecord> r;
  for (int i = 0; i < 50; ++i) {
    const int truth = label(rng);
    const auto item = "i" + std::to_string(i);
    for (int j = 0; j < 9; ++j) r.push_back({item, "copier" + std::to_string(j), truth});
    r.push_back({item, "random", label(rng)});
  }
  return AnnotationMatrix(LabelScale::range(1, 3), r);
}

Outcome mace_correctness() {
  std::mt19937_64 rng(777);

  // (a) marginal log-likelihood of plain EM, and the smoothed objective under
  // the default smoothing, never decrease.
  double worst_ll = 0.0, worst_obj = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto rm = oracle::random_matrix(rng, {.max_items = 10, .max_annotators = 8, .max_k = 5});
    const AnnotationMatrix m(LabelScale(rm.scale), rm.records);
    const auto init = mace_initial_parameters(m.num_annotators(), rm.scale.size(), static_cast<std::uint64_t>(t));
    const auto plain = mace_run_em(m, init, 50, 0.0);
    const auto smoothed = mace_run_em(m, init, 50, MaceConfig{}.smoothing_for(rm.scale.size()));
    for (std::size_t i = 1; i < plain.log_likelihood_trace.size(); ++i) {
      worst_ll = std::min(worst_ll, plain.log_likelihood_trace[i] - plain.log_likelihood_trace[i - 1]);
      worst_obj = std::min(worst_obj, smoothed.objective_trace[i] - smoothed.objective_trace[i - 1]);
    }
  }
  const bool a = worst_ll >= -1e-8 && worst_obj >= -1e-8;

  // (b) E-step likelihood against exhaustive enumeration.
  double worst_enum = 0.0;
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int t = 0; t < 100; ++t) {
    const auto rm = oracle::random_matrix(rng, {.max_items = 3, .max_annotators = 3, .max_k = 3, .fill = 0.8});
    const AnnotationMatrix m(LabelScale(rm.scale), rm.records);
    MaceParameters p;
    for (std::size_t j = 0; j < m.num_annotators(); ++j) {
      p.competence.push_back(u(rng));
      std::vector<double> z(rm.scale.size());
      double total = 0;
      for (auto& x : z) total += (x = u(rng));
      for (auto& x : z) x /= total;
      p.spam_strategy.push_back(z);
    }
    worst_enum = std::max(worst_enum, std::abs(mace_e_step(m, p).log_likelihood -
                                               oracle::mace_enumerate(rm.records, rm.scale, p).log_likelihood));
  }
  const bool b = worst_enum <= 1e-10;

  // (c) planted uniform-random annotator gets the minimum competence.
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    MaceConfig config;
    config.seed = seed;
    const auto scores = mace_scores(mace_fit(planted_random_annotator(seed), config));
    const double spam = *scores.scores.at("random");
    bool lowest = true;
    for (const auto& [id, s] : scores.scores) lowest = lowest && (id == "random" || *s > spam);
    hits += lowest ? 1 : 0;
  }
  const bool c = hits == 5;

  return verdict(a && b && c, std::string("(a) ") + (a ? "ok" : "FAIL") + " worst step ll " + fmt(worst_ll, 3) +
                                  " objective " + fmt(worst_obj, 3) + "; (b) " + (b ? "ok" : "FAIL") +
                                  " max error " + fmt(worst_enum, 3) + "; (c) " + (c ? "ok" : "FAIL") + " " +
                                  std::to_string(hits) + "/5 seeds");
}

Outcome crowdtruth_correctness() {
  // Fixed-point residual at convergence on simulated data.
  SimulationConfig sc;
  sc.items = 30;
  sc.annotators = 20;
  sc.spammers = 3;
  const auto d = simulate_dataset(sc);
  const CrowdTruthConfig config;
  const auto fit = crowdtruth_fit(d.matrix, config);
  const double residual = crowdtruth_max_change(fit, crowdtruth_step(d.matrix, fit));
  const bool residual_ok = fit.converged && residual <= config.tolerance;

  // Identical workers.
  std::vector<AnnotationRecord> same;
  for (int u = 0; u < 5; ++u) {
    for (int w = 0; w < 4; ++w) same.push_back({"u" + std::to_string(u), "w" + std::to_string(w), 1 + u % 3});
  }
  const auto ident = crowdtruth_fit(AnnotationMatrix(LabelScale::range(1, 3), same), config);
  bool ident_ok = ident.converged && ident.iterations_run == 1;
  for (double x : ident.wqs) ident_ok = ident_ok && x == 1.0;
  for (double x : ident.uqs) ident_ok = ident_ok && x == 1.0;

  // Three workers, C disagrees with A and B on both binary units.
  std::vector<AnnotationRecord> r = {{"u1", "A", 1}, {"u1", "B", 1}, {"u1", "C", 2},
                                     {"u2", "A", 2}, {"u2", "B", 2}, {"u2", "C", 1}};
  const AnnotationMatrix m(LabelScale::range(1, 2), r);
  const auto first = crowdtruth_step(m, crowdtruth_initial_state(m));
  MaxError err;
  for (double q : first.uqs) err.add(q, 1.0 / 3.0);
  err.add(first.wwa[0], 0.5);
  err.add(first.wwa[1], 0.5);
  err.add(first.wwa[2], 0.0);
  err.add(first.wua[0], 1.0 / std::sqrt(2.0));
  err.add(first.wua[1], 1.0 / std::sqrt(2.0));
  err.add(first.wua[2], 0.0);
  const auto scores = crowdtruth_scores(crowdtruth_fit(m, config));
  const bool c_lowest = *scores.scores.at("C") < *scores.scores.at("A") && *scores.scores.at("C") < *scores.scores.at("B");
  const bool fixture_ok = err.worst <= 1e-9 && c_lowest;

  return verdict(residual_ok && ident_ok && fixture_ok,
                 "residual " + fmt(residual, 3) + " after " + std::to_string(fit.iterations_run) +
                     " iterations; identical workers " + (ident_ok ? "ok" : "FAIL") +
                     "; 3-worker fixture max error " + fmt(err.worst, 3) + (c_lowest ? ", C lowest" : ", C NOT lowest"));
}

struct SweepStats {
  std::map<Method, double> accuracy_k15;
  std::map<Method, double> entropy_k0;
  std::map<Method, double> entropy_k15;
};

// Averages of sweep rows at k = 0 and k = 15 over `datasets`.
SweepStats sweep_stats(const std::vector<std::pair<AnnotationMatrix, AnnotatorRoster>>& datasets,
                       const std::vector<Method>& methods) {
  SweepStats s;
  std::uint64_t seed = 0;
  for (const auto& [matrix, roster] : datasets) {
    ScoringOptions options;
    options.seed = seed++;
    const auto report = sweep(matrix, roster, methods, 15, options);
    for (const auto& row : report.rows) {
      const double w = 1.0 / static_cast<double>(datasets.size());
      if (row.k == 0) s.entropy_k0[row.method] += w * row.metrics.mean_entropy;
      if (row.k == 15) {
        s.accuracy_k15[row.method] += w * row.metrics.accuracy;
        s.entropy_k15[row.method] += w * row.metrics.mean_entropy;
      }
    }
  }
  return s;
}

Outcome random_spam() {
  std::vector<std::pair<AnnotationMatrix, AnnotatorRoster>> data;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SimulationConfig c;
    c.items = 50;
    c.annotators = 100;
    c.spammers = 15;
    c.seed = seed;
    auto d = simulate_dataset(c);
    data.emplace_back(synth_random(d.matrix, d.roster, seed), d.roster);
  }
  const std::vector<Method> methods = {Method::mace, Method::crowdtruth, Method::kappa};
  const auto s = sweep_stats(data, methods);
  bool ok = true;
  std::string detail;
  for (Method m : methods) {
    const bool acc = s.accuracy_k15.at(m) > 0.85;
    const bool ent = s.entropy_k15.at(m) < s.entropy_k0.at(m);
    ok = ok && acc && ent;
    detail += std::string(to_string(m)) + " acc@15 " + fmt(s.accuracy_k15.at(m)) + " entropy " +
              fmt(s.entropy_k0.at(m)) + "->" + fmt(s.entropy_k15.at(m)) + "; ";
  }
  return verdict(ok, detail + "baseline 0.85, mean of 5 seeds");
}

Outcome fixed_spam() {
  // Varied per-item modes: low-fidelity annotators plus a minority that
  // prefers a different label on every item.
  bool varied_ok = true;
  std::string detail;
  int mace_perfect = 0, kappa_lower = 0, crowdtruth_lower = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    SimulationConfig c;
    c.items = 100;
    c.annotators = 100;
    c.spammers = 15;
    c.fidelity = 0.5;
    c.minority_fraction = 0.15;
    c.contested_fraction = 1.0;
    c.seed = seed;
    const auto d = simulate_dataset(c);
    std::set<int> modes(d.preferred_labels.begin(), d.preferred_labels.end());
    const std::vector<std::pair<AnnotationMatrix, AnnotatorRoster>> one = {
        {synth_fixed(d.matrix, d.roster), d.roster}};
    const auto s = sweep_stats(one, {Method::mace, Method::crowdtruth, Method::kappa});
    const bool mace_ok = s.accuracy_k15.at(Method::mace) == 1.0;
    const bool kappa_ok = s.accuracy_k15.at(Method::kappa) < s.accuracy_k15.at(Method::mace);
    const bool ct_ok = s.accuracy_k15.at(Method::crowdtruth) < s.accuracy_k15.at(Method::mace);
    mace_perfect += mace_ok;
    kappa_lower += kappa_ok;
    crowdtruth_lower += ct_ok;
    varied_ok = varied_ok && mace_ok && kappa_ok && ct_ok && modes.size() > 1;
  }
  detail += "varied modes: mace=1.0 in " + std::to_string(mace_perfect) + "/5, kappa lower in " +
            std::to_string(kappa_lower) + "/5, crowdtruth lower in " + std::to_string(crowdtruth_lower) + "/5";

  // One global mode, normal-shaped labels.
  SimulationConfig c;
  c.items = 50;
  c.annotators = 100;
  c.spammers = 15;
  c.labels = SimulatedLabels::single_mode;
  c.scale_lo = 1;
  c.scale_hi = 5;
  c.center = 3;
  c.spread = 1;
  c.seed = 1;
  const auto d = simulate_dataset(c);
  const auto fixed = synth_fixed(d.matrix, d.roster);
  const std::vector<std::pair<AnnotationMatrix, AnnotatorRoster>> one = {{fixed, d.roster}};
  const auto s = sweep_stats(one, {Method::mace});
  MaceConfig mc;
  mc.seed = derive_seed(0, "mace");
  const auto diag = mace_distance_diagnostic(mace_fit(fixed, mc), fixed, d.roster);
  const double baseline = 85.0 / 100.0;
  const bool no_gain = s.accuracy_k15.at(Method::mace) <= baseline;
  const bool zero_distance = diag.spam_mean && std::abs(*diag.spam_mean) < 1e-9;
  detail += "; single mode: mace acc@15 " + fmt(s.accuracy_k15.at(Method::mace)) + " (baseline 0.85), spam distance " +
            (diag.spam_mean ? fmt(*diag.spam_mean, 3) : "n/a") + ", non-spam " +
            (diag.non_spam_mean ? fmt(*diag.non_spam_mean, 3) : "n/a");
  return verdict(varied_ok && no_gain && zero_distance, detail);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Outcome cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / "annofilter_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto p = [&](const std::string& name) { return (dir / name).string(); };

  auto invoke = [](std::vector<std::string> args) {
    args.insert(args.begin(), "annofilter");
    std::ostringstream out, err;
    return cli::run(args, out, err);
  };
  if (invoke({"simulate", "--items", "30", "--annotators", "25", "--spammers", "4", "--seed", "5", "-o",
              p("data.csv"), "--roster-output", p("roster.csv")}) != 0) {
    return {Status::fail, "could not simulate input data"};
  }

  const std::vector<std::pair<std::string, std::vector<std::string>>> commands = {
      {"simulate", {"simulate", "--items", "30", "--annotators", "25", "--spammers", "4", "--seed", "5",
                    "--roster-output", p("sim_roster.@")}},
      {"synth-random", {"synth", "-i", p("data.csv"), "-r", p("roster.csv"), "--mode", "random", "--seed", "3"}},
      {"synth-fixed", {"synth", "-i", p("data.csv"), "-r", p("roster.csv"), "--mode", "fixed"}},
      {"score-mace", {"score", "-i", p("data.csv"), "-m", "mace", "--seed", "3", "--mace-restarts", "10"}},
      {"score-crowdtruth", {"score", "-i", p("data.csv"), "-m", "crowdtruth"}},
      {"score-kappa", {"score", "-i", p("data.csv"), "-m", "kappa", "--kappa-weighting", "linear"}},
      {"score-random", {"score", "-i", p("data.csv"), "-m", "random", "--seed", "3"}},
      {"sweep", {"sweep", "-i", p("data.csv"), "-r", p("roster.csv"), "--methods", "mace,crowdtruth,kappa,random",
                 "--k-max", "10", "--seed", "3", "--mace-restarts", "10"}},
      {"scatter", {"scatter", "-i", p("data.csv"), "-r", p("roster.csv"), "--methods", "mace,crowdtruth,kappa,random",
                   "--seed", "3", "--mace-restarts", "10"}},
  };
  int identical = 0;
  std::string failures;
  for (const auto& [name, base] : commands) {
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      auto args = base;
      const std::string tag = std::to_string(run);
      for (auto& a : args) {
        if (auto at = a.find('@'); at != std::string::npos) a.replace(at, 1, tag);
      }
      args.push_back("-o");
      args.push_back(p(name + "." + tag));
      if (invoke(args) != 0) failures += " " + name + "(exit)";
      outputs[run] = slurp(p(name + "." + tag));
      if (name == "simulate") outputs[run] += slurp(p("sim_roster." + tag));
    }
    if (outputs[0] == outputs[1] && !outputs[0].empty()) {
      ++identical;
    } else {
      failures += " " + name;
    }
  }
  fs::remove_all(dir);
  return verdict(failures.empty(), std::to_string(identical) + "/" + std::to_string(commands.size()) +
                                       " commands byte-identical" + (failures.empty() ? "" : "; differing:" + failures));
}

Outcome dices_trend() {
  const char* dir = std::getenv("ANNOFILTER_DICES_DIR");
  if (dir == nullptr || !fs::exists(fs::path(dir) / "annotations.csv") || !fs::exists(fs::path(dir) / "roster.csv")) {
    return {Status::skip, "set ANNOFILTER_DICES_DIR to a directory with annotations.csv and roster.csv"};
  }
  std::ifstream a(fs::path(dir) / "annotations.csv"), r(fs::path(dir) / "roster.csv");
  const auto matrix = parse_annotations(a, LabelScale::range(1, 3));
  const auto roster = parse_roster(r);
  const std::size_t n = matrix.num_annotators();
  const auto k_max = static_cast<std::size_t>(std::ceil(0.3 * static_cast<double>(n)));
  const std::vector<Method> methods = {Method::mace, Method::kappa};
  const auto report = sweep(matrix, roster, methods, k_max, ScoringOptions{});

  double baseline = -1;
  std::map<Method, bool> early_gain, late_drop;
  for (const auto& row : report.rows) {
    if (row.k == 0) baseline = row.metrics.accuracy;
  }
  for (const auto& row : report.rows) {
    if (row.k >= 1 && static_cast<double>(row.k) <= 0.05 * static_cast<double>(n) && row.metrics.accuracy > baseline) {
      early_gain[row.method] = true;
    }
    if (row.k == k_max && row.metrics.accuracy < baseline) late_drop[row.method] = true;
  }
  const bool counts = matrix.num_items() == 350 && n == 123 && matrix.num_cells() == 43050;
  const bool base_ok = std::abs(baseline - 104.0 / 123.0) < 1e-12;
  bool ok = counts && base_ok;
  std::string detail = "baseline " + fmt(baseline, 6) + (base_ok ? "" : " (want 104/123)") +
                       (counts ? "" : "; shape is not 350 x 123 with 43050 cells");
  for (Method m : methods) {
    ok = ok && early_gain[m] && late_drop[m];
    detail += std::string("; ") + std::string(to_string(m)) + " early gain " + (early_gain[m] ? "yes" : "no") +
              ", below baseline at 30% " + (late_drop[m] ? "yes" : "no");
  }
  return verdict(ok, detail);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"metric oracle equivalence", metric_oracles},
      {"kappa golden values", kappa_goldens},
      {"MACE correctness", mace_correctness},
      {"CrowdTruth correctness", crowdtruth_correctness},
      {"random-spam reproduction", random_spam},
      {"fixed-spam reproduction", fixed_spam},
      {"CLI determinism", cli_determinism},
      {"DICES-350 trend (optional)", dices_trend},
  };
  const std::map<std::string, double> budgets = {
      {"metric oracle equivalence", 10}, {"MACE correctness", 30}, {"random-spam reproduction", 120},
      {"fixed-spam reproduction", 120}};

  int failed = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {Status::fail, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (auto b = budgets.find(name); b != budgets.end() && seconds > b->second && outcome.status == Status::pass) {
      outcome = {Status::fail, outcome.detail + "; over the " + fmt(b->second) + " s budget"};
    }
    const char* tag = outcome.status == Status::pass ? "PASS" : outcome.status == Status::fail ? "FAIL" : "SKIP";
    if (outcome.status == Status::fail) ++failed;
    std::cout << tag << "  " << name << "  [" << std::fixed << std::setprecision(2) << seconds << std::defaultfloat
              << " s]  " << outcome.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
