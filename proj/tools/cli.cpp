#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "annofilter/agreement.hpp"
#include "annofilter/io.hpp"
#include "annofilter/simulate.hpp"
#include "annofilter/sweep.hpp"
#include "annofilter/synthesis.hpp"

namespace annofilter::cli {

namespace {

const std::vector<std::string> kMethodNames = {"mace", "crowdtruth", "kappa", "random"};

struct CommonFlags {
  std::string input;
  std::string roster;
  std::string output = "-";
  std::string scale;
  std::uint64_t seed = 0;
  std::string kappa_weighting = "none";
  std::size_t mace_restarts = MaceConfig{}.restarts;
  std::size_t mace_iterations = MaceConfig{}.em_iterations;
};

const auto kScaleValidator = CLI::Validator(
    [](std::string& text) -> std::string {
      try {
        parse_scale(text);
        return {};
      } catch (const Error& e) {
        return e.what();
      }
    },
    "LO..HI", "scale");

void add_scale(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--scale", f.scale, "Label scale as LO..HI; inferred from the data if omitted")
      ->check(kScaleValidator);
}

void add_output(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("-o,--output", f.output, "Output CSV path, '-' for stdout")->capture_default_str();
}

void add_scoring(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--seed", f.seed, "Master seed for seeded methods")->capture_default_str();
  cmd->add_option("--kappa-weighting", f.kappa_weighting, "Kappa agreement weights")
      ->check(CLI::IsMember({"none", "linear", "quadratic"}))
      ->capture_default_str();
  cmd->add_option("--mace-restarts", f.mace_restarts, "MACE random restarts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--mace-iterations", f.mace_iterations, "MACE EM iterations per restart")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

ScoringOptions scoring_options(const CommonFlags& f) {
  ScoringOptions options;
  options.seed = f.seed;
  options.kappa.weighting = *parse_kappa_weighting(f.kappa_weighting);
  options.mace.restarts = f.mace_restarts;
  options.mace.em_iterations = f.mace_iterations;
  return options;
}

void report(std::ostream& err, const Diagnostics& diag) {
  for (const auto& w : diag.warnings()) err << "warning: " << w << '\n';
}

AnnotationMatrix load_matrix(const CommonFlags& f, Diagnostics& diag) {
  std::ifstream in(f.input);
  if (!in) throw Error("cannot open '" + f.input + "'");
  std::optional<LabelScale> scale;
  if (!f.scale.empty()) scale = parse_scale(f.scale);
  return parse_annotations(in, scale, &diag);
}

AnnotatorRoster load_roster(const CommonFlags& f) {
  std::ifstream in(f.roster);
  if (!in) throw Error("cannot open '" + f.roster + "'");
  return parse_roster(in);
}

void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& write) {
  if (path == "-") {
    write(out);
    out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open '" + path + "' for writing");
  write(file);
  file.close();
  if (!file) throw Error("failed writing '" + path + "'");
}

std::vector<Method> unique_methods(const std::vector<std::string>& names, Diagnostics& diag) {
  std::vector<Method> out;
  for (const auto& name : names) {
    const Method m = *parse_method(name);
    if (std::find(out.begin(), out.end(), m) != out.end()) {
      diag.warn("method '" + name + "' listed more than once; ignoring repeats");
      continue;
    }
    out.push_back(m);
  }
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Annotator reliability scoring and spam-filtering sweeps", "annofilter"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  CommonFlags f;
  std::string method_name;
  std::vector<std::string> method_names;
  std::size_t k_max = 0;
  std::string synth_mode;

  auto* score = app.add_subcommand("score", "Score annotators with one method (scores.csv)");
  score->add_option("-i,--input", f.input, "annotations.csv")->required();
  score->add_option("-m,--method", method_name, "Scoring method")
      ->required()
      ->check(CLI::IsMember(kMethodNames));
  add_scale(score, f);
  add_scoring(score, f);
  add_output(score, f);

  auto* sweep_cmd = app.add_subcommand("sweep", "Remove k = 0..k-max lowest-scoring annotators (sweep.csv)");
  sweep_cmd->add_option("-i,--input", f.input, "annotations.csv")->required();
  sweep_cmd->add_option("-r,--roster", f.roster, "roster.csv")->required();
  sweep_cmd->add_option("--methods", method_names, "Comma-separated scoring methods")
      ->required()
      ->delimiter(',')
      ->check(CLI::IsMember(kMethodNames));
  sweep_cmd->add_option("--k-max", k_max, "Largest number of annotators to remove")->required();
  add_scale(sweep_cmd, f);
  add_scoring(sweep_cmd, f);
  add_output(sweep_cmd, f);

  auto* synth = app.add_subcommand("synth", "Replace gold spammers' labels with random or fixed spam");
  synth->add_option("-i,--input", f.input, "annotations.csv")->required();
  synth->add_option("-r,--roster", f.roster, "roster.csv")->required();
  synth->add_option("--mode", synth_mode, "Spam behavior")
      ->required()
      ->check(CLI::IsMember({"random", "fixed"}));
  synth->add_option("--seed", f.seed, "Seed for random spam")->capture_default_str();
  add_scale(synth, f);
  add_output(synth, f);

  auto* scatter = app.add_subcommand("scatter", "Annotator entropy vs. score per method (scatter.csv)");
  scatter->add_option("-i,--input", f.input, "annotations.csv")->required();
  scatter->add_option("-r,--roster", f.roster, "roster.csv")->required();
  scatter->add_option("--methods", method_names, "Comma-separated scoring methods")
      ->required()
      ->delimiter(',')
      ->check(CLI::IsMember(kMethodNames));
  add_scale(scatter, f);
  add_scoring(scatter, f);
  add_output(scatter, f);

  SimulationConfig sim;
  std::string sim_labels = "perspectives";
  std::string roster_output;
  auto* simulate = app.add_subcommand("simulate", "Write a planted dataset and its gold roster");
  simulate->add_option("--items", sim.items, "Number of items")->capture_default_str();
  simulate->add_option("--annotators", sim.annotators, "Number of annotators")->capture_default_str();
  simulate->add_option("--spammers", sim.spammers, "Number of gold spammers")->capture_default_str();
  simulate->add_option("--scale", f.scale, "Label scale as LO..HI")
      ->check(kScaleValidator)
      ->default_str("1..3");
  simulate->add_option("--labels", sim_labels, "Label model")
      ->check(CLI::IsMember({"perspectives", "single-mode"}))
      ->capture_default_str();
  simulate->add_option("--fidelity", sim.fidelity, "P(annotator reports the preferred label)")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  simulate->add_option("--minority", sim.minority_fraction, "Share of non-spammers in the minority group")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  simulate->add_option("--contested", sim.contested_fraction, "Share of items the minority labels differently")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  simulate->add_option("--center", sim.center, "single-mode: center label")->capture_default_str();
  simulate->add_option("--spread", sim.spread, "single-mode: standard deviation in label units")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Seed")->capture_default_str();
  simulate->add_option("-o,--output", f.output, "annotations.csv path, '-' for stdout")->capture_default_str();
  simulate->add_option("--roster-output", roster_output, "roster.csv path")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Diagnostics diag;
  try {
    if (*score) {
      const auto matrix = load_matrix(f, diag);
      const auto table = score_annotators(matrix, *parse_method(method_name), scoring_options(f));
      emit(f.output, out, [&](std::ostream& s) { write_scores(s, std::span(&table, 1)); });
    } else if (*sweep_cmd) {
      const auto matrix = load_matrix(f, diag);
      const auto roster = load_roster(f);
      validate_roster(matrix, roster);
      if (k_max >= matrix.num_annotators()) {
        throw RangeError("--k-max " + std::to_string(k_max) + " must be below the annotator count " +
                         std::to_string(matrix.num_annotators()));
      }
      const auto methods = unique_methods(method_names, diag);
      const auto options = scoring_options(f);
      const auto result = sweep(matrix, roster, methods, k_max, options, &diag);
      if (std::find(methods.begin(), methods.end(), Method::kappa) != methods.end()) {
        err << "note: kappa weighting = " << result.kappa_weighting << '\n';
      }
      for (const auto& [method, message] : result.errors) {
        err << "error: method '" << to_string(method) << "' omitted: " << message << '\n';
      }
      emit(f.output, out, [&](std::ostream& s) { write_sweep(s, result); });
    } else if (*synth) {
      const auto matrix = load_matrix(f, diag);
      const auto roster = load_roster(f);
      const auto result = synth_mode == "random" ? synth_random(matrix, roster, f.seed, &diag)
                                                 : synth_fixed(matrix, roster, &diag);
      emit(f.output, out, [&](std::ostream& s) { write_annotations(s, result); });
    } else if (*scatter) {
      const auto matrix = load_matrix(f, diag);
      const auto roster = load_roster(f);
      const auto options = scoring_options(f);
      std::vector<ScoreTable> tables;
      for (Method m : unique_methods(method_names, diag)) {
        tables.push_back(score_annotators(matrix, m, options));
      }
      const auto rows = scatter_rows(matrix, roster, tables);
      emit(f.output, out, [&](std::ostream& s) { write_scatter(s, rows); });
    } else if (*simulate) {
      const auto scale = parse_scale(f.scale.empty() ? "1..3" : f.scale);
      sim.scale_lo = scale.min();
      sim.scale_hi = scale.max();
      sim.labels = sim_labels == "single-mode" ? SimulatedLabels::single_mode
                                               : SimulatedLabels::perspectives;
      const auto data = simulate_dataset(sim);
      emit(f.output, out, [&](std::ostream& s) { write_annotations(s, data.matrix); });
      emit(roster_output, out, [&](std::ostream& s) { write_roster(s, data.roster); });
    }
  } catch (const Error& e) {
    report(err, diag);
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  report(err, diag);
  return kExitOk;
}

}  // namespace annofilter::cli
