// Command-line front end: simulate data, grow/prune/select trees, run the
// cross-validation sweep and the oracle suite.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pentree/config.hpp"
#include "pentree/data.hpp"
#include "pentree/error.hpp"
#include "pentree/experiment.hpp"
#include "pentree/grow.hpp"
#include "pentree/prune.hpp"
#include "pentree/select.hpp"
#include "pentree/tree.hpp"
#include "pentree/verify.hpp"

namespace {

using namespace pentree;

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError(fmt::format("cannot write {}", path));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", path));
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct GrowFlags {
  std::size_t max_leaves = 0;
  std::size_t min_node_size = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--max-leaves", max_leaves, "Leaf budget for growing (0 = unlimited)");
    cmd->add_option("--min-node-size", min_node_size, "Minimum rows in each child of a split");
  }
  GrowLimits limits() const {
    GrowLimits l;
    if (max_leaves > 0) l.max_leaves = max_leaves;
    l.min_node_size = min_node_size;
    l.validate();
    return l;
  }
};

struct PenaltyFlags {
  std::string kind = "margin";
  double alpha = 0.0;
  double kappa = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--penalty", kind, "linear, margin, vc, min, nobel or gey")
        ->check(CLI::IsMember({"linear", "margin", "vc", "min", "nobel", "gey"}));
    cmd->add_option("--alpha", alpha, "Per-leaf weight of the linear penalty");
    cmd->add_option("--kappa", kappa, "Margin exponent (>= 1)");
    cmd->add_option("--c1", c1, "First penalty constant");
    cmd->add_option("--c2", c2, "Second penalty constant");
  }
  PenaltySpec spec() const {
    PenaltySpec s;
    if (kind == "linear")
      s = LinearPenalty{alpha};
    else if (kind == "margin")
      s = MarginAdaptivePenalty{kappa, c1, c2};
    else if (kind == "vc")
      s = VCPenalty{c1, c2};
    else if (kind == "min")
      s = MinCombinedPenalty{{kappa, c1, c2}, {c1, c2}};
    else if (kind == "nobel")
      s = NobelPenalty{c1};
    else
      s = GeyPenalty{c2};
    validate(s);
    return s;
  }
};

CVRule parse_rule(const std::string& rule) { return rule == "1se" ? CVRule::OneSE : CVRule::Min; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Penalized classification trees: growing, pruning, selection and simulation"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Write a simulated dataset as CSV");
  DesignSpec design;
  std::string sim_out;
  sim->add_option("--design", design.design, "Design 1-4")->check(CLI::Range(1, 4));
  sim->add_option("--n", design.n, "Rows");
  sim->add_option("--p", design.p, "Features");
  sim->add_option("--noise", design.noise, "q for design 1, sigma^2 otherwise");
  sim->add_option("--seed", design.seed, "Random seed");
  sim->add_option("-o,--output", sim_out, "Output file (default stdout)");

  // grow
  auto* grow = app.add_subcommand("grow", "Grow a maximal tree and print it");
  std::string data_path, out_path;
  GrowFlags grow_flags;
  grow->add_option("--data", data_path, "Training CSV")->required();
  grow->add_option("-o,--output", out_path, "Output file (default stdout)");
  grow_flags.attach(grow);

  // prune
  auto* prune = app.add_subcommand("prune", "Weakest-link sequence of a tree as CSV");
  std::string tree_path;
  prune->add_option("--data", data_path, "Training CSV")->required();
  prune->add_option("--tree", tree_path, "Tree text file (default: grow one)");
  prune->add_option("-o,--output", out_path, "Output file (default stdout)");
  grow_flags.attach(prune);

  // select
  auto* select = app.add_subcommand("select", "Grow, prune and select by penalty");
  PenaltyFlags penalty;
  select->add_option("--data", data_path, "Training CSV")->required();
  select->add_option("-o,--output", out_path, "Output file (default stdout)");
  penalty.attach(select);
  grow_flags.attach(select);

  // cv
  auto* cv = app.add_subcommand("cv", "Cross-validate the linear penalty weight");
  CVConfig cv_cfg;
  std::string rule = "min";
  cv->add_option("--data", data_path, "Training CSV")->required();
  cv->add_option("--folds", cv_cfg.folds, "Number of folds");
  cv->add_option("--rule", rule, "min or 1se")->check(CLI::IsMember({"min", "1se"}));
  cv->add_option("--seed", cv_cfg.seed, "Fold assignment seed");
  cv->add_option("-o,--output", out_path, "Output file (default stdout)");
  grow_flags.attach(cv);

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run the simulation sweep");
  std::string config_path;
  std::uint64_t seed = 0;
  bool quiet = false;
  exp->add_option("--seed", seed, "Master seed")->required();
  exp->add_option("--config", config_path, "key = value configuration file");
  exp->add_flag("-q,--quiet", quiet, "No progress output");
  const std::vector<std::string> keys = {
      "designs",       "n_grid",        "p_grid",        "noise_design1",
      "noise_design2", "noise_design3", "noise_design4", "replications",
      "replications_design1", "replications_design2", "replications_design3",
      "replications_design4", "folds", "rule", "test_samples", "threads", "output"};
  std::vector<std::pair<std::string, std::string>> overrides(keys.size());
  std::vector<CLI::Option*> override_opts;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    overrides[i].first = keys[i];
    std::string flag = "--" + keys[i];
    for (char& c : flag)
      if (c == '_') c = '-';
    override_opts.push_back(
        exp->add_option(flag, overrides[i].second, fmt::format("Overrides config key {}", keys[i])));
  }

  // verify
  auto* ver = app.add_subcommand("verify", "Run the oracle suite and print a report");
  VerifyOptions verify_opts;
  ver->add_option("--seed", verify_opts.seed, "Seed of the random instances");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      emit(to_csv(generate(design)), sim_out);
    } else if (*grow) {
      emit(to_text(grow_maximal(read_csv(data_path), grow_flags.limits())) + "\n", out_path);
    } else if (*prune) {
      const Dataset data = read_csv(data_path);
      const TreeClassifier tree = tree_path.empty() ? grow_maximal(data, grow_flags.limits())
                                                    : parse_tree(slurp(tree_path));
      emit(sequence_csv(weakest_link(tree, data)), out_path);
    } else if (*select) {
      const Dataset data = read_csv(data_path);
      const PenaltySpec spec = penalty.spec();
      const Selection sel = select_tree(data, spec, grow_flags.limits());
      emit(fmt::format("# penalty {} cost {} leaves {}\n{}\n", penalty_name(spec), sel.cost,
                       sel.tree.size(), to_text(sel.tree)),
           out_path);
    } else if (*cv) {
      cv_cfg.rule = parse_rule(rule);
      const CVResult res = cv_select_alpha(read_csv(data_path), cv_cfg, grow_flags.limits());
      std::string text = fmt::format("# alpha {} leaves {}\n{}\n", res.alpha, res.tree.size(),
                                     to_text(res.tree));
      text += "# candidate,cv_risk\n";
      for (std::size_t c = 0; c < res.candidates.size(); ++c)
        text += fmt::format("# {},{}\n", res.candidates[c], res.cv_risk[c]);
      emit(text, out_path);
    } else if (*exp) {
      ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
      cfg.master_seed = seed;
      for (std::size_t i = 0; i < keys.size(); ++i)
        if (override_opts[i]->count() > 0)
          apply_setting(cfg, overrides[i].first, overrides[i].second);
      ProgressCallback progress;
      if (!quiet)
        progress = [](std::size_t done, std::size_t total) {
          if (done == total || done % 25 == 0) fmt::print(stderr, "\r{}/{} replications", done, total);
          if (done == total) fmt::print(stderr, "\n");
        };
      const ExperimentResult res = run_sweep(cfg, progress);
      write_outputs(cfg, res);
      fmt::print("wrote {} rows to {}\n", res.rows.size(), cfg.output_dir);
    } else if (*ver) {
      const auto results = run_verification(verify_opts);
      fmt::print("{}", format_report(results));
      for (const auto& r : results)
        if (!r.passed) return 1;
    }
  } catch (const ParameterError& e) {
    fmt::print(stderr, "parameter error: {}\n", e.what());
    return 2;
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
