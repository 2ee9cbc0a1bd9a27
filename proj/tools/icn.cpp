#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "icn/commands.hpp"

namespace {

// Flag name -> config key. Flags are applied after --config so they win.
const std::vector<std::pair<std::string, std::string>> kFlags = {
    {"--dataset", "dataset"},
    {"--format", "format"},
    {"--split", "split"},
    {"--layers", "layers"},
    {"--input-width", "input_width"},
    {"--k", "k"},
    {"--gamma", "gamma"},
    {"--random-extra-edges", "random_extra_edges"},
    {"--threshold", "threshold"},
    {"--seed-topology", "seed_topology"},
    {"--seed-order", "seed_order"},
    {"--seed-base", "seed_base"},
    {"--trials", "trials"},
    {"--sizes", "sizes"},
    {"--out", "out"},
    {"--workers", "workers"},
    {"--dump-misclassified", "dump_misclassified"},
    {"--p-fixed", "p_fixed"},
    {"--pattern", "pattern"},
    {"--steps", "steps"},
    {"--window", "window"},
    {"--w0", "w0"},
    {"--dw", "dw"},
    {"--seed-hebbian", "seed_hebbian"},
    {"--hebbian-gamma", "hebbian_gamma"},
    {"--hebbian-rule", "hebbian_rule"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inductive conceptual network: hierarchical VMM nodes for unsupervised digit clustering"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "key = value config file (flags override it)");
  std::vector<std::string> values(kFlags.size());
  std::vector<CLI::Option*> options;
  for (std::size_t i = 0; i < kFlags.size(); ++i) {
    options.push_back(app.add_option(kFlags[i].first, values[i], "config key " + kFlags[i].second));
  }

  auto* cluster = app.add_subcommand("cluster", "run a dataset once and score the top-node codes");
  auto* trials = app.add_subcommand("trials", "subsampling trials: mean/std error per dataset size");
  auto* hebbian = app.add_subcommand("hebbian", "single-node Hebbian experiment with CSV traces");
  auto* topology = app.add_subcommand("topology", "dump the network wiring");

  CLI11_PARSE(app, argc, argv);

  try {
    icn::RunConfig cfg;
    if (!config_path.empty()) cfg.load_file(config_path);
    for (std::size_t i = 0; i < kFlags.size(); ++i) {
      if (options[i]->count() > 0) cfg.set(kFlags[i].second, values[i]);
    }

    if (cluster->parsed()) {
      icn::cmd_cluster(cfg, std::cerr);
    } else if (trials->parsed()) {
      icn::cmd_trials(cfg, std::cerr);
    } else if (hebbian->parsed()) {
      icn::cmd_hebbian(cfg, std::cerr);
    } else if (topology->parsed()) {
      icn::cmd_topology(cfg, std::cerr);
    }
  } catch (const icn::Error& e) {
    std::cerr << "error[" << icn::tag(e.code()) << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
