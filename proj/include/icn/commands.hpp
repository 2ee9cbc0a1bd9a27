#pragma once

// Command implementations behind the `icn` executable. Each command reads a
// RunConfig, writes its files under cfg.out only, and logs progress to `log`.

#include <chrono>
#include <cstddef>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "icn/config.hpp"
#include "icn/dataset.hpp"
#include "icn/error.hpp"
#include "icn/evaluation.hpp"
#include "icn/hebbian.hpp"
#include "icn/network.hpp"
#include "icn/topology.hpp"

namespace icn {

using ordered_json = nlohmann::ordered_json;

struct LoadedDataset {
  std::vector<GrayImage> gray;
  std::vector<BinaryImage> bits;
  std::string source;
};

inline LoadedDataset load_dataset(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  LoadedDataset d;
  const fs::path root(cfg.dataset);
  if (!fs::exists(root)) throw Error(Errc::dataset_not_found, "dataset not found: " + cfg.dataset);
  if (cfg.format == "mnist") {
    if (cfg.split != "test" && cfg.split != "train") {
      throw Error(Errc::configuration, "split must be 'test' or 'train'");
    }
    const std::string prefix = cfg.split == "test" ? "t10k" : "train";
    fs::path images = root, labels = root;
    if (fs::is_directory(root)) {
      images = root / (prefix + "-images-idx3-ubyte");
      labels = root / (prefix + "-labels-idx1-ubyte");
    } else {
      throw Error(Errc::configuration, "mnist dataset must be a directory holding IDX files");
    }
    if (!fs::exists(images) || !fs::exists(labels)) {
      throw Error(Errc::dataset_not_found, "IDX files not found under " + cfg.dataset);
    }
    d.gray = load_idx(images, labels);
    d.source = images.string();
  } else if (cfg.format == "usps") {
    d.gray = load_usps(fs::is_directory(root) ? root / "usps.txt" : root);
    d.source = cfg.dataset;
  } else {
    throw Error(Errc::configuration, "unknown dataset format '" + cfg.format + "'");
  }
  if (d.gray.empty()) throw Error(Errc::invalid_input, "dataset is empty");
  d.bits = binarize_all(d.gray, cfg.threshold);
  return d;
}

inline NetworkConfig network_config(const RunConfig& cfg, std::size_t image_area) {
  NetworkConfig n;
  n.layers = cfg.layers;
  n.input_width = cfg.input_width ? cfg.input_width : image_area;
  n.k = cfg.k;
  n.gamma = cfg.gamma;
  n.random_extra_edges = cfg.random_extra_edges;
  return n;
}

namespace detail {

inline std::filesystem::path out_path(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.out);
  return std::filesystem::path(cfg.out) / name;
}

inline std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
  const auto path = out_path(cfg, name);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::io, "cannot write " + path.string());
  return os;
}

/// "# key=value ..." provenance line for text outputs.
inline std::string provenance(const RunConfig& cfg) {
  std::ostringstream os;
  os << "# config_digest=" << cfg.digest() << " seed_topology=" << cfg.seed_topology
     << " seed_order=" << cfg.seed_order << " seed_base=" << cfg.seed_base
     << " seed_hebbian=" << cfg.seed_hebbian << '\n';
  return os.str();
}

inline ordered_json provenance_json(const RunConfig& cfg) {
  ordered_json j;
  j["config_digest"] = cfg.digest();
  ordered_json seeds;
  seeds["topology"] = cfg.seed_topology;
  seeds["order"] = cfg.seed_order;
  seeds["base"] = cfg.seed_base;
  seeds["hebbian"] = cfg.seed_hebbian;
  j["seeds"] = seeds;
  ordered_json config;
  for (const auto& [k, v] : cfg.normalized()) config[k] = v;
  j["config"] = config;
  return j;
}

inline std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace detail

inline ordered_json report_json(const EvalReport& r) {
  ordered_json j;
  j["images"] = r.total;
  j["code_length"] = r.code_length;
  j["error_rate"] = r.error_rate;
  j["mismatches"] = r.mismatches;
  j["purity"] = r.purity;
  j["distinct_codes"] = r.distinct_codes;
  ordered_json reps = ordered_json::object();
  for (const auto& [label, code] : r.representatives) reps[std::to_string(label)] = code;
  j["representatives"] = reps;
  j["shared_representatives"] = r.shared_representatives;
  ordered_json confusion = ordered_json::array();
  for (const auto& [key, count] : r.confusion) confusion.push_back({key.first, key.second, count});
  j["confusion"] = confusion;
  return j;
}

inline void write_trials_csv(const std::vector<TrialRow>& rows, std::ostream& os) {
  os << "size,mean,std,trials\n";
  os << std::setprecision(10);
  for (const auto& r : rows) os << r.size << ',' << r.mean << ',' << r.stddev << ',' << r.trials() << '\n';
}

/// Builds the network, runs the whole dataset once, writes report.json,
/// codes.csv and, if requested, a gallery of mismatched images.
inline EvalReport cmd_cluster(const RunConfig& cfg, std::ostream& log) {
  const auto data = load_dataset(cfg);
  const auto ncfg = network_config(cfg, data.bits.front().bits.size());
  auto net = Network::from_config(ncfg, cfg.seed_topology);
  log << "cluster: " << data.bits.size() << " images, code length " << net.code_length() << '\n';
  auto report = compute_error(net.run_dataset(data.bits, cfg.seed_order));
  log << "cluster: error " << report.error_rate << ", purity " << report.purity << '\n';

  ordered_json j;
  j["command"] = "cluster";
  j.update(detail::provenance_json(cfg));
  j["dataset"] = {{"source", data.source},
                  {"format", cfg.format},
                  {"images", data.gray.size()},
                  {"width", data.gray.front().width},
                  {"height", data.gray.front().height}};
  j["result"] = report_json(report);
  j["generated_at"] = detail::timestamp();
  detail::open_out(cfg, "report.json") << j.dump(2) << '\n';

  auto codes = detail::open_out(cfg, "codes.csv");
  codes << detail::provenance(cfg) << "index,label,code\n";
  for (std::size_t i = 0; i < report.per_image.size(); ++i) {
    codes << i << ',' << report.per_image[i].label << ',' << report.per_image[i].code << '\n';
  }

  if (cfg.dump_misclassified > 0) {
    const auto written = dump_misclassified(report, data.gray, cfg.dump_misclassified,
                                            std::filesystem::path(cfg.out) / "misclassified");
    log << "cluster: wrote " << written.size() << " misclassified images\n";
  }
  return report;
}

/// Resolves "full" and numeric size entries against the dataset size.
inline std::vector<std::size_t> resolve_sizes(const std::vector<std::string>& sizes, std::size_t full) {
  std::vector<std::size_t> out;
  for (const auto& s : sizes) {
    if (s == "full") {
      out.push_back(full);
      continue;
    }
    try {
      std::size_t used = 0;
      out.push_back(std::stoul(s, &used));
      if (used != s.size()) throw std::invalid_argument(s);
    } catch (const std::logic_error&) {
      throw Error(Errc::configuration, "bad size '" + s + "'");
    }
  }
  return out;
}

inline std::vector<TrialRow> cmd_trials(const RunConfig& cfg, std::ostream& log) {
  const auto data = load_dataset(cfg);
  const auto ncfg = network_config(cfg, data.bits.front().bits.size());
  const auto sizes = resolve_sizes(cfg.sizes, data.bits.size());
  log << "trials: " << sizes.size() << " sizes x " << cfg.trials << " trials on " << cfg.workers
      << " worker(s)\n";
  const auto rows = run_trials(data.bits, sizes, cfg.trials, cfg.seed_base, ncfg, cfg.workers);

  auto csv = detail::open_out(cfg, "trials.csv");
  csv << detail::provenance(cfg);
  write_trials_csv(rows, csv);

  ordered_json j;
  j["command"] = "trials";
  j.update(detail::provenance_json(cfg));
  ordered_json table = ordered_json::array();
  for (const auto& r : rows) {
    table.push_back({{"size", r.size}, {"mean", r.mean}, {"std", r.stddev}, {"trials", r.trials()},
                     {"errors", r.errors}});
  }
  j["trials"] = table;
  j["generated_at"] = detail::timestamp();
  detail::open_out(cfg, "trials.json") << j.dump(2) << '\n';
  return rows;
}

inline HebbianParams hebbian_params(const RunConfig& cfg) {
  HebbianParams p;
  p.w0 = cfg.w0;
  p.dw = cfg.dw;
  p.window = cfg.window;
  p.p_fixed = cfg.p_fixed;
  p.fixed_pattern = bits_from_string(cfg.pattern);
  p.steps = cfg.steps;
  p.seed = cfg.seed_hebbian;
  p.gamma = cfg.hebbian_gamma;
  if (cfg.hebbian_rule == "pre_window") {
    p.rule = HebbianRule::pre_window;
  } else if (cfg.hebbian_rule == "post_gated") {
    p.rule = HebbianRule::post_gated;
  } else {
    throw Error(Errc::configuration, "hebbian_rule must be pre_window or post_gated");
  }
  return p;
}

inline HebbianTrace cmd_hebbian(const RunConfig& cfg, std::ostream& log) {
  const auto trace = run_hebbian(hebbian_params(cfg));
  const auto head = detail::provenance(cfg);
  {
    auto os = detail::open_out(cfg, "hebbian_raster.csv");
    os << head;
    write_raster_csv(trace, os);
  }
  {
    auto os = detail::open_out(cfg, "hebbian_weights.csv");
    os << head;
    write_weights_csv(trace, os);
  }
  {
    auto os = detail::open_out(cfg, "hebbian_best_pattern.csv");
    os << head;
    write_best_pattern_csv(trace, os);
  }
  ordered_json j;
  j["command"] = "hebbian";
  j.update(detail::provenance_json(cfg));
  j["final_weights"] = trace.weights.back();
  j["settled_at"] = trace.settled_at();
  j["output_spikes"] = std::count(trace.output.begin(), trace.output.end(), 1);
  j["potentiations"] = trace.potentiations;
  j["depressions"] = trace.depressions;
  j["generated_at"] = detail::timestamp();
  detail::open_out(cfg, "hebbian_summary.json") << j.dump(2) << '\n';
  log << "hebbian: best pattern settled at step " << trace.settled_at() << '\n';
  return trace;
}

inline Topology cmd_topology(const RunConfig& cfg, std::ostream& log) {
  const auto t = build_topology(cfg.layers, cfg.input_width ? cfg.input_width : 784, cfg.seed_topology,
                                cfg.random_extra_edges);
  {
    auto os = detail::open_out(cfg, "topology.txt");
    os << detail::provenance(cfg);
    topology_dump(t, os);
  }
  {
    auto os = detail::open_out(cfg, "topology.dot");
    os << "// config_digest=" << cfg.digest() << " seed_topology=" << cfg.seed_topology << '\n';
    topology_dot(t, os);
  }
  log << "topology: " << t.node_count() << " nodes, " << t.edge_count() << " edges\n";
  return t;
}

}  // namespace icn
