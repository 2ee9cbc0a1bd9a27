#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "icn/dataset.hpp"
#include "icn/error.hpp"
#include "icn/network.hpp"
#include "icn/random.hpp"

namespace icn {

/// Clustering score of top-node codes against ground-truth labels.
///
/// Each class is represented by its most frequent code (ties: smallest
/// code). An image is a mismatch when its code differs from its class
/// representative. Classes may share a representative.
struct EvalReport {
  std::vector<LabeledCode> per_image;
  std::map<int, std::string> representatives;
  std::map<std::pair<int, std::string>, std::size_t> confusion;
  std::vector<std::string> shared_representatives;  // codes that represent more than one class
  std::size_t total = 0;
  std::size_t mismatches = 0;
  double error_rate = 0.0;
  /// Supplementary: fraction of images whose label is the majority label of
  /// their code. Never used for acceptance.
  double purity = 0.0;
  std::size_t code_length = 0;
  std::size_t distinct_codes = 0;

  std::vector<std::size_t> mismatch_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < per_image.size(); ++i) {
      if (per_image[i].code != representatives.at(per_image[i].label)) out.push_back(i);
    }
    return out;
  }
};

inline EvalReport compute_error(std::span<const LabeledCode> per_image) {
  if (per_image.empty()) throw Error(Errc::invalid_input, "compute_error: no images");
  const std::size_t length = per_image.front().code.size();
  EvalReport r;
  r.per_image.assign(per_image.begin(), per_image.end());
  r.total = per_image.size();
  r.code_length = length;
  for (const auto& lc : per_image) {
    if (lc.code.size() != length) throw Error(Errc::invalid_input, "compute_error: ragged code lengths");
    ++r.confusion[{lc.label, lc.code}];
  }

  // The confusion map iterates codes in ascending order within each label, so
  // a strict '>' keeps the smallest code on ties.
  std::map<int, std::size_t> best_count;
  std::map<std::string, std::map<int, std::size_t>> by_code;
  for (const auto& [key, count] : r.confusion) {
    const auto& [label, code] = key;
    if (count > best_count[label]) {
      best_count[label] = count;
      r.representatives[label] = code;
    }
    by_code[code][label] += count;
  }

  std::size_t matched = 0;
  for (const auto& [label, count] : best_count) matched += count;
  r.mismatches = r.total - matched;
  r.error_rate = static_cast<double>(r.mismatches) / static_cast<double>(r.total);

  std::size_t majority = 0;
  for (const auto& [code, labels] : by_code) {
    std::size_t top = 0;
    for (const auto& [label, count] : labels) top = std::max(top, count);
    majority += top;
  }
  r.purity = static_cast<double>(majority) / static_cast<double>(r.total);
  r.distinct_codes = by_code.size();

  std::map<std::string, std::size_t> uses;
  for (const auto& [label, code] : r.representatives) ++uses[code];
  for (const auto& [code, n] : uses) {
    if (n > 1) r.shared_representatives.push_back(code);
  }
  return r;
}

/// Writes up to `limit` mismatched images as label_code_index.pgm into dir.
inline std::vector<std::filesystem::path> dump_misclassified(const EvalReport& report,
                                                             std::span<const GrayImage> images,
                                                             std::size_t limit,
                                                             const std::filesystem::path& dir) {
  if (images.size() != report.per_image.size()) {
    throw Error(Errc::invalid_input, "dump_misclassified: report and image counts differ");
  }
  std::vector<std::filesystem::path> written;
  for (auto i : report.mismatch_indices()) {
    if (written.size() >= limit) break;
    if (written.empty()) std::filesystem::create_directories(dir);
    const auto& lc = report.per_image[i];
    auto path = dir / (std::to_string(lc.label) + "_" + lc.code + "_" + std::to_string(i) + ".pgm");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(Errc::io, "cannot write " + path.string());
    write_pgm(images[i], os);
    written.push_back(std::move(path));
  }
  return written;
}

struct TrialSeeds {
  std::uint64_t subsample;
  std::uint64_t topology;
  std::uint64_t order;
};

inline TrialSeeds trial_seeds(std::uint64_t base_seed, std::size_t size, std::size_t trial) {
  const auto s = derive_seed(base_seed, size, trial);
  return {derive_seed(s, 1), derive_seed(s, 2), derive_seed(s, 3)};
}

/// One independent trial: fresh subsample, fresh network, seeded order.
inline EvalReport run_trial(std::span<const BinaryImage> dataset, const NetworkConfig& cfg,
                            std::size_t size, const TrialSeeds& seeds) {
  const auto sample = subsample(dataset, size, seeds.subsample);
  auto net = Network::from_config(cfg, seeds.topology);
  return compute_error(net.run_dataset(sample, seeds.order));
}

struct TrialRow {
  std::size_t size = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single trial
  std::vector<double> errors;

  std::size_t trials() const noexcept { return errors.size(); }
};

/// Runs `trials` trials per size and aggregates mean and sample standard
/// deviation. Rows come back sorted by ascending size. Work is spread over
/// `workers` threads; results are keyed by (size, trial) so the output does
/// not depend on scheduling.
inline std::vector<TrialRow> run_trials(std::span<const BinaryImage> dataset, std::vector<std::size_t> sizes,
                                        std::size_t trials, std::uint64_t base_seed,
                                        const NetworkConfig& cfg, std::size_t workers = 1) {
  if (trials < 1) throw Error(Errc::invalid_parameter, "run_trials: trials must be >= 1");
  if (sizes.empty()) throw Error(Errc::invalid_parameter, "run_trials: no sizes");
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  for (auto s : sizes) {
    if (s < 1 || s > dataset.size()) {
      throw Error(Errc::invalid_parameter, "run_trials: size " + std::to_string(s) + " outside [1, " +
                                               std::to_string(dataset.size()) + "]");
    }
  }

  std::vector<TrialRow> rows(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    rows[i].size = sizes[i];
    rows[i].errors.assign(trials, 0.0);
  }

  const std::size_t jobs = sizes.size() * trials;
  std::size_t next = 0;
  std::mutex mu;
  std::exception_ptr failure;
  auto work = [&] {
    for (;;) {
      std::size_t job;
      {
        std::lock_guard lock(mu);
        if (next >= jobs || failure) return;
        job = next++;
      }
      const std::size_t si = job / trials, ti = job % trials;
      try {
        const auto report = run_trial(dataset, cfg, sizes[si], trial_seeds(base_seed, sizes[si], ti));
        rows[si].errors[ti] = report.error_rate;
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, jobs);
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  pool.clear();
  if (failure) std::rethrow_exception(failure);

  for (auto& row : rows) {
    double sum = 0.0;
    for (double e : row.errors) sum += e;
    row.mean = sum / static_cast<double>(trials);
    if (trials > 1) {
      double ss = 0.0;
      for (double e : row.errors) ss += (e - row.mean) * (e - row.mean);
      row.stddev = std::sqrt(ss / static_cast<double>(trials - 1));
    }
  }
  return rows;
}

}  // namespace icn
