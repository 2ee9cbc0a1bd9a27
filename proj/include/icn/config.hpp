#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "icn/error.hpp"

namespace icn {

/// Flat key/value run configuration. Files use "key = value" lines with '#'
/// comments; command-line flags are applied on top and win.
struct RunConfig {
  std::string dataset = "data/mnist";
  std::string format = "mnist";  // mnist | usps
  std::string split = "test";    // mnist only: test (t10k) | train
  std::vector<std::size_t> layers{50, 20, 5, 1};
  std::size_t input_width = 0;  // 0: image area of the dataset
  std::size_t k = 5;
  std::size_t gamma = 2;
  std::size_t random_extra_edges = 1;
  int threshold = 80;
  std::uint64_t seed_topology = 1;
  std::uint64_t seed_order = 1;
  std::uint64_t seed_base = 1;
  std::size_t trials = 1;
  std::vector<std::string> sizes{"full"};
  std::string out = "out";
  std::size_t workers = 1;
  std::size_t dump_misclassified = 0;

  // hebbian
  double p_fixed = 0.25;
  std::string pattern = "10010";
  std::size_t steps = 1000;
  std::size_t window = 2;
  double w0 = 0.5;
  double dw = 0.01;
  std::uint64_t seed_hebbian = 1;
  std::size_t hebbian_gamma = 1;
  std::string hebbian_rule = "pre_window";

  /// Applies one key/value pair; unknown keys and malformed values are
  /// configuration errors.
  void set(std::string_view key, std::string_view value) {
    const std::string k(key), v(value);
    try {
      if (k == "dataset") dataset = v;
      else if (k == "format") format = v;
      else if (k == "split") split = v;
      else if (k == "layers") layers = parse_list<std::size_t>(v);
      else if (k == "input_width") input_width = std::stoul(v);
      else if (k == "k") this->k = std::stoul(v);
      else if (k == "gamma") gamma = std::stoul(v);
      else if (k == "random_extra_edges") random_extra_edges = std::stoul(v);
      else if (k == "threshold") threshold = std::stoi(v);
      else if (k == "seed_topology") seed_topology = std::stoull(v);
      else if (k == "seed_order") seed_order = std::stoull(v);
      else if (k == "seed_base") seed_base = std::stoull(v);
      else if (k == "trials") trials = std::stoul(v);
      else if (k == "sizes") sizes = parse_list<std::string>(v);
      else if (k == "out") out = v;
      else if (k == "workers") workers = std::stoul(v);
      else if (k == "dump_misclassified") dump_misclassified = std::stoul(v);
      else if (k == "p_fixed") p_fixed = std::stod(v);
      else if (k == "pattern") pattern = v;
      else if (k == "steps") steps = std::stoul(v);
      else if (k == "window") window = std::stoul(v);
      else if (k == "w0") w0 = std::stod(v);
      else if (k == "dw") dw = std::stod(v);
      else if (k == "seed_hebbian") seed_hebbian = std::stoull(v);
      else if (k == "hebbian_gamma") hebbian_gamma = std::stoul(v);
      else if (k == "hebbian_rule") hebbian_rule = v;
      else throw Error(Errc::configuration, "unknown config key '" + k + "'");
    } catch (const std::logic_error&) {
      throw Error(Errc::configuration, "bad value for '" + k + "': '" + v + "'");
    }
  }

  void load_text(std::string_view text) {
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
      ++line_no;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      const auto eq = line.find('=');
      const auto key = trim(std::string_view(line).substr(0, eq));
      if (key.empty() && eq == std::string::npos) continue;
      if (eq == std::string::npos || key.empty()) {
        throw Error(Errc::configuration, "config line " + std::to_string(line_no) + ": expected key = value");
      }
      set(key, trim(std::string_view(line).substr(eq + 1)));
    }
  }

  void load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::configuration, "cannot open config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    load_text(buf.str());
  }

  /// Every key affecting results, sorted, one "key=value" per line. The
  /// output directory and worker count are left out.
  std::map<std::string, std::string> normalized() const {
    std::map<std::string, std::string> m;
    m["dataset"] = dataset;
    m["format"] = format;
    m["split"] = split;
    m["layers"] = join(layers);
    m["input_width"] = std::to_string(input_width);
    m["k"] = std::to_string(k);
    m["gamma"] = std::to_string(gamma);
    m["random_extra_edges"] = std::to_string(random_extra_edges);
    m["threshold"] = std::to_string(threshold);
    m["seed_topology"] = std::to_string(seed_topology);
    m["seed_order"] = std::to_string(seed_order);
    m["seed_base"] = std::to_string(seed_base);
    m["trials"] = std::to_string(trials);
    m["sizes"] = join(sizes);
    m["dump_misclassified"] = std::to_string(dump_misclassified);
    m["p_fixed"] = number(p_fixed);
    m["pattern"] = pattern;
    m["steps"] = std::to_string(steps);
    m["window"] = std::to_string(window);
    m["w0"] = number(w0);
    m["dw"] = number(dw);
    m["seed_hebbian"] = std::to_string(seed_hebbian);
    m["hebbian_gamma"] = std::to_string(hebbian_gamma);
    m["hebbian_rule"] = hebbian_rule;
    return m;
  }

  /// FNV-1a 64 over the normalized text, as 16 hex digits.
  std::string digest() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& [key, value] : normalized()) {
      for (char c : key + "=" + value + "\n") {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
      }
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
  }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  }

  template <class T>
  static std::vector<T> parse_list(const std::string& v) {
    std::vector<T> out;
    std::istringstream in(v);
    for (std::string item; std::getline(in, item, ',');) {
      const auto t = std::string(trim(item));
      if (t.empty()) continue;
      if constexpr (std::is_same_v<T, std::string>) {
        out.push_back(t);
      } else {
        std::size_t used = 0;
        out.push_back(static_cast<T>(std::stoull(t, &used)));
        if (used != t.size()) throw std::invalid_argument(t);
      }
    }
    if (out.empty()) throw std::invalid_argument(v);
    return out;
  }

  template <class T>
  static std::string join(const std::vector<T>& items) {
    std::ostringstream os;
    for (std::size_t i = 0; i < items.size(); ++i) os << (i ? "," : "") << items[i];
    return os.str();
  }

  static std::string number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
  }
};

}  // namespace icn
