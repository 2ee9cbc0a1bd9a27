#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "icn/bits.hpp"
#include "icn/dataset.hpp"
#include "icn/error.hpp"
#include "icn/node.hpp"
#include "icn/random.hpp"
#include "icn/topology.hpp"

namespace icn {

struct LabeledCode {
  int label;
  std::string code;

  friend bool operator==(const LabeledCode&, const LabeledCode&) = default;
};

/// Geometry and node parameters of a network; the topology seed is kept
/// separately so trials can vary it.
struct NetworkConfig {
  std::vector<std::size_t> layers{50, 20, 5, 1};
  std::size_t input_width = 784;
  std::size_t k = 5;
  std::size_t gamma = 2;
  std::size_t random_extra_edges = 1;
};

/// An assembled network: topology, one node per topology slot, shared k and
/// gamma. Processing an image runs every node once, layer by layer, and
/// updates all models in place.
class Network {
 public:
  Network(Topology topology, std::size_t k, std::size_t gamma)
      : topology_(std::move(topology)), k_(k), gamma_(gamma) {
    if (k < 1) throw Error(Errc::invalid_parameter, "network: k must be >= 1");
    if (gamma < 1) throw Error(Errc::invalid_parameter, "network: gamma must be >= 1");
    build();
  }

  const Topology& topology() const noexcept { return topology_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t gamma() const noexcept { return gamma_; }
  std::size_t images_processed() const noexcept { return images_processed_; }

  const Node& node(std::size_t layer, std::size_t index) const { return nodes_.at(layer).at(index); }
  Node& node(std::size_t layer, std::size_t index) { return nodes_.at(layer).at(index); }

  /// Bits read by a node per image.
  std::size_t input_width(std::size_t layer, std::size_t index) const {
    return in_width_.at(layer).at(index);
  }
  /// Bits emitted by a node per image.
  std::size_t output_width(std::size_t layer, std::size_t index) const {
    return out_width_.at(layer).at(index);
  }
  std::size_t code_length() const noexcept { return out_width_.back().front(); }

  /// Runs one image through every layer; returns the top node's code.
  Bits process(BitSpan image) {
    if (image.size() != topology_.input_width) {
      throw Error(Errc::invalid_input, "network: image has " + std::to_string(image.size()) +
                                           " bits, topology expects " +
                                           std::to_string(topology_.input_width));
    }
    for (auto b : image) {
      if (b > 1) throw Error(Errc::invalid_symbol, "network: image bits must be 0 or 1");
    }
    Bits gathered;
    for (std::size_t x = 0; x < topology_.layers(); ++x) {
      auto& outputs = outputs_[x];
      for (std::size_t j = 0; j < nodes_[x].size(); ++j) {
        gathered.clear();
        for (const auto& e : topology_.edges[x][j]) {
          if (x == 0) {
            gathered.push_back(image[e.source]);
          } else {
            const auto& src = outputs_[x - 1][e.source];
            gathered.insert(gathered.end(), src.begin(), src.end());
          }
        }
        outputs[j].clear();
        nodes_[x][j].process_into(gathered, outputs[j]);
      }
    }
    ++images_processed_;
    return outputs_.back().front();
  }

  Bits process(const BinaryImage& image) { return process(image.bits); }

  static Network from_config(const NetworkConfig& cfg, std::uint64_t topology_seed) {
    return Network(build_topology(cfg.layers, cfg.input_width, topology_seed, cfg.random_extra_edges),
                   cfg.k, cfg.gamma);
  }

  /// Processes images in a seeded shuffled order; codes come back in the
  /// original index order.
  std::vector<LabeledCode> run_dataset(std::span<const BinaryImage> images, std::uint64_t order_seed) {
    if (images.empty()) throw Error(Errc::invalid_input, "network: empty dataset");
    std::vector<LabeledCode> out(images.size());
    for (auto i : permutation(images.size(), order_seed)) {
      out[i] = {images[i].label, to_string(process(images[i]))};
    }
    return out;
  }

  void reset() {
    for (auto& layer : nodes_)
      for (auto& n : layer) n.reset();
    images_processed_ = 0;
  }

  /// Text checkpoint: configuration, then every node's best pattern and
  /// model dump. load_checkpoint() restores it bit-exactly.
  void save_checkpoint(std::ostream& os) const {
    os << "icn-checkpoint 1\nlayers ";
    for (std::size_t i = 0; i < topology_.layers(); ++i) {
      os << (i ? "," : "") << topology_.layer_sizes[i];
    }
    os << "\ninput_width " << topology_.input_width << "\nrandom_extra_edges "
       << topology_.random_extra_edges << "\nseed_topology " << topology_.seed << "\nk " << k_
       << "\ngamma " << gamma_ << "\nimages_processed " << images_processed_ << '\n';
    for (std::size_t x = 0; x < nodes_.size(); ++x) {
      for (std::size_t j = 0; j < nodes_[x].size(); ++j) {
        const auto& n = nodes_[x][j];
        os << "node " << (x + 1) << ' ' << j << ' ' << to_string(n.best_pattern()) << '\n';
        n.model().dump(os);
      }
    }
    os << "end\n";
  }

  std::string checkpoint() const {
    std::ostringstream os;
    save_checkpoint(os);
    return os.str();
  }

  static Network load_checkpoint(std::istream& is) {
    auto expect = [&](const char* key) {
      std::string word;
      if (!(is >> word) || word != key) {
        throw Error(Errc::parse, std::string("checkpoint: expected '") + key + "'");
      }
    };
    std::string version, layers_text;
    expect("icn-checkpoint");
    is >> version;
    if (version != "1") throw Error(Errc::parse, "checkpoint: unsupported version " + version);
    expect("layers");
    is >> layers_text;
    std::vector<std::size_t> layers;
    std::istringstream ls(layers_text);
    for (std::string item; std::getline(ls, item, ',');) layers.push_back(std::stoul(item));
    std::size_t input_width = 0, extra = 0, k = 0, gamma = 0, processed = 0;
    std::uint64_t seed = 0;
    expect("input_width");
    is >> input_width;
    expect("random_extra_edges");
    is >> extra;
    expect("seed_topology");
    is >> seed;
    expect("k");
    is >> k;
    expect("gamma");
    is >> gamma;
    expect("images_processed");
    is >> processed;
    if (!is) throw Error(Errc::parse, "checkpoint: malformed header");

    Network net(build_topology(layers, input_width, seed, extra), k, gamma);
    net.images_processed_ = processed;
    for (std::size_t x = 0; x < net.nodes_.size(); ++x) {
      for (std::size_t j = 0; j < net.nodes_[x].size(); ++j) {
        std::size_t layer = 0, index = 0;
        std::string best;
        expect("node");
        is >> layer >> index >> best;
        if (!is || layer != x + 1 || index != j) throw Error(Errc::parse, "checkpoint: node out of order");
        auto model = VmmModel::load(is);
        net.nodes_[x][j] = Node::restore(std::move(model), gamma, bits_from_string(best),
                                         net.nodes_[x][j].id());
      }
    }
    expect("end");
    return net;
  }

 private:
  void build() {
    const auto& t = topology_;
    nodes_.resize(t.layers());
    in_width_.resize(t.layers());
    out_width_.resize(t.layers());
    outputs_.resize(t.layers());
    std::size_t id = 0;
    for (std::size_t x = 0; x < t.layers(); ++x) {
      for (std::size_t j = 0; j < t.edges[x].size(); ++j) {
        std::size_t width = 0;
        for (const auto& e : t.edges[x][j]) width += x == 0 ? 1 : out_width_[x - 1][e.source];
        if (width < k_) {
          throw Error(Errc::configuration,
                      "network: layer " + std::to_string(x + 1) + " node " + std::to_string(j) +
                          " reads " + std::to_string(width) + " bits, fewer than k=" +
                          std::to_string(k_));
        }
        in_width_[x].push_back(width);
        out_width_[x].push_back(width / k_);
        nodes_[x].emplace_back(k_, gamma_, id++);
      }
      outputs_[x].resize(nodes_[x].size());
    }
  }

  Topology topology_;
  std::size_t k_;
  std::size_t gamma_;
  std::size_t images_processed_ = 0;
  std::vector<std::vector<Node>> nodes_;
  std::vector<std::vector<std::size_t>> in_width_;
  std::vector<std::vector<std::size_t>> out_width_;
  std::vector<std::vector<Bits>> outputs_;
};

}  // namespace icn
