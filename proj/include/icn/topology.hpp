#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "icn/error.hpp"
#include "icn/random.hpp"

namespace icn {

struct Edge {
  std::size_t source;  // node index in the layer below, or pixel index for layer 1
  bool random;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Wiring rule for one (lower width, upper width) pair.
struct LayerPairRule {
  std::size_t stride;          // ceil(lower / upper)
  std::size_t block;           // stride + 1
  std::size_t block_clamped;   // min(block, lower)

  static LayerPairRule of(std::size_t lower, std::size_t upper) {
    const std::size_t stride = (lower + upper - 1) / upper;
    return {stride, stride + 1, std::min(stride + 1, lower)};
  }
};

/// Pyramidal wiring. Layer 0 is the virtual input layer (pixels); layers
/// 1..L hold nodes. `edges[x][j]` lists the sources of node j of layer x+1 in
/// gathering order: the contiguous ring block first, then random extras.
struct Topology {
  std::vector<std::size_t> layer_sizes;
  std::size_t input_width = 0;
  std::uint64_t seed = 0;
  std::size_t random_extra_edges = 1;
  std::vector<std::vector<std::vector<Edge>>> edges;

  std::size_t layers() const noexcept { return layer_sizes.size(); }

  /// Total node count q.
  std::size_t node_count() const noexcept {
    std::size_t q = 0;
    for (auto l : layer_sizes) q += l;
    return q;
  }

  /// Width of the layer feeding layer x (0-based node layer index).
  std::size_t lower_width(std::size_t x) const noexcept {
    return x == 0 ? input_width : layer_sizes[x - 1];
  }

  std::size_t edge_count() const noexcept {
    std::size_t n = 0;
    for (const auto& layer : edges)
      for (const auto& node : layer) n += node.size();
    return n;
  }

  friend bool operator==(const Topology&, const Topology&) = default;
};

inline void validate_layers(std::span<const std::size_t> layer_sizes, std::size_t input_width) {
  if (layer_sizes.empty()) throw Error(Errc::invalid_topology, "topology: no layers");
  for (std::size_t i = 0; i < layer_sizes.size(); ++i) {
    if (layer_sizes[i] == 0) throw Error(Errc::invalid_topology, "topology: empty layer");
    if (i > 0 && layer_sizes[i] >= layer_sizes[i - 1]) {
      throw Error(Errc::invalid_topology, "topology: layer sizes must be strictly decreasing");
    }
  }
  if (layer_sizes.back() != 1) throw Error(Errc::invalid_topology, "topology: top layer must hold one node");
  if (input_width <= layer_sizes.front()) {
    throw Error(Errc::invalid_topology, "topology: input width must exceed the first layer size");
  }
}

/// Builds the wiring. For each lower/upper pair (w, u), upper node j reads the
/// ring block {(j*stride + t) mod w : t < block_clamped}, then
/// `random_extra_edges` further sources drawn uniformly from the w lower
/// sources and redrawn while already connected. Pure function of its
/// arguments.
inline Topology build_topology(std::vector<std::size_t> layer_sizes, std::size_t input_width,
                               std::uint64_t seed, std::size_t random_extra_edges = 1) {
  validate_layers(layer_sizes, input_width);
  Topology t;
  t.layer_sizes = std::move(layer_sizes);
  t.input_width = input_width;
  t.seed = seed;
  t.random_extra_edges = random_extra_edges;
  t.edges.resize(t.layers());

  Rng rng(seed);
  std::vector<char> connected;
  for (std::size_t x = 0; x < t.layers(); ++x) {
    const std::size_t w = t.lower_width(x);
    const std::size_t u = t.layer_sizes[x];
    const auto rule = LayerPairRule::of(w, u);
    auto& layer = t.edges[x];
    layer.resize(u);
    for (std::size_t j = 0; j < u; ++j) {
      auto& sources = layer[j];
      connected.assign(w, 0);
      for (std::size_t s = 0; s < rule.block_clamped; ++s) {
        const std::size_t src = (j * rule.stride + s) % w;
        sources.push_back({src, false});
        connected[src] = 1;
      }
      for (std::size_t r = 0; r < random_extra_edges && sources.size() < w; ++r) {
        std::size_t src;
        do {
          src = static_cast<std::size_t>(uniform_below(rng, w));
        } while (connected[src]);
        sources.push_back({src, true});
        connected[src] = 1;
      }
    }
  }
  return t;
}

/// Header comment lines, then one line per edge:
/// "<layer> <target> <source> det|rnd" with layer 1 = first node layer.
inline void topology_dump(const Topology& t, std::ostream& os) {
  os << "# layers";
  for (std::size_t i = 0; i < t.layers(); ++i) os << (i ? "," : " ") << t.layer_sizes[i];
  os << "\n# input_width " << t.input_width << "\n# random_extra_edges " << t.random_extra_edges
     << "\n# seed " << t.seed << "\n# nodes " << t.node_count() << "\n# edges " << t.edge_count()
     << '\n';
  for (std::size_t x = 0; x < t.layers(); ++x) {
    for (std::size_t j = 0; j < t.edges[x].size(); ++j) {
      for (const auto& e : t.edges[x][j]) {
        os << (x + 1) << ' ' << j << ' ' << e.source << ' ' << (e.random ? "rnd" : "det") << '\n';
      }
    }
  }
}

inline std::string topology_dump(const Topology& t) {
  std::ostringstream os;
  topology_dump(t, os);
  return os.str();
}

/// Graphviz rendering; pixel sources are named p<i>, nodes n<layer>_<index>.
inline void topology_dot(const Topology& t, std::ostream& os) {
  os << "digraph icn {\n  rankdir=BT;\n";
  for (std::size_t x = 0; x < t.layers(); ++x) {
    for (std::size_t j = 0; j < t.edges[x].size(); ++j) {
      for (const auto& e : t.edges[x][j]) {
        os << "  ";
        if (x == 0) {
          os << 'p' << e.source;
        } else {
          os << 'n' << x << '_' << e.source;
        }
        os << " -> n" << (x + 1) << '_' << j << (e.random ? " [style=dashed]" : "") << ";\n";
      }
    }
  }
  os << "}\n";
}

}  // namespace icn
