#pragma once

#include <cstddef>
#include <string>
#include <utility>

#include "icn/bits.hpp"
#include "icn/error.hpp"
#include "icn/vmm.hpp"

namespace icn {

/// One network node. Reads its dendritic input in disjoint k-tuples; for each
/// tuple it updates its model, spikes if the tuple lies within Hamming
/// distance < gamma of the best pattern held before the tuple, then refreshes
/// the best pattern.
class Node {
 public:
  Node(std::size_t k, std::size_t gamma, std::size_t id = 0)
      : model_(check_k(k)), k_(k), gamma_(gamma), id_(id), best_(k, 0) {
    if (gamma < 1) throw Error(Errc::invalid_parameter, "node: gamma must be >= 1");
  }

  std::size_t k() const noexcept { return k_; }
  std::size_t gamma() const noexcept { return gamma_; }
  std::size_t id() const noexcept { return id_; }
  const VmmModel& model() const noexcept { return model_; }
  const Bits& best_pattern() const noexcept { return best_; }

  /// Output length for an input of n bits.
  std::size_t output_length(std::size_t n) const noexcept { return n / k_; }

  Bits process(BitSpan input) {
    Bits out;
    out.reserve(input.size() / k_);
    process_into(input, out);
    return out;
  }

  /// Appends floor(|input|/k) output bits to `out`. A trailing remainder
  /// shorter than k is ignored.
  void process_into(BitSpan input, Bits& out) {
    if (input.size() < k_) {
      throw Error(Errc::invalid_input, "node " + std::to_string(id_) + ": input of " +
                                           std::to_string(input.size()) + " bits shorter than k=" +
                                           std::to_string(k_));
    }
    const std::size_t tuples = input.size() / k_;
    for (std::size_t t = 0; t < tuples; ++t) {
      const auto tuple = input.subspan(t * k_, k_);
      model_.update(tuple);
      out.push_back(hamming_distance(tuple, best_) < gamma_ ? 1 : 0);
      if (!pinned_) best_ = model_.best_pattern(k_);
    }
  }

  /// Clears the model; the best pattern returns to all zeros (the argmax of
  /// an empty model under the lexicographic tie-break).
  void reset() {
    model_.clear();
    best_.assign(k_, 0);
  }

  /// Fixes the best pattern; it is no longer refreshed after each tuple.
  void pin_best_pattern(Bits pattern) {
    if (pattern.size() != k_) throw Error(Errc::invalid_parameter, "node: pinned pattern length != k");
    best_ = std::move(pattern);
    pinned_ = true;
  }

  void unpin() noexcept { pinned_ = false; }
  bool pinned() const noexcept { return pinned_; }

  /// Rebuilds a node from checkpointed parts.
  static Node restore(VmmModel model, std::size_t gamma, Bits best, std::size_t id) {
    Node node(model.max_order(), gamma, id);
    if (best.size() != node.k_) throw Error(Errc::parse, "node: best pattern length != k");
    node.model_ = std::move(model);
    node.best_ = std::move(best);
    return node;
  }

 private:
  static std::size_t check_k(std::size_t k) {
    if (k < 1) throw Error(Errc::invalid_parameter, "node: k must be >= 1");
    return k;
  }

  VmmModel model_;
  std::size_t k_;
  std::size_t gamma_;
  std::size_t id_;
  Bits best_;
  bool pinned_ = false;
};

}  // namespace icn
