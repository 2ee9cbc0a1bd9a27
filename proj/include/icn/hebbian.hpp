#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <ostream>
#include <vector>

#include "icn/bits.hpp"
#include "icn/error.hpp"
#include "icn/node.hpp"
#include "icn/random.hpp"

namespace icn {

// Single-node plasticity experiment. One tuple per timestep drives a regular
// Node; per-dendrite weights are a diagnostic readout and never feed back
// into spiking.

enum class HebbianRule {
  /// Each presynaptic spike earns +dw if the node spikes within `window`
  /// steps at or after it, otherwise -dw once the window has passed.
  pre_window,
  /// Only on a postsynaptic spike at t: +dw for every dendrite active in
  /// [t - window, t], -dw for the others.
  post_gated,
};

struct HebbianParams {
  double w0 = 0.5;
  double dw = 0.01;
  std::size_t window = 2;
  double p_fixed = 0.25;
  Bits fixed_pattern{1, 0, 0, 1, 0};
  std::size_t steps = 1000;
  std::uint64_t seed = 1;
  std::size_t gamma = 1;
  HebbianRule rule = HebbianRule::pre_window;
};

struct HebbianTrace {
  HebbianParams params;
  std::vector<Bits> stimulus;                    // [step][dendrite]
  std::vector<std::uint8_t> output;              // [step]
  std::vector<std::vector<double>> weights;      // [step][dendrite], after the step
  std::vector<Bits> best_pattern;                // [step], after the node's update
  std::size_t potentiations = 0;
  std::size_t depressions = 0;
  std::size_t unresolved = 0;                    // pre_window spikes still open at the end

  std::size_t dendrites() const noexcept { return params.fixed_pattern.size(); }

  /// First step from which the best pattern equals the fixed pattern for the
  /// rest of the run, or `steps` if it never settles.
  std::size_t settled_at() const {
    std::size_t from = best_pattern.size();
    while (from > 0 && best_pattern[from - 1] == params.fixed_pattern) --from;
    return from;
  }

  /// Raster row for a unit: dendrites 0..n-1, then the output as unit n.
  std::uint8_t spike(std::size_t unit, std::size_t step) const {
    return unit < dendrites() ? stimulus[step][unit] : output[step];
  }
};

inline std::vector<Bits> generate_stimulus(std::size_t steps, double p_fixed, const Bits& fixed_pattern,
                                           std::uint64_t seed) {
  if (!(p_fixed >= 0.0 && p_fixed <= 1.0)) {
    throw Error(Errc::invalid_parameter, "stimulus: p_fixed outside [0,1]");
  }
  if (fixed_pattern.empty()) throw Error(Errc::invalid_parameter, "stimulus: empty fixed pattern");
  for (auto b : fixed_pattern) {
    if (b > 1) throw Error(Errc::invalid_symbol, "stimulus: fixed pattern must be binary");
  }
  Rng rng(seed);
  std::vector<Bits> out;
  out.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    if (uniform_unit(rng) < p_fixed) {
      out.push_back(fixed_pattern);
    } else {
      Bits tuple(fixed_pattern.size());
      for (auto& b : tuple) b = static_cast<std::uint8_t>(uniform_below(rng, 2));
      out.push_back(std::move(tuple));
    }
  }
  return out;
}

inline HebbianTrace run_hebbian(const HebbianParams& params) {
  if (params.steps < 1) throw Error(Errc::invalid_parameter, "hebbian: steps must be >= 1");
  if (params.w0 < 0.0 || params.w0 > 1.0) throw Error(Errc::invalid_parameter, "hebbian: w0 outside [0,1]");
  HebbianTrace trace;
  trace.params = params;
  trace.stimulus = generate_stimulus(params.steps, params.p_fixed, params.fixed_pattern, params.seed);

  const std::size_t n = params.fixed_pattern.size();
  Node node(n, params.gamma);
  std::vector<double> w(n, params.w0);
  auto nudge = [&](std::size_t i, double delta) {
    w[i] = std::clamp(w[i] + delta, 0.0, 1.0);
    ++(delta > 0 ? trace.potentiations : trace.depressions);
  };

  struct PreSpike {
    std::size_t dendrite;
    std::size_t step;
  };
  std::deque<PreSpike> pending;

  trace.output.reserve(params.steps);
  trace.weights.reserve(params.steps);
  trace.best_pattern.reserve(params.steps);
  for (std::size_t t = 0; t < params.steps; ++t) {
    const auto& tuple = trace.stimulus[t];
    const auto spike = node.process(tuple).front();
    trace.output.push_back(spike);

    if (params.rule == HebbianRule::pre_window) {
      for (std::size_t i = 0; i < n; ++i) {
        if (tuple[i]) pending.push_back({i, t});
      }
      if (spike) {
        for (const auto& p : pending) nudge(p.dendrite, params.dw);
        pending.clear();
      } else {
        while (!pending.empty() && t - pending.front().step >= params.window) {
          nudge(pending.front().dendrite, -params.dw);
          pending.pop_front();
        }
      }
    } else if (spike) {
      const std::size_t from = t >= params.window ? t - params.window : 0;
      for (std::size_t i = 0; i < n; ++i) {
        bool active = false;
        for (std::size_t s = from; s <= t && !active; ++s) active = trace.stimulus[s][i] != 0;
        nudge(i, active ? params.dw : -params.dw);
      }
    }

    trace.weights.push_back(w);
    trace.best_pattern.push_back(node.best_pattern());
  }
  trace.unresolved = pending.size();
  return trace;
}

/// One row per unit (dendrites first, output last), one column per step.
inline void write_raster_csv(const HebbianTrace& trace, std::ostream& os) {
  os << "unit";
  for (std::size_t t = 0; t < trace.output.size(); ++t) os << ',' << t;
  os << '\n';
  for (std::size_t u = 0; u <= trace.dendrites(); ++u) {
    os << (u + 1);
    for (std::size_t t = 0; t < trace.output.size(); ++t) os << ',' << int{trace.spike(u, t)};
    os << '\n';
  }
}

inline void write_weights_csv(const HebbianTrace& trace, std::ostream& os) {
  os << "step";
  for (std::size_t i = 0; i < trace.dendrites(); ++i) os << ",w" << (i + 1);
  os << '\n';
  for (std::size_t t = 0; t < trace.weights.size(); ++t) {
    os << t;
    for (double v : trace.weights[t]) os << ',' << v;
    os << '\n';
  }
}

inline void write_best_pattern_csv(const HebbianTrace& trace, std::ostream& os) {
  os << "step,best_pattern,output\n";
  for (std::size_t t = 0; t < trace.best_pattern.size(); ++t) {
    os << t << ',' << to_string(trace.best_pattern[t]) << ',' << int{trace.output[t]} << '\n';
  }
}

}  // namespace icn
