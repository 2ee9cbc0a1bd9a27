// Single-node plasticity run with the default parameters; prints a short
// summary and the first 60 steps of the raster.
#include <iostream>

#include "icn/hebbian.hpp"

int main(int argc, char** argv) {
  icn::HebbianParams params;
  if (argc > 1) params.seed = std::stoull(argv[1]);
  const auto trace = icn::run_hebbian(params);

  std::cout << "seed " << params.seed << ", best pattern settled at step " << trace.settled_at() << '\n';
  std::cout << "final weights:";
  for (double w : trace.weights.back()) std::cout << ' ' << w;
  std::cout << "\n\n";
  for (std::size_t u = 0; u <= trace.dendrites(); ++u) {
    std::cout << (u < trace.dendrites() ? "in " : "out") << ' ';
    for (std::size_t t = 0; t < 60; ++t) std::cout << (trace.spike(u, t) ? '|' : '.');
    std::cout << '\n';
  }
}
