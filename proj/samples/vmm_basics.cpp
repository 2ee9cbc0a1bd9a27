// Train a binary VMM on a repeating pattern and query it.
#include <iostream>

#include "icn/vmm.hpp"

int main() {
  icn::VmmModel model(5);
  const auto pattern = icn::bits_from_string("10010");
  for (int i = 0; i < 100; ++i) model.update(pattern);

  std::cout << "P(1 | \"1001\") = " << model.probability(1, icn::bits_from_string("1001")) << '\n';
  std::cout << "P(\"10010\")    = " << model.sequence_probability(pattern) << '\n';
  std::cout << "best 5-tuple   = " << icn::to_string(model.best_pattern(5)) << '\n';
  std::cout << "\ncontext table:\n";
  model.dump(std::cout);
}
