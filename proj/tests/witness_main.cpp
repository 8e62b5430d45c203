// Prints the first descending-order witness as an instance file. Used to
// (re)generate tests/fixtures/desc_suboptimal_witness.json.

#include <cstdlib>
#include <iostream>

#include "eolo/ingestion.hpp"
#include "witness_search.hpp"

int main(int argc, char** argv) {
  const std::uint64_t first = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 0;
  const auto w = eolo::oracle::find_descending_witness(first, 10'000);
  if (!w) {
    std::cerr << "no witness found\n";
    return 1;
  }
  std::cerr << "seed " << w->seed << ": desc " << w->descending_cost << " > optimal "
            << w->optimal_cost << "\n";
  std::cout << eolo::format_instance(w->instance);
  return 0;
}
