#include <set>
#include <stdexcept>

#include "doctest.h"
#include "klab/parallel.hpp"

using namespace klab;

TEST_CASE("seed derivation") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(42, 7) == derive_seed(42, 7));
  std::set<std::uint64_t> seen;
  for (std::uint64_t t = 0; t < 1000; ++t) seen.insert(derive_seed(9, t));
  CHECK(seen.size() == 1000);
}

TEST_CASE("parallel_for fills every slot") {
  for (int workers : {1, 2, 7}) {
    std::vector<int> out(500, 0);
    parallel_for(out.size(), workers, [&](std::size_t i) { out[i] = static_cast<int>(i) * 2; });
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i) * 2);
  }
  CHECK_THROWS_AS(parallel_for(10, 4, [](std::size_t i) { if (i == 3) throw std::runtime_error("x"); }), std::runtime_error);
}
