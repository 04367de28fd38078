#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pamaj/rng.hpp"
#include "pamaj/stats.hpp"

using namespace pamaj;

TEST_CASE("hill_exponent") {
  const std::vector<std::uint64_t> small{1, 2, 4, 8};
  CHECK(hill_exponent(small, 2) == doctest::Approx(1.0 + 2.0 / (3.0 * std::log(2.0))));
  CHECK(hill_exponent(small, 1) == doctest::Approx(1.0 + 1.0 / std::log(2.0)));

  // Pareto with P(X > x) = x^-2, i.e. density exponent 3.
  Rng rng(5);
  std::vector<std::uint64_t> sample(200000);
  for (auto& x : sample) x = static_cast<std::uint64_t>(std::llround(1000.0 / std::sqrt(1.0 - rng.uniform())));
  CHECK(hill_exponent(sample, 4000) == doctest::Approx(3.0).epsilon(0.05));

  CHECK_THROWS_AS(hill_exponent(small, 0), std::invalid_argument);
  CHECK_THROWS_AS(hill_exponent(small, 4), std::invalid_argument);
  const std::vector<std::uint64_t> flat{3, 3, 3};
  CHECK_THROWS_AS(hill_exponent(flat, 2), std::invalid_argument);
  const std::vector<std::uint64_t> zeros{0, 0, 5};
  CHECK_THROWS_AS(hill_exponent(zeros, 1), std::invalid_argument);
}

TEST_CASE("ks_statistic") {
  CHECK(ks_statistic({1, 2, 3}, {3, 2, 1}) == 0.0);
  CHECK(ks_statistic({1, 2}, {5, 6, 7}) == 1.0);
  CHECK(ks_statistic({1, 2, 3}, {2, 3, 4}) == doctest::Approx(1.0 / 3.0));
  CHECK(ks_statistic({1, 1, 1, 2}, {1, 2, 2, 2}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ks_statistic({}, {1.0}), std::invalid_argument);
}

TEST_CASE("nearest_rank") {
  const std::vector<std::uint64_t> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK(nearest_rank(v, 0.5) == 5);
  CHECK(nearest_rank(v, 0.95) == 10);
  CHECK(nearest_rank(v, 0.1) == 1);
  CHECK(nearest_rank(v, 0.11) == 2);
  CHECK(nearest_rank(v, 1.0) == 10);
  const std::vector<std::uint64_t> one{7};
  CHECK(nearest_rank(one, 0.5) == 7);
  CHECK(nearest_rank(one, 0.95) == 7);
  CHECK_THROWS_AS(nearest_rank(v, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(nearest_rank(std::vector<std::uint64_t>{}, 0.5), std::invalid_argument);
}
