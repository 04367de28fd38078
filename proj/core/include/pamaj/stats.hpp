#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pamaj {

/// Hill estimate of the density exponent tau of a power-law tail
/// (P(X = x) ~ x^-tau) from the `top` largest values: 1 + top / sum log(x_i / x_top).
/// Requires 1 <= top < values.size().
double hill_exponent(std::span<const std::uint64_t> values, std::size_t top);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Nearest-rank quantile of a sorted sample: element ceil(q * n) - 1 (q in (0, 1]).
std::uint64_t nearest_rank(std::span<const std::uint64_t> sorted, double q);

}  // namespace pamaj
