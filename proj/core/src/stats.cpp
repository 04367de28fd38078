#include "pamaj/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace pamaj {

double hill_exponent(std::span<const std::uint64_t> values, std::size_t top) {
  if (top < 1 || top >= values.size())
    throw std::invalid_argument("hill_exponent needs 1 <= top < sample size");
  std::vector<std::uint64_t> sorted(values.begin(), values.end());
  std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(top + 1),
                    sorted.end(), std::greater<>());
  const double threshold = static_cast<double>(sorted[top]);
  if (threshold <= 0.0) throw std::invalid_argument("hill_exponent needs positive values");
  double sum = 0.0;
  for (std::size_t i = 0; i < top; ++i) sum += std::log(static_cast<double>(sorted[i]) / threshold);
  if (sum <= 0.0) throw std::invalid_argument("degenerate tail: all top values equal");
  return 1.0 + static_cast<double>(top) / sum;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic needs two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    best = std::max(best, std::abs(i / na - j / nb));
  }
  return best;
}

std::uint64_t nearest_rank(std::span<const std::uint64_t> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level outside (0, 1]");
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

}  // namespace pamaj
