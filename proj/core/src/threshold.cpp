#include "pamaj/threshold.hpp"

#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pamaj {

namespace {

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("probability outside [0, 1]: " + std::to_string(p));
}

void check_odd_degree(int d) {
  if (d < 5 || d % 2 == 0)
    throw std::invalid_argument("d must be odd and at least 5, got " + std::to_string(d));
}

// log(k!) - [(k + 1/2) log k - k + log sqrt(2 pi)]
double stirlerr(double k) {
  constexpr double s0 = 1.0 / 12;
  constexpr double s1 = 1.0 / 360;
  constexpr double s2 = 1.0 / 1260;
  constexpr double s3 = 1.0 / 1680;
  constexpr double s4 = 1.0 / 1188;
  if (k <= 15.0) {
    const long double kl = k;
    const long double ln_sqrt_2pi = 0.918938533204672741780329736405617639861L;
    return static_cast<double>(std::lgamma(kl + 1.0L) - (kl + 0.5L) * std::log(kl) + kl -
                               ln_sqrt_2pi);
  }
  const double kk = k * k;
  if (k > 500) return (s0 - s1 / kk) / k;
  if (k > 80) return (s0 - (s1 - s2 / kk) / kk) / k;
  if (k > 35) return (s0 - (s1 - (s2 - s3 / kk) / kk) / kk) / k;
  return (s0 - (s1 - (s2 - (s3 - s4 / kk) / kk) / kk) / kk) / k;
}

// Deviance term x log(x/np) + np - x, with a series near x == np.
double bd0(double x, double np) {
  if (std::abs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    if (std::abs(s) < DBL_MIN) return s;
    double ej = 2 * x * v;
    v *= v;
    for (int j = 1; j < 1000; ++j) {
      ej *= v;
      const double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
  }
  return x * std::log(x / np) + np - x;
}

double pmf_saddle(double n, double k, double p, double q) {
  if (k == 0) {
    const double lc = p < 0.1 ? -bd0(n, n * q) - n * p : n * std::log(q);
    return std::exp(lc);
  }
  if (k == n) {
    const double lc = q < 0.1 ? -bd0(n, n * p) - n * q : n * std::log(p);
    return std::exp(lc);
  }
  const double lc =
      stirlerr(n) - stirlerr(k) - stirlerr(n - k) - bd0(k, n * p) - bd0(n - k, n * q);
  const double lf = std::log(2 * std::numbers::pi) + std::log(k) + std::log1p(-k / n);
  return std::exp(lc - 0.5 * lf);
}

double pmf_direct(std::uint64_t n, std::uint64_t k, double p, double q) {
  double c = 1.0;
  const std::uint64_t r = k < n - k ? k : n - k;
  for (std::uint64_t i = 1; i <= r; ++i) c = c * static_cast<double>(n - r + i) / i;
  return c * std::pow(p, static_cast<double>(k)) * std::pow(q, static_cast<double>(n - k));
}

constexpr std::uint64_t kDirectLimit = 64;

}  // namespace

double binom_pmf(std::uint64_t n, std::uint64_t k, double p) {
  check_probability(p);
  if (k > n) return 0.0;
  const double q = 1.0 - p;
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (q == 0.0) return k == n ? 1.0 : 0.0;
  if (n <= kDirectLimit) return pmf_direct(n, k, p, q);
  return pmf_saddle(static_cast<double>(n), static_cast<double>(k), p, q);
}

double binom_tail(std::uint64_t n, std::int64_t j, double p) {
  check_probability(p);
  if (j <= 0) return 1.0;
  if (static_cast<std::uint64_t>(j) > n) return 0.0;
  const double q = 1.0 - p;
  if (p == 0.0) return 0.0;
  if (q == 0.0) return 1.0;

  double sum = 0.0;
  double carry = 0.0;
  for (std::uint64_t k = static_cast<std::uint64_t>(j); k <= n; ++k) {
    const double term = n <= kDirectLimit ? pmf_direct(n, k, p, q)
                                          : pmf_saddle(static_cast<double>(n),
                                                       static_cast<double>(k), p, q);
    const double next = sum + term;
    carry += std::abs(sum) >= std::abs(term) ? (sum - next) + term : (term - next) + sum;
    sum = next;
  }
  const double result = sum + carry;
  return result > 1.0 ? 1.0 : result;
}

MajorityMap::MajorityMap(int d) : d_(d) { check_odd_degree(d); }

double MajorityMap::operator()(double x) const {
  const auto n = static_cast<std::uint64_t>(d_ - 1);
  return binom_tail(n, static_cast<std::int64_t>(n / 2), x);
}

double alpha_star(int d, double tolerance) {
  const MajorityMap f(d);
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  double lo = 1e-6;
  double hi = 0.5 - 1e-6;
  // f(x) - x is negative just above 0 and positive just below 1/2.
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (f(mid) - mid < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

int effective_d(int m, int k) {
  if (k < 1 || k % 2 == 0) throw std::invalid_argument("k must be odd, got " + std::to_string(k));
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  const int degree = m % 2 == 1 ? m : m - 1;
  return degree < k ? degree : k;
}

double f_envelope(int n, double p) {
  if (n <= 3) throw std::invalid_argument("f_envelope needs n > 3, got " + std::to_string(n));
  check_probability(p);
  const double base = (1.0 + 1.0 / std::sqrt(static_cast<double>(n - 1))) * 2.0;
  return std::pow(base, 2.0 / (n - 3)) * 4.0 * p * (1.0 - p);
}

double tree_root_red_bound(int d, double p, int h) {
  if (h < 0) throw std::invalid_argument("depth must be nonnegative");
  const double f = f_envelope(d, p);
  const double exponent = std::pow((d - 1) / 2.0, h);
  return 0.25 * std::pow(f, exponent);
}

double tree_recursion_exact(int d, double p, int h) {
  if (h < 0) throw std::invalid_argument("depth must be nonnegative");
  const MajorityMap f(d);
  check_probability(p);
  double x = p;
  for (int s = 0; s < h; ++s) x = f(x);
  return x;
}

bool binprop_check(std::uint64_t N, double p) {
  if (N < 1) throw std::invalid_argument("N must be at least 1");
  if (!(p > 0.0 && p < 0.5)) throw std::invalid_argument("binprop_check needs 0 < p < 1/2");
  const auto n = static_cast<std::int64_t>(N);
  return binom_tail(2 * N, n, p) >= binom_tail(2 * N + 2, n + 1, p);
}

ConvergenceSchedule schedule(int d, double epsilon, std::uint64_t t) {
  check_odd_degree(d);
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");

  // t >= d^d, compared in integers; d^d beyond 64 bits means t is too small.
  std::uint64_t dd = 1;
  for (int i = 0; i < d; ++i) {
    if (dd > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(d))
      throw std::invalid_argument("t is smaller than d^d");
    dd *= static_cast<std::uint64_t>(d);
  }
  if (t < dd)
    throw std::invalid_argument("t=" + std::to_string(t) + " is smaller than d^d=" +
                                std::to_string(dd));

  const double ln_d = std::log(static_cast<double>(d));
  ConvergenceSchedule s;
  s.d = d;
  s.epsilon = epsilon;
  s.t = t;
  s.B = (1.0 + epsilon) / (std::log((d - 1) / 2.0) / ln_d);
  if (t == dd) {
    s.tau_star = 0.0;
  } else {
    const double inner = std::log(static_cast<double>(t)) / ln_d;
    const double outer = std::log(inner) / ln_d;
    s.tau_star = s.B * (outer > 0.0 ? outer : 0.0);
  }
  return s;
}

}  // namespace pamaj
