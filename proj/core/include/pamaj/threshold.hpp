#pragma once

#include <cstdint>

namespace pamaj {

/// Pr(Bin(n, p) >= j), summed term by term with Neumaier compensation.
/// Terms come from direct products for n <= 64 and from the saddle-point
/// (deviance) form of the log-pmf otherwise, one exp per term.
/// j <= 0 gives 1, j > n gives 0. Throws std::invalid_argument if p is not
/// in [0, 1].
double binom_tail(std::uint64_t n, std::int64_t j, double p);

/// Single binomial pmf term, same evaluation path as binom_tail.
double binom_pmf(std::uint64_t n, std::uint64_t k, double p);

/// The majority map x -> Pr(Bin(d-1, x) >= (d-1)/2) for odd d >= 5.
class MajorityMap {
 public:
  explicit MajorityMap(int d);

  int d() const { return d_; }
  double operator()(double x) const;

 private:
  int d_;
};

/// Smallest positive fixed point of the majority map, i.e. the root of
/// Pr(Bin(d-1, x) >= (d-1)/2) - x in (0, 1/2). Bisection on
/// [1e-6, 1/2 - 1e-6] until the bracket is narrower than `tolerance`.
/// d must be odd and >= 5.
double alpha_star(int d, double tolerance = 1e-9);

/// d = min(m, k) for odd m, min(m-1, k) for even m. k must be odd.
int effective_d(int m, int k);

/// [(1 + 1/sqrt(n-1)) * 2]^(2/(n-3)) * 4p(1-p), defined for n > 3.
double f_envelope(int n, double p);

/// (1/4) * f_envelope(d, p)^(((d-1)/2)^h). Only a bound on the root's red
/// probability when f_envelope(d, p) < 1; returned regardless.
double tree_root_red_bound(int d, double p, int h);

/// p_h for p_0 = p, p_{s+1} = Pr(Bin(d-1, p_s) >= (d-1)/2): the red
/// probability of a tree root when every vertex polls its d-1 children and
/// treats its parent as red.
double tree_recursion_exact(int d, double p, int h);

/// Whether Pr(Bin(2N, p) >= N) >= Pr(Bin(2N+2, p) >= N+1). Requires N >= 1 and
/// 0 < p < 1/2.
bool binprop_check(std::uint64_t N, double p);

struct ConvergenceSchedule {
  int d = 5;
  double epsilon = 0.0;
  double B = 0.0;         // (1 + epsilon) / log_d((d-1)/2)
  double tau_star = 0.0;  // B * log_d(log_d t)
  std::uint64_t t = 0;
};

/// Requires d odd >= 5, epsilon > 0 and t >= d^d.
ConvergenceSchedule schedule(int d, double epsilon, std::uint64_t t);

inline double tau_star(int d, double epsilon, std::uint64_t t) {
  return schedule(d, epsilon, t).tau_star;
}

}  // namespace pamaj
