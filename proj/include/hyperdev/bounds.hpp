#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/distributions/binomial.hpp>

#include "hyperdev/sampling.hpp"

namespace hyperdev {

// Finite stand-ins for the asymptotic constants in the near-regularity tail
// bounds. The defaults (c1 = k^2, c2 = (10 k!)^(-10^r), kept in log form
// because it underflows double for r >= 3) are NOT canonical -- the source
// material fixes no final constants -- and exist so the formulas are
// evaluable at all.
struct ConstantsPack {
  double c1 = 0.0;
  double log_c2 = 0.0;
  bool defaulted = false;
};

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

inline ConstantsPack default_constants(int k, int r) {
  ConstantsPack p;
  p.c1 = static_cast<double>(k) * k;
  p.log_c2 = -std::pow(10.0, r) * (std::log(10.0) + log_factorial(k));
  p.defaulted = true;
  return p;
}

struct BoundResult {
  double value = 0.0;
  double log_value = 0.0;
  bool valid = false;        // side conditions hold
  double threshold = 0.0;    // smallest a the statement covers
  int argmin_r = 0;          // set by the min-over-r variant
  std::string note;
};

struct NearRegQuery {
  long long N = 0;
  int k = 0, r = 0;
  long long m = 0;
  double a = 0.0;
  double eta = 0.0;
  double delta_r = 0.0;  // max r-set degree
  long long h = 0;
  ConstantsPack constants;
};

namespace detail {

// log of (10 k!)^(10^r) * h * (eta m^{k-1} / N^{k-1})^{r/(r-e)} where e is 1
// for the base bound and 2 for the regular variant. eta = 0 or r <= e makes
// the statement unconditional (threshold 0).
inline double log_validity_threshold(const NearRegQuery& q, int e) {
  if (q.eta <= 0.0 || q.r <= e) return -std::numeric_limits<double>::infinity();
  double exponent = static_cast<double>(q.r) / (q.r - e);
  return std::pow(10.0, q.r) * (std::log(10.0) + log_factorial(q.k)) +
         std::log(static_cast<double>(q.h)) +
         exponent * (std::log(q.eta) + (q.k - e) * (std::log(static_cast<double>(q.m)) -
                                                    std::log(static_cast<double>(q.N))));
}

inline BoundResult nearreg_common(const NearRegQuery& q, int e) {
  if (q.a <= 0) throw config_error("bound: a must be positive");
  if (q.m <= 0 || q.delta_r <= 0) throw config_error("bound: need m > 0 and delta_r > 0");
  BoundResult out;
  double expo = 2.0 / q.r;
  double decay = std::exp(q.constants.log_c2 + expo * std::log(q.a) -
                          std::log(static_cast<double>(q.m)) - expo * std::log(q.delta_r));
  out.log_value = q.constants.c1 * std::log(static_cast<double>(q.N)) - decay;
  out.value = std::exp(out.log_value);
  double log_thr = log_validity_threshold(q, e);
  out.threshold = std::exp(log_thr);
  bool eta_ok = q.eta <= std::pow(3.0, -(q.r - 1));
  out.valid = eta_ok && std::log(q.a) >= log_thr;
  if (q.constants.defaulted) out.note = "default (non-canonical) constants pack";
  return out;
}

}  // namespace detail

// Tail bound N^{c1} exp(-c2 a^{2/r} / (m delta_r^{2/r})) for hypergraphs that
// are near-regular one level below r; valid above the eta-dependent
// deviation threshold.
inline BoundResult nearreg_bound(const NearRegQuery& q) { return detail::nearreg_common(q, 1); }

// Variant for regular hypergraphs: same displayed value, weaker validity
// threshold (m/N enters at power k-2 and the exponent becomes r/(r-2)).
// Requires r >= 3.
inline BoundResult regular_variant_bound(const NearRegQuery& q) {
  if (q.r < 3) throw config_error("regular variant: requires r >= 3");
  return detail::nearreg_common(q, 2);
}

// Evaluates the base bound at every level 1..r and returns the best, since
// the minimum is not always attained at the extremes. Caller supplies the
// per-level max degrees and the near-regularity parameter one level below.
inline BoundResult nearreg_min_over_r(const NearRegQuery& base, const std::vector<double>& delta_by_r,
                                      const std::vector<double>& eta_below_r) {
  BoundResult best;
  best.value = std::numeric_limits<double>::infinity();
  for (int rp = 1; rp <= base.r; ++rp) {
    NearRegQuery q = base;
    q.r = rp;
    q.delta_r = delta_by_r.at(rp);
    q.eta = eta_below_r.at(rp);
    q.constants = default_constants(base.k, rp);
    if (!base.constants.defaulted) q.constants = base.constants;
    BoundResult res = nearreg_bound(q);
    if (res.value < best.value) {
      best = res;
      best.argmin_r = rp;
    }
  }
  return best;
}

// Explicit 3-progression deviation bound (Nm+1) exp(-a / (9m)) and the
// smallest a where it drops below 1.
struct Ap3BoundResult {
  double value = 0.0;
  double a_star = 0.0;
};

inline Ap3BoundResult ap3_explicit_bound(long long N, long long m, double a) {
  if (a < 0) throw config_error("bound: a must be nonnegative");
  if (!is_prime(N)) throw config_error("bound: N must be prime");
  Ap3BoundResult r;
  double logM = std::log(static_cast<double>(N) * m + 1.0);
  r.value = std::exp(logM - a / (9.0 * m));
  r.a_star = 9.0 * m * logM;
  return r;
}

// exp(-a^2 / (2 sum c_i^2)); all-zero increments make the sum degenerate
// (the martingale is constant), reported as an exact 0/1 answer.
inline BoundResult azuma(const std::vector<double>& c, double a) {
  double s2 = 0.0;
  for (double ci : c) {
    if (ci < 0) throw config_error("azuma: increment bounds must be nonnegative");
    s2 += ci * ci;
  }
  BoundResult out;
  out.valid = true;
  if (s2 == 0.0) {
    out.value = a > 0 ? 0.0 : 1.0;
    out.log_value = a > 0 ? -std::numeric_limits<double>::infinity() : 0.0;
    out.note = "degenerate: all increment bounds zero";
    return out;
  }
  out.log_value = -a * a / (2.0 * s2);
  out.value = std::exp(out.log_value);
  return out;
}

// Azuma with truncated increments: adds N * sum_i P(|X_i| > c_i), supplied by
// the caller as a single exceedance sum.
inline BoundResult azuma_truncated(const std::vector<double>& c, double a, double exceedance_sum,
                                   long long N) {
  if (exceedance_sum < 0) throw config_error("azuma: exceedance sum must be nonnegative");
  BoundResult out = azuma(c, a);
  out.value += static_cast<double>(N) * exceedance_sum;
  out.log_value = std::log(out.value);
  if (!out.note.empty()) out.note += "; ";
  out.note += "truncation term added";
  return out;
}

// Exponential rate delta^2 p N / (2 k^2 (1-p)) for the binomial-model
// deviation tail. The named variants fix the denominator the way the
// specialized statements do (2*3^2 = 18, 2*4^2 = 32); both coincide with the
// generic formula at the corresponding k.
enum class RateVariant { generic, triangle_free_k3, sidon_k4 };

inline double pmodel_rate(int k, double delta, double p, long long N,
                          RateVariant variant = RateVariant::generic) {
  if (p <= 0.0 || p >= 1.0) throw config_error("pmodel_rate: p must lie in (0,1)");
  int kk = k;
  if (variant == RateVariant::triangle_free_k3) kk = 3;
  if (variant == RateVariant::sidon_k4) kk = 4;
  return delta * delta * p * static_cast<double>(N) / (2.0 * kk * kk * (1.0 - p));
}

// The asymptotic statement needs delta well inside a window; "well inside"
// is interpreted as a factor rho on both ends.
struct RateWindow {
  double lower = 0.0, upper = 0.0;
  bool ok = false;
};

inline RateWindow pmodel_rate_window(int k, int r, double delta, double p, long long N,
                                     double eta, double delta_r, long long h, double rho = 10.0) {
  RateWindow w;
  double t1 = delta_r * std::pow(static_cast<double>(N) * std::log(static_cast<double>(N)), r / 2.0) /
              (std::pow(p, k - r / 2.0) * static_cast<double>(h));
  double t3 = 1.0 / std::sqrt(p * static_cast<double>(N));
  double lo = std::max(t1, t3);
  if (r >= 2 && eta > 0) {
    double t2 = std::pow(std::pow(eta, r) * std::pow(p, k - r), 1.0 / (r - 1));
    lo = std::max(lo, t2);
  }
  w.lower = lo;
  w.upper = r >= 2 ? std::pow(std::pow(p, k - r) * static_cast<double>(h) /
                                  (std::pow(static_cast<double>(N), r) * delta_r),
                              1.0 / (r - 1))
                   : std::numeric_limits<double>::infinity();
  w.ok = (delta >= rho * w.lower) && (delta * rho <= w.upper);
  return w;
}

// ----- binomial helpers -----

inline double binom_pmf(long long N, double p, long long m) {
  if (m < 0 || m > N) return 0.0;
  boost::math::binomial_distribution<double> dist(static_cast<double>(N), p);
  return boost::math::pdf(dist, static_cast<double>(m));
}

// Upper tail P(X >= m).
inline double binom_tail(long long N, double p, long long m) {
  if (m <= 0) return 1.0;
  if (m > N) return 0.0;
  boost::math::binomial_distribution<double> dist(static_cast<double>(N), p);
  return boost::math::cdf(boost::math::complement(dist, static_cast<double>(m) - 1.0));
}

// Log-scale prediction for P(X >= Np + x sqrt(Npq)): the Gaussian exponent.
inline double stirling_log_tail(long long /*N*/, double /*p*/, double x) { return -x * x / 2.0; }

// ----- exact transfer between the binomial and fixed-size models -----

// P(D(B_p) > a) = sum_m C(N,m) p^m q^{N-m} P(N(B_m) > p^k h + a), evaluated
// with exact rational weights and exhaustive fixed-size laws. Cost is 2^N
// subsets in total, so this is for small N.
inline Rat pmodel_transfer_exact(const Hypergraph& H, const Rat& p, const Rat& a,
                                 long long budget = kDefaultBudget) {
  if (p < 0 || p > 1) throw config_error("transfer: p out of range");
  if (Int(1) << H.N > budget) throw budget_error("transfer: 2^N exceeds budget");
  Rat pk = 1;
  for (int i = 0; i < H.k; ++i) pk *= p;
  Rat cutoff = pk * Rat(H.h()) + a;
  Rat q = Rat(1) - p;
  Rat total = 0;
  for (int m = 0; m <= H.N; ++m) {
    Rat weight = Rat(binom(H.N, m));
    for (int i = 0; i < m; ++i) weight *= p;
    for (int i = 0; i < H.N - m; ++i) weight *= q;
    ExactDistribution dist = exact_distribution(H, m, budget);
    total += weight * dist.tail_above(cutoff);
  }
  return total;
}

// Same mixture with caller-supplied per-m tails (estimated or exact).
inline double pmodel_transfer(long long N, double p, const std::vector<double>& tail_by_m) {
  if (static_cast<long long>(tail_by_m.size()) != N + 1)
    throw config_error("transfer: need a tail for every m in 0..N");
  double total = 0.0;
  for (long long m = 0; m <= N; ++m) total += binom_pmf(N, p, m) * tail_by_m[m];
  return total;
}

}  // namespace hyperdev
