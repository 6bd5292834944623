#pragma once

// Independent reference computations for tests: integer square roots,
// scaled-integer continued fractions and brute-force scans. Nothing here
// calls the library's arithmetic.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <vector>

namespace oracle {

inline mpz_class isqrt(const mpz_class& v) {
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

/// sign(A + B sqrt(d)), d >= 0.
inline int sign_surd(const mpz_class& A, const mpz_class& B, const mpz_class& d) {
  const int sa = sgn(A), sb = d == 0 ? 0 : sgn(B);
  if (sa >= 0 && sb >= 0) return sa + sb > 0 ? 1 : 0;
  if (sa <= 0 && sb <= 0) return -1;
  const mpz_class lhs = A * A, rhs = B * B * d;
  if (lhs == rhs) return 0;
  // The term with the larger square wins.
  return (lhs > rhs) == (sa > 0) ? 1 : -1;
}

/// floor((a + b sqrt(d)) / c), c > 0.
inline mpz_class floor_surd(const mpz_class& a, const mpz_class& b, const mpz_class& c, const mpz_class& d) {
  const mpz_class sq = b * b * d;
  mpz_class t = isqrt(sq);
  if (b < 0) t = -(t * t == sq ? t : t + 1);
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), mpz_class(a + t).get_mpz_t(), c.get_mpz_t());
  return q;
}

/// Alpha = (a + b sqrt(d)) / c with helpers for {m alpha}.
struct Surd {
  mpz_class a, b, c, d;

  mpz_class floor_mult(const mpz_class& m) const { return floor_surd(m * a, m * b, c, d); }
  /// sign({m alpha} - p/q)
  int cmp_frac(const mpz_class& m, const mpq_class& r) const {
    const mpz_class f = floor_mult(m);
    // (m a - f c) + m b sqrt d  vs  r c
    const mpz_class A = (m * a - f * c) * r.get_den() - r.get_num() * c;
    return sign_surd(A, m * b * r.get_den(), d);
  }
  /// sign({m alpha} - {k alpha})
  int cmp_mult(const mpz_class& m, const mpz_class& k) const {
    const mpz_class A = (m - k) * a - (floor_mult(m) - floor_mult(k)) * c;
    return sign_surd(A, (m - k) * b, d);
  }
  /// sign(||m alpha|| - ||k alpha||)
  int cmp_dist(const mpz_class& m, const mpz_class& k) const {
    // ||x|| is {x} below 1/2 and 1 - {x} above; both sides become A + B sqrt(d) over c.
    mpz_class A = 0, B = 0;
    auto add = [&](const mpz_class& mult, int sign) {
      mpz_class u = mult * a - floor_mult(mult) * c, v = mult * b;
      if (cmp_frac(mult, mpq_class(1, 2)) >= 0) {
        u = c - u;
        v = -v;
      }
      A += sign * u;
      B += sign * v;
    };
    add(m, 1);
    add(k, -1);
    return sign_surd(A, B, d);
  }
  /// floor(2^bits {m alpha})
  mpz_class scaled_frac(const mpz_class& m, unsigned bits) const {
    const mpz_class s = mpz_class(1) << bits;
    return floor_surd(s * (m * a - floor_mult(m) * c), s * m * b, c, d);
  }
  double approx(const mpz_class& m) const {
    return scaled_frac(m, 60).get_d() / 1152921504606846976.0;
  }
};

/// Leading partial quotients of a real x with lo <= x < lo + 2^-bits
/// (lo = num / 2^bits): those shared by both interval ends.
inline std::vector<mpz_class> cf_of_interval(mpz_class lo_num, const mpz_class& den) {
  mpz_class p1 = lo_num, q1 = den, p2 = lo_num + 1, q2 = den;
  std::vector<mpz_class> out;
  while (q1 != 0 && q2 != 0) {
    mpz_class a1, a2;
    mpz_fdiv_q(a1.get_mpz_t(), p1.get_mpz_t(), q1.get_mpz_t());
    mpz_fdiv_q(a2.get_mpz_t(), p2.get_mpz_t(), q2.get_mpz_t());
    if (a1 != a2) break;
    out.push_back(a1);
    mpz_class r1 = p1 - a1 * q1, r2 = p2 - a2 * q2;
    p1 = q1;
    q1 = r1;
    p2 = q2;
    q2 = r2;
  }
  return out;
}

/// Half-open [lo, hi) on a sorted candidate axis, with "t+" endpoints.
struct Endpoint {
  mpq_class t;
  bool plus = false;
};

inline bool ep_less(const Endpoint& x, const Endpoint& y) { return x.t < y.t || (x.t == y.t && !x.plus && y.plus); }

/// Extreme discrepancy by trying every pair of candidate endpoints.
inline mpq_class extreme_brute(std::vector<mpq_class> xs) {
  for (auto& x : xs) x.canonicalize();
  std::vector<Endpoint> eps{{0, false}, {0, true}, {1, false}};
  for (const auto& x : xs) {
    eps.push_back({x, false});
    eps.push_back({x, true});
  }
  const mpq_class N = static_cast<unsigned long>(xs.size());
  mpq_class best = 0;
  for (const auto& lo : eps) {
    for (const auto& hi : eps) {
      if (!ep_less(lo, hi) || hi.t > 1 || (hi.t == 1 && hi.plus)) continue;
      long count = 0;
      for (const auto& x : xs) {
        const Endpoint p{x, false};
        if (!ep_less(p, lo) && ep_less(p, hi)) ++count;
      }
      mpq_class v = mpq_class(count) / N - (hi.t - lo.t);
      if (v < 0) v = -v;
      best = std::max(best, v);
    }
  }
  best.canonicalize();
  return best;
}

/// Longest runs of true / false in a boolean pattern.
inline std::pair<std::uint64_t, std::uint64_t> longest_runs(const std::vector<bool>& v) {
  std::uint64_t in = 0, out = 0, cur = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    cur = (i > 0 && v[i] == v[i - 1]) ? cur + 1 : 1;
    (v[i] ? in : out) = std::max(v[i] ? in : out, cur);
  }
  return {in, out};
}

}  // namespace oracle
