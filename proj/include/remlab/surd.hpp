#pragma once

// Exact arithmetic in real quadratic fields, plus finite sums of square roots
// with distinct squarefree radicands (needed when a point mixes, say, sqrt(2)
// and sqrt(3) coefficients).

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "remlab/bigfloat.hpp"

namespace remlab {

/// Splits v = s^2 * r with r squarefree. Trial division up to 10^6, then a
/// probabilistic check on the cofactor; throws InvalidSpec when the cofactor
/// cannot be certified squarefree.
std::pair<mpz_class, mpz_class> squarefree_split(const mpz_class& v);

/// Value (a + b*sqrt(d)) / c, canonical: d squarefree (d = 0 iff b = 0),
/// c > 0, gcd(a, b, c) = 1.
class QuadraticSurd {
 public:
  QuadraticSurd() : a_(0), b_(0), c_(1), d_(0) {}
  QuadraticSurd(const mpz_class& a, const mpz_class& b, const mpz_class& c, const mpz_class& d);

  static QuadraticSurd integer(const mpz_class& v);
  static QuadraticSurd rational(const mpq_class& v);
  static QuadraticSurd sqrt(const mpz_class& v) { return {0, 1, 1, v}; }

  const mpz_class& a() const { return a_; }
  const mpz_class& b() const { return b_; }
  const mpz_class& c() const { return c_; }
  const mpz_class& d() const { return d_; }

  bool is_rational() const { return b_ == 0; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }
  mpq_class to_rational() const;  // requires is_rational()

  int sign() const;
  mpz_class floor() const;
  QuadraticSurd frac() const { return *this - QuadraticSurd::integer(floor()); }
  QuadraticSurd conjugate() const;
  QuadraticSurd abs() const { return sign() < 0 ? -*this : *this; }

  /// Enclosure with relative error ~2^-prec; never subtracts nearly equal
  /// quantities (cancelling forms are rationalized first).
  Enclosure enclose(Bits prec) const;

  /// Canonical text "(a+b*sqrt(d))/c".
  std::string str() const;

  QuadraticSurd operator-() const;
  friend QuadraticSurd operator+(const QuadraticSurd& x, const QuadraticSurd& y);
  friend QuadraticSurd operator-(const QuadraticSurd& x, const QuadraticSurd& y);
  friend QuadraticSurd operator*(const QuadraticSurd& x, const QuadraticSurd& y);
  friend QuadraticSurd operator/(const QuadraticSurd& x, const QuadraticSurd& y);
  friend QuadraticSurd operator*(const QuadraticSurd& x, const mpz_class& m);

  friend bool operator==(const QuadraticSurd& x, const QuadraticSurd& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.d_ == y.d_;
  }
  friend std::strong_ordering operator<=>(const QuadraticSurd& x, const QuadraticSurd& y);

 private:
  friend class SurdSum;
  struct Canonical {};
  // d already squarefree; only sign/gcd normalization.
  QuadraticSurd(Canonical, mpz_class a, mpz_class b, mpz_class c, mpz_class d);
  void normalize();

  mpz_class a_, b_, c_, d_;
};

/// (a + sum_j b_j sqrt(d_j)) / c with distinct squarefree d_j > 1. The square
/// roots of distinct squarefree integers are linearly independent over Q, so
/// the canonical form is zero iff the value is zero.
class SurdSum {
 public:
  SurdSum() : a_(0), c_(1) {}
  SurdSum(const QuadraticSurd& q);  // NOLINT(google-explicit-constructor)
  explicit SurdSum(const mpq_class& q);

  bool is_zero() const { return a_ == 0 && roots_.empty(); }
  bool is_rational() const { return roots_.empty(); }
  std::optional<QuadraticSurd> as_quadratic() const;
  std::size_t root_count() const { return roots_.size(); }

  int sign(const PrecisionPolicy& policy = PrecisionPolicy::standard()) const;
  mpz_class floor(const PrecisionPolicy& policy = PrecisionPolicy::standard()) const;
  SurdSum frac(const PrecisionPolicy& policy = PrecisionPolicy::standard()) const;
  /// Enclosure with absolute error ~2^-prec.
  Enclosure enclose(Bits prec) const;

  std::string str() const;

  SurdSum operator-() const;
  friend SurdSum operator+(const SurdSum& x, const SurdSum& y);
  friend SurdSum operator-(const SurdSum& x, const SurdSum& y) { return x + (-y); }
  friend SurdSum operator*(const SurdSum& x, const mpz_class& m);
  friend bool operator==(const SurdSum& x, const SurdSum& y) {
    return x.a_ == y.a_ && x.c_ == y.c_ && x.roots_ == y.roots_;
  }

 private:
  void normalize();
  Bits magnitude_bits() const;

  mpz_class a_;
  std::vector<std::pair<mpz_class, mpz_class>> roots_;  // (d, b), ascending d
  mpz_class c_;
};

}  // namespace remlab
