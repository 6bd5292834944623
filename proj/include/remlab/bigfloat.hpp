#pragma once

// Thin RAII layer over MPFR plus closed-interval enclosures with directed
// rounding. Every Enclosure [lo, hi] is guaranteed to contain the value it
// describes; operations round lo down and hi up.

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace remlab {

using Bits = mpfr_prec_t;

/// Precision escalation schedule shared by every certified computation.
struct PrecisionPolicy {
  Bits start_bits = 128;
  Bits cap_bits = 16384;

  /// Default policy; REMLAB_MAX_BITS overrides the cap.
  static const PrecisionPolicy& standard();
};

class BigFloat {
 public:
  explicit BigFloat(Bits prec = 128);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  static BigFloat from_double(double v, Bits prec = 128);

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  Bits precision() const { return mpfr_get_prec(value_); }

  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(value_, rnd); }
  /// Scientific notation with `digits` significant digits.
  std::string to_string(int digits = 17) const;

  int sign() const { return mpfr_sgn(value_); }

 private:
  mpfr_t value_;
};

int compare(const BigFloat& x, const BigFloat& y);
int compare(const BigFloat& x, const mpq_class& y);

struct Enclosure {
  BigFloat lo;
  BigFloat hi;

  explicit Enclosure(Bits prec = 128) : lo(prec), hi(prec) {}

  static Enclosure point(const mpz_class& v, Bits prec);
  static Enclosure point(const mpq_class& v, Bits prec);
  /// [lo, hi] around sqrt(v), v >= 0.
  static Enclosure sqrt_of(const mpz_class& v, Bits prec);
  static Enclosure unit(Bits prec);  // [0, 1]

  Bits precision() const { return lo.precision(); }
  BigFloat width() const;   // rounded up
  BigFloat midpoint() const;
  /// max(hi - mid, mid - lo), rounded up.
  BigFloat radius() const;

  bool strictly_below(const Enclosure& other) const { return compare(hi, other.lo) < 0; }
  bool contains_zero() const { return lo.sign() <= 0 && hi.sign() >= 0; }
};

Enclosure operator+(const Enclosure& x, const Enclosure& y);
Enclosure operator-(const Enclosure& x, const Enclosure& y);
Enclosure operator-(const Enclosure& x);
Enclosure operator*(const Enclosure& x, const Enclosure& y);
Enclosure operator/(const Enclosure& x, const Enclosure& y);  // y must exclude 0
Enclosure operator*(const Enclosure& x, const mpz_class& m);
Enclosure operator/(const Enclosure& x, const mpz_class& m);   // m != 0
Enclosure operator+(const Enclosure& x, const mpz_class& m);
Enclosure abs(const Enclosure& x);
Enclosure pow(const Enclosure& x, unsigned long n);  // x >= 0

/// Floor of every point in the enclosure, or nullopt-like flag when the
/// enclosure straddles an integer.
bool common_floor(const Enclosure& x, mpz_class& out);

}  // namespace remlab
