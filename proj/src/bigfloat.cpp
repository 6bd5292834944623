#include "remlab/bigfloat.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>
#include <vector>

#include "remlab/error.hpp"

namespace remlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::InexactCF: return "InexactCF";
    case ErrorKind::InvalidPhi: return "InvalidPhi";
    case ErrorKind::UnboundedQuotients: return "UnboundedQuotients";
    case ErrorKind::DepthTooLarge: return "DepthTooLarge";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::UnresolvedMembership: return "UnresolvedMembership";
  }
  return "Error";
}

const PrecisionPolicy& PrecisionPolicy::standard() {
  static const PrecisionPolicy policy = [] {
    PrecisionPolicy p;
    if (const char* env = std::getenv("REMLAB_MAX_BITS")) {
      char* end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end != env && v >= 64) p.cap_bits = static_cast<Bits>(v);
    }
    return p;
  }();
  return policy;
}

BigFloat::BigFloat(Bits prec) { mpfr_init2(value_, prec); mpfr_set_zero(value_, 1); }

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

BigFloat BigFloat::from_double(double v, Bits prec) {
  BigFloat r(std::max<Bits>(prec, 53));
  mpfr_set_d(r.value_, v, MPFR_RNDN);
  return r;
}

std::string BigFloat::to_string(int digits) const {
  if (mpfr_zero_p(value_)) return "0";
  char* buf = nullptr;
  std::string fmt = "%." + std::to_string(digits - 1) + "Re";
  mpfr_asprintf(&buf, fmt.c_str(), value_);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

int compare(const BigFloat& x, const BigFloat& y) { return mpfr_cmp(x.get(), y.get()); }
int compare(const BigFloat& x, const mpq_class& y) { return mpfr_cmp_q(x.get(), y.get_mpq_t()); }

Enclosure Enclosure::point(const mpz_class& v, Bits prec) {
  Enclosure e(prec);
  mpfr_set_z(e.lo.get(), v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(e.hi.get(), v.get_mpz_t(), MPFR_RNDU);
  return e;
}

Enclosure Enclosure::point(const mpq_class& v, Bits prec) {
  Enclosure e(prec);
  mpfr_set_q(e.lo.get(), v.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(e.hi.get(), v.get_mpq_t(), MPFR_RNDU);
  return e;
}

Enclosure Enclosure::sqrt_of(const mpz_class& v, Bits prec) {
  Enclosure e(prec);
  // Load v with directed rounding at the output precision, then take roots.
  BigFloat lo(prec), hi(prec);
  mpfr_set_z(lo.get(), v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi.get(), v.get_mpz_t(), MPFR_RNDU);
  mpfr_sqrt(e.lo.get(), lo.get(), MPFR_RNDD);
  mpfr_sqrt(e.hi.get(), hi.get(), MPFR_RNDU);
  return e;
}

Enclosure Enclosure::unit(Bits prec) {
  Enclosure e(prec);
  mpfr_set_ui(e.lo.get(), 0, MPFR_RNDD);
  mpfr_set_ui(e.hi.get(), 1, MPFR_RNDU);
  return e;
}

BigFloat Enclosure::width() const {
  BigFloat w(precision());
  mpfr_sub(w.get(), hi.get(), lo.get(), MPFR_RNDU);
  return w;
}

BigFloat Enclosure::midpoint() const {
  BigFloat m(precision() + 1);
  mpfr_add(m.get(), lo.get(), hi.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return m;
}

BigFloat Enclosure::radius() const {
  BigFloat m = midpoint();
  BigFloat a(precision()), b(precision());
  mpfr_sub(a.get(), hi.get(), m.get(), MPFR_RNDU);
  mpfr_sub(b.get(), m.get(), lo.get(), MPFR_RNDU);
  return compare(a, b) >= 0 ? a : b;
}

namespace {

Bits joint(const Enclosure& x, const Enclosure& y) { return std::max(x.precision(), y.precision()); }

}  // namespace

Enclosure operator+(const Enclosure& x, const Enclosure& y) {
  Enclosure r(joint(x, y));
  mpfr_add(r.lo.get(), x.lo.get(), y.lo.get(), MPFR_RNDD);
  mpfr_add(r.hi.get(), x.hi.get(), y.hi.get(), MPFR_RNDU);
  return r;
}

Enclosure operator-(const Enclosure& x, const Enclosure& y) {
  Enclosure r(joint(x, y));
  mpfr_sub(r.lo.get(), x.lo.get(), y.hi.get(), MPFR_RNDD);
  mpfr_sub(r.hi.get(), x.hi.get(), y.lo.get(), MPFR_RNDU);
  return r;
}

Enclosure operator-(const Enclosure& x) {
  Enclosure r(x.precision());
  mpfr_neg(r.lo.get(), x.hi.get(), MPFR_RNDD);
  mpfr_neg(r.hi.get(), x.lo.get(), MPFR_RNDU);
  return r;
}

Enclosure operator*(const Enclosure& x, const Enclosure& y) {
  const Bits p = joint(x, y);
  Enclosure r(p);
  BigFloat c[4] = {BigFloat(p), BigFloat(p), BigFloat(p), BigFloat(p)};
  const mpfr_srcptr xs[2] = {x.lo.get(), x.hi.get()};
  const mpfr_srcptr ys[2] = {y.lo.get(), y.hi.get()};
  // Lower bound: min of down-rounded corner products; upper: max of up-rounded.
  for (int i = 0; i < 4; ++i) mpfr_mul(c[i].get(), xs[i / 2], ys[i % 2], MPFR_RNDD);
  mpfr_set(r.lo.get(), c[0].get(), MPFR_RNDD);
  for (int i = 1; i < 4; ++i) mpfr_min(r.lo.get(), r.lo.get(), c[i].get(), MPFR_RNDD);
  for (int i = 0; i < 4; ++i) mpfr_mul(c[i].get(), xs[i / 2], ys[i % 2], MPFR_RNDU);
  mpfr_set(r.hi.get(), c[0].get(), MPFR_RNDU);
  for (int i = 1; i < 4; ++i) mpfr_max(r.hi.get(), r.hi.get(), c[i].get(), MPFR_RNDU);
  return r;
}

Enclosure operator/(const Enclosure& x, const Enclosure& y) {
  const Bits p = joint(x, y);
  Enclosure r(p);
  BigFloat c[4] = {BigFloat(p), BigFloat(p), BigFloat(p), BigFloat(p)};
  const mpfr_srcptr xs[2] = {x.lo.get(), x.hi.get()};
  const mpfr_srcptr ys[2] = {y.lo.get(), y.hi.get()};
  for (int i = 0; i < 4; ++i) mpfr_div(c[i].get(), xs[i / 2], ys[i % 2], MPFR_RNDD);
  mpfr_set(r.lo.get(), c[0].get(), MPFR_RNDD);
  for (int i = 1; i < 4; ++i) mpfr_min(r.lo.get(), r.lo.get(), c[i].get(), MPFR_RNDD);
  for (int i = 0; i < 4; ++i) mpfr_div(c[i].get(), xs[i / 2], ys[i % 2], MPFR_RNDU);
  mpfr_set(r.hi.get(), c[0].get(), MPFR_RNDU);
  for (int i = 1; i < 4; ++i) mpfr_max(r.hi.get(), r.hi.get(), c[i].get(), MPFR_RNDU);
  return r;
}

Enclosure operator*(const Enclosure& x, const mpz_class& m) {
  Enclosure r(x.precision());
  if (sgn(m) >= 0) {
    mpfr_mul_z(r.lo.get(), x.lo.get(), m.get_mpz_t(), MPFR_RNDD);
    mpfr_mul_z(r.hi.get(), x.hi.get(), m.get_mpz_t(), MPFR_RNDU);
  } else {
    mpfr_mul_z(r.lo.get(), x.hi.get(), m.get_mpz_t(), MPFR_RNDD);
    mpfr_mul_z(r.hi.get(), x.lo.get(), m.get_mpz_t(), MPFR_RNDU);
  }
  return r;
}

Enclosure operator/(const Enclosure& x, const mpz_class& m) {
  Enclosure r(x.precision());
  if (sgn(m) > 0) {
    mpfr_div_z(r.lo.get(), x.lo.get(), m.get_mpz_t(), MPFR_RNDD);
    mpfr_div_z(r.hi.get(), x.hi.get(), m.get_mpz_t(), MPFR_RNDU);
  } else {
    mpfr_div_z(r.lo.get(), x.hi.get(), m.get_mpz_t(), MPFR_RNDD);
    mpfr_div_z(r.hi.get(), x.lo.get(), m.get_mpz_t(), MPFR_RNDU);
  }
  return r;
}

Enclosure operator+(const Enclosure& x, const mpz_class& m) {
  Enclosure r(x.precision());
  mpfr_add_z(r.lo.get(), x.lo.get(), m.get_mpz_t(), MPFR_RNDD);
  mpfr_add_z(r.hi.get(), x.hi.get(), m.get_mpz_t(), MPFR_RNDU);
  return r;
}

Enclosure abs(const Enclosure& x) {
  if (x.lo.sign() >= 0) return x;
  if (x.hi.sign() <= 0) return -x;
  Enclosure r(x.precision());
  mpfr_set_zero(r.lo.get(), 1);
  mpfr_neg(r.hi.get(), x.lo.get(), MPFR_RNDU);
  mpfr_max(r.hi.get(), r.hi.get(), x.hi.get(), MPFR_RNDU);
  return r;
}

Enclosure pow(const Enclosure& x, unsigned long n) {
  Enclosure r(x.precision());
  mpfr_pow_ui(r.lo.get(), x.lo.get(), n, MPFR_RNDD);
  mpfr_pow_ui(r.hi.get(), x.hi.get(), n, MPFR_RNDU);
  return r;
}

bool common_floor(const Enclosure& x, mpz_class& out) {
  if (!mpfr_number_p(x.lo.get()) || !mpfr_number_p(x.hi.get())) return false;
  mpz_class a, b;
  mpfr_get_z(a.get_mpz_t(), x.lo.get(), MPFR_RNDD);
  mpfr_get_z(b.get_mpz_t(), x.hi.get(), MPFR_RNDD);
  if (a != b) return false;
  out = a;
  return true;
}

}  // namespace remlab
