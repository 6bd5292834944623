#include "remlab/certified.hpp"

#include <algorithm>

#include "remlab/error.hpp"

namespace remlab {

CertifiedValue CertifiedValue::from_enclosure(const Enclosure& e) {
  return CertifiedValue{e.midpoint(), e.radius(), e.precision()};
}

std::string CertifiedValue::str() const {
  return midpoint.to_string(17) + " +/- " + radius.to_string(3);
}

// --- TrackedReal -----------------------------------------------------------

TrackedReal::TrackedReal(const SurdSum& exact, const PrecisionPolicy& policy)
    : exact_(exact), cached_(exact.enclose(policy.start_bits)) {}

TrackedReal TrackedReal::approximate(Refiner refine, const PrecisionPolicy& policy) {
  TrackedReal r;
  r.exact_.reset();
  r.cached_ = refine(policy.start_bits);
  r.refiner_ = std::make_shared<const Refiner>(std::move(refine));
  return r;
}

Enclosure TrackedReal::enclose(Bits prec) const {
  if (prec <= cached_.precision() && !refiner_) {
    // Exact values cache at start precision; anything finer is recomputed.
    return cached_;
  }
  if (exact_) return exact_->enclose(prec);
  return (*refiner_)(prec);
}

CertifiedValue TrackedReal::certify(const BigFloat& tol, const PrecisionPolicy& policy) const {
  for (Bits p = policy.start_bits; p <= policy.cap_bits; p *= 2) {
    Enclosure e = p == policy.start_bits ? cached_ : enclose(p);
    CertifiedValue v = CertifiedValue::from_enclosure(e);
    if (compare(v.radius, tol) < 0) return v;
  }
  throw Error(ErrorKind::PrecisionExhausted, "cannot certify " + str() + " to tolerance " + tol.to_string(3));
}

CertifiedValue TrackedReal::certify(double tol, const PrecisionPolicy& policy) const {
  if (!(tol > 0)) throw Error(ErrorKind::InvalidSpec, "tolerance must be positive");
  return certify(BigFloat::from_double(tol, 64), policy);
}

CertifiedValue TrackedReal::certify_fraction(double tol, const PrecisionPolicy& policy) const {
  if (!(tol > 0)) throw Error(ErrorKind::InvalidSpec, "tolerance must be positive");
  const BigFloat t = BigFloat::from_double(tol, 64);
  for (Bits p = policy.start_bits; p <= policy.cap_bits; p *= 2) {
    Enclosure e = p == policy.start_bits ? cached_ : enclose(p);
    if (e.lo.sign() < 0 || mpfr_cmp_ui(e.hi.get(), 1) >= 0) continue;
    CertifiedValue v = CertifiedValue::from_enclosure(e);
    if (compare(v.radius, t) < 0) return v;
  }
  throw Error(ErrorKind::PrecisionExhausted, "cannot certify fraction " + str());
}

std::string TrackedReal::str() const {
  if (exact_) return exact_->str();
  return CertifiedValue::from_enclosure(cached_).str();
}

Order compare(const TrackedReal& x, const TrackedReal& y, const PrecisionPolicy& policy) {
  if (x.enclosure().strictly_below(y.enclosure())) return Order::Less;
  if (y.enclosure().strictly_below(x.enclosure())) return Order::Greater;
  if (x.is_exact() && y.is_exact()) {
    try {
      const int s = (*x.exact() - *y.exact()).sign(policy);
      return s < 0 ? Order::Less : (s > 0 ? Order::Greater : Order::Equal);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PrecisionExhausted) throw;
      return Order::Unresolved;
    }
  }
  for (Bits p = policy.start_bits * 2; p <= policy.cap_bits; p *= 2) {
    const Enclosure ex = x.enclose(p);
    const Enclosure ey = y.enclose(p);
    if (ex.strictly_below(ey)) return Order::Less;
    if (ey.strictly_below(ex)) return Order::Greater;
  }
  return Order::Unresolved;
}

TrackedReal operator+(const TrackedReal& x, const TrackedReal& y) {
  if (x.is_exact() && y.is_exact()) return TrackedReal(*x.exact() + *y.exact());
  return TrackedReal::approximate([x, y](Bits p) { return x.enclose(p + 2) + y.enclose(p + 2); });
}

TrackedReal operator-(const TrackedReal& x, const TrackedReal& y) {
  if (x.is_exact() && y.is_exact()) return TrackedReal(*x.exact() - *y.exact());
  return TrackedReal::approximate([x, y](Bits p) { return x.enclose(p + 2) - y.enclose(p + 2); });
}

TrackedReal operator*(const TrackedReal& x, const mpz_class& m) {
  if (x.is_exact()) return TrackedReal(*x.exact() * m);
  const Bits extra = static_cast<Bits>(mpz_sizeinbase(m.get_mpz_t(), 2));
  return TrackedReal::approximate([x, m, extra](Bits p) { return x.enclose(p + extra) * m; });
}

namespace {

// Reduces an enclosure mod 1; straddling an integer yields [0, 1] so callers
// escalate instead of trusting a wrapped interval.
Enclosure reduce_mod1(const Enclosure& e) {
  mpz_class k;
  if (common_floor(e, k)) {
    Enclosure r = e + mpz_class(-k);
    if (r.lo.sign() < 0) mpfr_set_zero(r.lo.get(), 1);
    return r;
  }
  return Enclosure::unit(e.precision());
}

}  // namespace

TrackedReal frac(const TrackedReal& x) {
  if (x.is_exact()) return TrackedReal(x.exact()->frac());
  return TrackedReal::approximate([x](Bits p) { return reduce_mod1(x.enclose(p)); });
}

TrackedReal distance_from_fraction(const TrackedReal& f) {
  if (f.is_exact()) {
    const SurdSum& v = *f.exact();
    const SurdSum other = SurdSum(mpq_class(1)) - v;
    return TrackedReal((v - other).sign() <= 0 ? v : other);
  }
  return TrackedReal::approximate([f](Bits p) {
    const Enclosure e = f.enclose(p);
    Enclosure r(e.precision());
    BigFloat one_minus(e.precision());
    mpfr_ui_sub(one_minus.get(), 1, e.hi.get(), MPFR_RNDD);
    mpfr_min(r.lo.get(), e.lo.get(), one_minus.get(), MPFR_RNDD);
    mpfr_ui_sub(one_minus.get(), 1, e.lo.get(), MPFR_RNDU);
    mpfr_min(r.hi.get(), e.hi.get(), one_minus.get(), MPFR_RNDU);
    return r;
  });
}

mpz_class certified_floor(const TrackedReal& x, const PrecisionPolicy& policy) {
  if (x.is_exact()) return x.exact()->floor(policy);
  mpz_class k;
  if (common_floor(x.enclosure(), k)) return k;
  for (Bits p = policy.start_bits * 2; p <= policy.cap_bits; p *= 2) {
    if (common_floor(x.enclose(p), k)) return k;
  }
  throw Error(ErrorKind::PrecisionExhausted, "floor of " + x.str());
}

// --- linear forms ----------------------------------------------------------

void LinearForm::add(const RealSpec& x, const mpz_class& m) {
  if (m == 0) return;
  if (const auto& q = x.algebraic()) {
    algebraic = algebraic + SurdSum(*q) * m;
  } else {
    streams.emplace_back(m, std::get<std::shared_ptr<const DigitSource>>(x.value()));
  }
}

namespace {

// Enclosure of m * x where x = 0.d1 d2 ... in base b. The factor b^k of m is
// applied as an exact digit shift (dropping the integer part it produces).
Enclosure enclose_stream_multiple(const mpz_class& m, const DigitSource& src, Bits prec) {
  mpz_class r = abs(m);
  const mpz_class base = src.base();
  const std::uint64_t shift = mpz_remove(r.get_mpz_t(), r.get_mpz_t(), base.get_mpz_t());
  const Bits extra = static_cast<Bits>(mpz_sizeinbase(r.get_mpz_t(), 2));
  Enclosure e = enclose_digit_tail(src, shift, prec + extra + 4) * r;
  e = reduce_mod1(e);
  return m < 0 ? -e : e;
}

}  // namespace

TrackedReal frac_of(const LinearForm& form) {
  if (form.streams.empty()) return frac(TrackedReal(form.algebraic));
  const SurdSum alg = form.algebraic.frac();
  auto streams = form.streams;
  return TrackedReal::approximate([alg, streams](Bits p) {
    const Bits work = p + 4 + static_cast<Bits>(streams.size());
    Enclosure sum = alg.enclose(work);
    for (const auto& [m, src] : streams) sum = sum + enclose_stream_multiple(m, *src, work);
    return reduce_mod1(sum);
  });
}

CertifiedValue frac_part(const RealSpec& x, const mpz_class& m, double tol) {
  LinearForm form;
  form.add(x, m);
  return frac_of(form).certify_fraction(tol);
}

CertifiedValue nearest_int_dist(const RealSpec& x, const mpz_class& m, double tol) {
  LinearForm form;
  form.add(x, m);
  return distance_from_fraction(frac_of(form)).certify(tol);
}

}  // namespace remlab
