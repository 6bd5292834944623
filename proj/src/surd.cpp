#include "remlab/surd.hpp"

#include <algorithm>

#include "remlab/error.hpp"

namespace remlab {

namespace {

constexpr unsigned long kTrialLimit = 1000000;

mpz_class gcd3(const mpz_class& a, const mpz_class& b, const mpz_class& c) {
  mpz_class g = gcd(a, b);
  return gcd(g, c);
}

std::string z(const mpz_class& v) { return v.get_str(); }

}  // namespace

std::pair<mpz_class, mpz_class> squarefree_split(const mpz_class& v) {
  if (v < 0) throw Error(ErrorKind::InvalidSpec, "negative radicand " + z(v));
  if (v == 0) return {0, 0};
  mpz_class rest = v;
  mpz_class square = 1, free = 1;
  for (unsigned long p = 2; p <= kTrialLimit; p += (p == 2 ? 1 : 2)) {
    if (mpz_class(p) * p > rest) break;
    unsigned e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++e;
    }
    for (unsigned i = 0; i < e / 2; ++i) square *= p;
    if (e % 2) free *= p;
  }
  if (rest == 1) return {square, free};
  if (mpz_perfect_square_p(rest.get_mpz_t())) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), rest.get_mpz_t());
    return {square * r, free};
  }
  // All prime factors of rest exceed the trial bound. Below bound^3 it has at
  // most two prime factors, so it is squarefree unless a perfect square.
  const mpz_class bound = mpz_class(kTrialLimit) * kTrialLimit * kTrialLimit;
  if (rest < bound || mpz_probab_prime_p(rest.get_mpz_t(), 40) != 0) return {square, free * rest};
  throw Error(ErrorKind::InvalidSpec, "cannot certify radicand " + z(v) + " squarefree");
}

QuadraticSurd::QuadraticSurd(const mpz_class& a, const mpz_class& b, const mpz_class& c,
                             const mpz_class& d)
    : a_(a), b_(b), c_(c), d_(d) {
  if (c_ == 0) throw Error(ErrorKind::InvalidSpec, "zero denominator in surd");
  auto [s, r] = squarefree_split(d_);
  b_ *= s;
  d_ = r;
  normalize();
}

QuadraticSurd::QuadraticSurd(Canonical, mpz_class a, mpz_class b, mpz_class c, mpz_class d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  normalize();
}

void QuadraticSurd::normalize() {
  if (d_ == 1) {
    a_ += b_;
    b_ = 0;
  }
  if (d_ == 0) b_ = 0;
  if (b_ == 0) d_ = 0;
  if (c_ < 0) {
    a_ = -a_;
    b_ = -b_;
    c_ = -c_;
  }
  mpz_class g = gcd3(a_, b_, c_);
  if (g > 1) {
    mpz_divexact(a_.get_mpz_t(), a_.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(b_.get_mpz_t(), b_.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(c_.get_mpz_t(), c_.get_mpz_t(), g.get_mpz_t());
  }
}

QuadraticSurd QuadraticSurd::integer(const mpz_class& v) { return {Canonical{}, v, 0, 1, 0}; }

QuadraticSurd QuadraticSurd::rational(const mpq_class& v) {
  return {Canonical{}, v.get_num(), 0, v.get_den(), 0};
}

mpq_class QuadraticSurd::to_rational() const {
  if (!is_rational()) throw Error(ErrorKind::InvalidSpec, "surd " + str() + " is irrational");
  mpq_class q(a_, c_);
  q.canonicalize();
  return q;
}

int QuadraticSurd::sign() const {
  const int sa = sgn(a_);
  const int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // Opposite signs: compare a^2 with b^2 d.
  const mpz_class lhs = a_ * a_;
  const mpz_class rhs = b_ * b_ * d_;
  const int c = cmp(lhs, rhs);
  return sa > 0 ? c : -c;
}

mpz_class QuadraticSurd::floor() const {
  mpz_class whole;
  if (b_ == 0) {
    mpz_fdiv_q(whole.get_mpz_t(), a_.get_mpz_t(), c_.get_mpz_t());
    return whole;
  }
  // t = b*sqrt(d) is irrational; floor((a + t)/c) == floor((a + floor(t))/c).
  mpz_class root;
  const mpz_class radicand = b_ * b_ * d_;
  mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
  const mpz_class ft = b_ > 0 ? root : mpz_class(-root - 1);
  const mpz_class num = a_ + ft;
  mpz_fdiv_q(whole.get_mpz_t(), num.get_mpz_t(), c_.get_mpz_t());
  return whole;
}

QuadraticSurd QuadraticSurd::conjugate() const { return {Canonical{}, a_, -b_, c_, d_}; }

Enclosure QuadraticSurd::enclose(Bits prec) const {
  if (b_ == 0) return Enclosure::point(mpq_class(a_, c_), prec);
  const Bits work = prec + 16;
  const mpz_class b2d = b_ * b_ * d_;
  Enclosure t = Enclosure::sqrt_of(b2d, work);  // |b| sqrt(d)
  if (b_ < 0) t = -t;
  if (a_ == 0 || sgn(a_) == sgn(b_)) {
    return (t + a_) / c_;
  }
  // a and t have opposite signs: (a + t) = (a^2 - b^2 d) / (a - t).
  const mpz_class norm = a_ * a_ - b2d;
  Enclosure denom = (-t) + a_;
  return Enclosure::point(norm, work) / denom / c_;
}

std::string QuadraticSurd::str() const {
  return "(" + z(a_) + "+" + z(b_) + "*sqrt(" + z(d_) + "))/" + z(c_);
}

QuadraticSurd QuadraticSurd::operator-() const { return {Canonical{}, -a_, -b_, c_, d_}; }

namespace {

const mpz_class& joint_radicand(const QuadraticSurd& x, const QuadraticSurd& y) {
  if (x.is_rational()) return y.d();
  if (y.is_rational() || x.d() == y.d()) return x.d();
  throw Error(ErrorKind::InvalidSpec,
              "radicands differ: " + x.d().get_str() + " vs " + y.d().get_str());
}

}  // namespace

QuadraticSurd operator+(const QuadraticSurd& x, const QuadraticSurd& y) {
  const mpz_class& d = joint_radicand(x, y);
  return {QuadraticSurd::Canonical{}, x.a_ * y.c_ + y.a_ * x.c_, x.b_ * y.c_ + y.b_ * x.c_,
          x.c_ * y.c_, d};
}

QuadraticSurd operator-(const QuadraticSurd& x, const QuadraticSurd& y) { return x + (-y); }

QuadraticSurd operator*(const QuadraticSurd& x, const QuadraticSurd& y) {
  const mpz_class& d = joint_radicand(x, y);
  return {QuadraticSurd::Canonical{}, x.a_ * y.a_ + x.b_ * y.b_ * d, x.a_ * y.b_ + x.b_ * y.a_,
          x.c_ * y.c_, d};
}

QuadraticSurd operator/(const QuadraticSurd& x, const QuadraticSurd& y) {
  if (y.is_zero()) throw Error(ErrorKind::DegenerateInput, "division by zero surd");
  const mpz_class& d = joint_radicand(x, y);
  // 1/y = c (a - b sqrt d) / (a^2 - b^2 d)
  const mpz_class norm = y.a_ * y.a_ - y.b_ * y.b_ * d;
  QuadraticSurd inv(QuadraticSurd::Canonical{}, y.c_ * y.a_, -y.c_ * y.b_, norm, d);
  return x * inv;
}

QuadraticSurd operator*(const QuadraticSurd& x, const mpz_class& m) {
  return {QuadraticSurd::Canonical{}, x.a_ * m, x.b_ * m, x.c_, x.d_};
}

std::strong_ordering operator<=>(const QuadraticSurd& x, const QuadraticSurd& y) {
  const int s = (x - y).sign();
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------

SurdSum::SurdSum(const QuadraticSurd& q) : a_(q.a()), c_(q.c()) {
  if (!q.is_rational()) roots_.emplace_back(q.d(), q.b());
}

SurdSum::SurdSum(const mpq_class& q) : a_(q.get_num()), c_(q.get_den()) { normalize(); }

std::optional<QuadraticSurd> SurdSum::as_quadratic() const {
  if (roots_.empty()) return QuadraticSurd::rational(mpq_class(a_, c_));
  if (roots_.size() == 1) {
    // Already canonical: squarefree radicand and reduced gcd.
    return QuadraticSurd(QuadraticSurd::Canonical{}, a_, roots_[0].second, c_, roots_[0].first);
  }
  return std::nullopt;
}

void SurdSum::normalize() {
  std::erase_if(roots_, [](const auto& r) { return r.second == 0; });
  if (c_ < 0) {
    a_ = -a_;
    c_ = -c_;
    for (auto& r : roots_) r.second = -r.second;
  }
  mpz_class g = gcd(a_, c_);
  for (const auto& r : roots_) g = gcd(g, r.second);
  if (g > 1) {
    a_ /= g;
    c_ /= g;
    for (auto& r : roots_) r.second /= g;
  }
}

SurdSum SurdSum::operator-() const {
  SurdSum r = *this;
  r.a_ = -r.a_;
  for (auto& root : r.roots_) root.second = -root.second;
  return r;
}

SurdSum operator+(const SurdSum& x, const SurdSum& y) {
  SurdSum r;
  r.a_ = x.a_ * y.c_ + y.a_ * x.c_;
  r.c_ = x.c_ * y.c_;
  auto i = x.roots_.begin();
  auto j = y.roots_.begin();
  while (i != x.roots_.end() || j != y.roots_.end()) {
    if (j == y.roots_.end() || (i != x.roots_.end() && i->first < j->first)) {
      r.roots_.emplace_back(i->first, i->second * y.c_);
      ++i;
    } else if (i == x.roots_.end() || j->first < i->first) {
      r.roots_.emplace_back(j->first, j->second * x.c_);
      ++j;
    } else {
      r.roots_.emplace_back(i->first, i->second * y.c_ + j->second * x.c_);
      ++i;
      ++j;
    }
  }
  r.normalize();
  return r;
}

SurdSum operator*(const SurdSum& x, const mpz_class& m) {
  SurdSum r = x;
  r.a_ *= m;
  for (auto& root : r.roots_) root.second *= m;
  r.normalize();
  return r;
}

Bits SurdSum::magnitude_bits() const {
  std::size_t bits = mpz_sizeinbase(a_.get_mpz_t(), 2);
  for (const auto& [d, b] : roots_) {
    bits = std::max(bits, mpz_sizeinbase(b.get_mpz_t(), 2) + mpz_sizeinbase(d.get_mpz_t(), 2) / 2 + 1);
  }
  const std::size_t cbits = mpz_sizeinbase(c_.get_mpz_t(), 2);
  return static_cast<Bits>(bits > cbits ? bits - cbits + 2 : 2) + 4;
}

Enclosure SurdSum::enclose(Bits prec) const {
  if (auto q = as_quadratic()) {
    // Relative precision suffices once the magnitude is accounted for.
    return q->enclose(prec + magnitude_bits());
  }
  const Bits work = prec + magnitude_bits() + static_cast<Bits>(roots_.size()) + 8;
  Enclosure sum = Enclosure::point(a_, work);
  for (const auto& [d, b] : roots_) {
    Enclosure t = Enclosure::sqrt_of(b * b * d, work);
    sum = b > 0 ? sum + t : sum - t;
  }
  return sum / c_;
}

int SurdSum::sign(const PrecisionPolicy& policy) const {
  if (roots_.empty()) return sgn(a_);
  if (roots_.size() == 1) return as_quadratic()->sign();
  for (Bits p = policy.start_bits; p <= policy.cap_bits; p *= 2) {
    Enclosure e = enclose(p);
    if (e.lo.sign() > 0) return 1;
    if (e.hi.sign() < 0) return -1;
  }
  throw Error(ErrorKind::PrecisionExhausted, "sign of " + str());
}

mpz_class SurdSum::floor(const PrecisionPolicy& policy) const {
  if (auto q = as_quadratic()) return q->floor();
  Enclosure e = enclose(policy.start_bits);
  mpz_class k;
  if (common_floor(e, k)) return k;
  mpfr_get_z(k.get_mpz_t(), e.lo.get(), MPFR_RNDD);
  while ((*this - SurdSum(mpq_class(k + 1))).sign(policy) >= 0) ++k;
  while ((*this - SurdSum(mpq_class(k))).sign(policy) < 0) --k;
  return k;
}

SurdSum SurdSum::frac(const PrecisionPolicy& policy) const {
  if (auto q = as_quadratic()) return SurdSum(q->frac());
  return *this - SurdSum(mpq_class(floor(policy)));
}

std::string SurdSum::str() const {
  std::string s = "(" + z(a_);
  for (const auto& [d, b] : roots_) s += "+" + z(b) + "*sqrt(" + z(d) + ")";
  return s + ")/" + z(c_);
}

}  // namespace remlab
