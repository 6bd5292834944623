#include "remlab/betaexp.hpp"

#include <cctype>
#include <cmath>
#include <map>

#include "remlab/error.hpp"

namespace remlab {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::InvalidSpec, msg); }

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool integral(const mpq_class& q) { return q.get_den() == 1; }

}  // namespace

// --- PisotBase -------------------------------------------------------------

PisotBase::PisotBase(QuadraticSurd beta, unsigned max_digit)
    : beta_(std::move(beta)), conjugate_(beta_.conjugate()), max_digit_(max_digit) {}

PisotBase PisotBase::integer(unsigned long b) {
  if (b < 2) invalid("integer base must be >= 2, got " + std::to_string(b));
  return PisotBase(QuadraticSurd::integer(b), static_cast<unsigned>(b - 1));
}

PisotBase PisotBase::quadratic(const QuadraticSurd& beta) {
  if (beta.is_rational()) {
    const mpq_class q = beta.to_rational();
    if (!integral(q) || q < 2 || !q.get_num().fits_ulong_p()) {
      invalid("rational base " + beta.str() + " is not an integer >= 2");
    }
    return integer(q.get_num().get_ui());
  }
  // Minimal polynomial x^2 - t x + n with t = 2a/c, n = (a^2 - b^2 d)/c^2.
  const mpq_class trace(2 * beta.a(), beta.c());
  const mpq_class norm(beta.a() * beta.a() - beta.b() * beta.b() * beta.d(), beta.c() * beta.c());
  mpq_class t = trace, nn = norm;
  t.canonicalize();
  nn.canonicalize();
  if (!integral(t) || !integral(nn)) invalid(beta.str() + " is not an algebraic integer");
  if ((beta - QuadraticSurd::integer(1)).sign() <= 0) invalid("base " + beta.str() + " must exceed 1");
  const QuadraticSurd conj = beta.conjugate();
  if ((conj - QuadraticSurd::integer(1)).sign() >= 0 || (conj + QuadraticSurd::integer(1)).sign() <= 0) {
    invalid("conjugate of " + beta.str() + " has modulus >= 1 (not Pisot)");
  }
  const mpz_class ceil_beta = beta.floor() + 1;  // beta irrational
  if (!ceil_beta.fits_uint_p() || ceil_beta > 36) invalid("base " + beta.str() + " too large");
  return PisotBase(beta, static_cast<unsigned>(ceil_beta.get_ui() - 1));
}

PisotBase PisotBase::parse(std::string_view text) {
  if (text == "golden") return golden();
  if (!text.empty() && std::isdigit(static_cast<unsigned char>(text[0]))) {
    mpz_class v;
    if (v.set_str(std::string(text), 10) != 0 || !v.fits_ulong_p()) invalid("bad base '" + std::string(text) + "'");
    return integer(v.get_ui());
  }
  const RealSpec spec = RealSpec::parse(text);
  if (!spec.algebraic()) invalid("base must be an integer or quadratic surd, got '" + std::string(text) + "'");
  return quadratic(*spec.algebraic());
}

QuadraticSurd PisotBase::power(unsigned long n) const {
  QuadraticSurd result = QuadraticSurd::integer(1);
  QuadraticSurd b = beta_;
  while (n > 0) {
    if (n & 1) result = result * b;
    n >>= 1;
    if (n > 0) b = b * b;
  }
  return result;
}

std::string PisotBase::str() const {
  if (is_integer()) return beta_.a().get_str();
  return beta_.str();
}

// --- expansions ------------------------------------------------------------

BetaExpansion beta_expand(const RealSpec& x, const PisotBase& base, std::size_t n_digits) {
  BetaExpansion out{{}, base};
  out.digits.reserve(n_digits);
  const auto& alg = x.algebraic();
  const bool same_field =
      alg && (alg->is_rational() || base.is_integer() || alg->d() == base.beta().d());
  if (same_field) {
    QuadraticSurd r = *alg;
    if (r.sign() < 0 || (r - QuadraticSurd::integer(1)).sign() >= 0) invalid("beta_expand needs 0 <= x < 1");
    for (std::size_t i = 0; i < n_digits; ++i) {
      QuadraticSurd y = r * base.beta();
      const mpz_class d = y.floor();
      out.digits.push_back(static_cast<unsigned>(d.get_ui()));
      r = y - QuadraticSurd::integer(d);
    }
    return out;
  }
  const PrecisionPolicy& policy = PrecisionPolicy::standard();
  const double bits_per_digit = std::log2(SurdSum(base.beta()).enclose(64).hi.to_double(MPFR_RNDU));
  Bits p = std::max<Bits>(policy.start_bits, static_cast<Bits>(n_digits * bits_per_digit) + 64);
  for (; p <= policy.cap_bits; p *= 2) {
    Enclosure r = x.enclose(p);
    if (r.lo.sign() < 0 && r.hi.sign() < 0) invalid("beta_expand needs 0 <= x < 1");
    if (mpfr_cmp_ui(r.lo.get(), 1) >= 0) invalid("beta_expand needs 0 <= x < 1");
    const Enclosure beta = SurdSum(base.beta()).enclose(p);
    out.digits.clear();
    bool ok = true;
    for (std::size_t i = 0; i < n_digits && ok; ++i) {
      Enclosure y = r * beta;
      mpz_class d;
      ok = common_floor(y, d) && d >= 0;
      if (!ok) break;
      out.digits.push_back(static_cast<unsigned>(d.get_ui()));
      r = y + mpz_class(-d);
    }
    if (ok) return out;
  }
  throw Error(ErrorKind::PrecisionExhausted, "beta expansion of " + x.str() + " to " + std::to_string(n_digits) + " digits");
}

TrackedReal pisot_power_distance(const PisotBase& base, unsigned long n) {
  if (base.is_integer()) return TrackedReal(mpq_class(0));
  if (n >= 2) {
    // beta^n + beta'^n is an integer, so ||beta^n|| = |beta'^n| once that is < 1/2.
    QuadraticSurd c = QuadraticSurd::integer(1);
    QuadraticSurd b = base.conjugate();
    for (unsigned long k = n; k > 0; k >>= 1) {
      if (k & 1) c = c * b;
      if (k > 1) b = b * b;
    }
    c = c.abs();
    if ((c * mpz_class(2) - QuadraticSurd::integer(1)).sign() < 0) return TrackedReal(c);
  }
  return distance_from_fraction(TrackedReal(base.power(n).frac()));
}

CertifiedValue pisot_power_dist(const PisotBase& base, unsigned long n, double tol) {
  return pisot_power_distance(base, n).certify(tol);
}

std::uint64_t tail_index(const PisotBase& base, const mpq_class& eps) {
  if (eps <= 0) invalid("tail_index needs eps > 0");
  if (base.is_integer()) return 0;
  const QuadraticSurd g = base.conjugate().abs();
  const QuadraticSurd one = QuadraticSurd::integer(1);
  const QuadraticSurd half = QuadraticSurd::rational(mpq_class(1, 2));
  // n0: from here on ||beta^n|| = g^n.
  std::uint64_t n0 = 2;
  QuadraticSurd gn0 = g * g;
  while ((gn0 - half).sign() >= 0) {
    gn0 = gn0 * g;
    ++n0;
  }
  std::vector<QuadraticSurd> head;
  for (std::uint64_t k = 0; k < n0; ++k) head.push_back(*pisot_power_distance(base, k).exact()->as_quadratic());
  QuadraticSurd tail = gn0 / (one - g);
  for (const auto& h : head) tail = tail + h;
  const QuadraticSurd target = QuadraticSurd::rational(eps / base.max_digit());
  std::uint64_t m = 0;
  while ((tail - target).sign() >= 0) {
    tail = m < n0 ? tail - head[m] : tail * g;
    ++m;
  }
  return m;
}

// --- admissible digit streams ----------------------------------------------

unsigned QuasiGreedyOne::at(std::size_t i) const {
  if (i < preperiod.size()) return preperiod[i];
  return period[(i - preperiod.size()) % period.size()];
}

QuasiGreedyOne quasi_greedy_one(const PisotBase& base) {
  QuasiGreedyOne out;
  if (base.is_integer()) {
    out.period = {base.max_digit()};
    return out;
  }
  std::vector<unsigned> digits;
  std::map<std::string, std::size_t> seen;
  QuadraticSurd r = QuadraticSurd::integer(1);
  for (std::size_t step = 0; step < 100000; ++step) {
    auto [it, fresh] = seen.try_emplace(r.str(), digits.size());
    if (!fresh) {
      out.preperiod.assign(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(it->second));
      out.period.assign(digits.begin() + static_cast<std::ptrdiff_t>(it->second), digits.end());
      return out;
    }
    const QuadraticSurd y = r * base.beta();
    const mpz_class d = y.floor();
    digits.push_back(static_cast<unsigned>(d.get_ui()));
    r = y - QuadraticSurd::integer(d);
    if (r.is_zero()) {
      // Finite greedy expansion t1..tm of 1: d*(1) = (t1 .. t_{m-1} (t_m - 1))^inf.
      digits.back() -= 1;
      out.period = digits;
      return out;
    }
  }
  invalid("greedy expansion of 1 in base " + base.str() + " did not become periodic");
}

AdmissibleRandomDigits::AdmissibleRandomDigits(const PisotBase& base, std::uint64_t seed)
    : base_(base), limit_(quasi_greedy_one(base)), seed_(seed), rng_state_(seed) {}

unsigned AdmissibleRandomDigits::digit(std::uint64_t i) const {
  if (i == 0) invalid("digit positions are 1-based");
  std::lock_guard<std::mutex> lock(mu_);
  const std::size_t states = limit_.preperiod.size() + limit_.period.size();
  while (cache_.size() < i) {
    // state = length of the prefix of d*(1) matched by the current suffix.
    const unsigned t = limit_.at(state_);
    const auto e = static_cast<unsigned>((static_cast<unsigned __int128>(splitmix64(rng_state_)) * (t + 1)) >> 64);
    cache_.push_back(static_cast<std::uint8_t>(e));
    if (e < t) {
      state_ = 0;
    } else if (++state_ == states) {
      state_ = limit_.preperiod.size();
    }
  }
  return cache_[i - 1];
}

std::string AdmissibleRandomDigits::name() const {
  return "admissible:" + base_.str() + ":" + std::to_string(seed_);
}

std::optional<std::uint64_t> zero_run_find(const DigitSource& digits, std::uint64_t run_len, std::uint64_t scan_cap) {
  if (run_len == 0) invalid("run_len must be >= 1");
  if (scan_cap < run_len) invalid("scan_cap must be >= run_len");
  if (auto len = digits.length()) scan_cap = std::min(scan_cap, *len);
  std::uint64_t run = 0;
  for (std::uint64_t i = 1; i <= scan_cap; ++i) {
    run = digits.digit(i) == 0 ? run + 1 : 0;
    if (run == run_len) return i - run_len + 1;
  }
  return std::nullopt;
}

}  // namespace remlab
