#include "remlab/seqgen.hpp"

#include <cmath>

#include "remlab/error.hpp"

namespace remlab {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::InvalidSpec, msg); }

mpz_class z(std::uint64_t v) {
  mpz_class r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return r;
}

// {a_n alpha} with a_n from a table or a formula.
class MultiplierSource final : public PointStream::Source {
 public:
  MultiplierSource(RealSpec alpha, std::function<mpz_class(std::uint64_t)> a)
      : alpha_(std::move(alpha)), a_(std::move(a)) {}
  TrackedReal at(std::uint64_t n, std::size_t) const override { return frac_multiple(alpha_, a_(n)); }

 private:
  RealSpec alpha_;
  std::function<mpz_class(std::uint64_t)> a_;
};

class PolySource final : public PointStream::Source {
 public:
  explicit PolySource(std::vector<Polynomial> polys) : polys_(std::move(polys)) {}
  TrackedReal at(std::uint64_t n, std::size_t dim) const override {
    LinearForm form;
    mpz_class power = 1;
    const mpz_class nn = z(n);
    for (const auto& c : polys_[dim]) {
      form.add(c, power);
      power *= nn;
    }
    return frac_of(form);
  }

 private:
  std::vector<Polynomial> polys_;
};

// {beta^n alpha} for a quadratic Pisot beta and alpha given by beta-digits:
// beta^n alpha = (integer) - S'_n + tail_n with S'_n = sum_{i<=n} d_i beta'^(n-i)
// and tail_n = sum_{j>=1} d_{n+j} beta^-j; both sums are truncated with
// explicit geometric remainder bounds.
class BetaDigitSource final : public PointStream::Source {
 public:
  BetaDigitSource(PisotBase base, std::shared_ptr<const DigitSource> digits)
      : base_(std::move(base)), digits_(std::move(digits)) {
    const double beta = SurdSum(base_.beta()).enclose(64).lo.to_double(MPFR_RNDD);
    const double g = SurdSum(base_.conjugate().abs()).enclose(64).hi.to_double(MPFR_RNDU);
    log2_beta_ = std::log2(beta);
    log2_inv_g_ = -std::log2(g);
  }

  TrackedReal at(std::uint64_t n, std::size_t) const override {
    // Points may outlive the stream, so the refiner owns copies.
    PisotBase base = base_;
    auto digits = digits_;
    const double lb = log2_beta_, lg = log2_inv_g_;
    return TrackedReal::approximate([base, digits, n, lb, lg](Bits p) {
      const Bits work = p + 16;
      const mpz_class maxd = base.max_digit();
      const Enclosure beta = SurdSum(base.beta()).enclose(work);
      const Enclosure conj = SurdSum(base.conjugate()).enclose(work);
      const Enclosure g = abs(conj);
      const Enclosure one = Enclosure::point(mpz_class(1), work);

      // S'_n, Horner over the last K digits d_n, d_{n-1}, ..., d_{n-K+1}.
      const std::uint64_t K = std::min<std::uint64_t>(n, static_cast<std::uint64_t>((work + 8) / lg) + 2);
      Enclosure s = Enclosure::point(mpz_class(0), work);
      for (std::uint64_t k = K; k-- > 0;) s = s * conj + mpz_class(digits->digit(n - k));
      if (K < n) {
        // |sum_{k>=K} d beta'^k| <= maxd g^K / (1 - g)
        Enclosure bound = pow(g, K) * maxd / (one - g);
        Enclosure widen(work);
        mpfr_neg(widen.lo.get(), bound.hi.get(), MPFR_RNDD);
        mpfr_set(widen.hi.get(), bound.hi.get(), MPFR_RNDU);
        s = s + widen;
      }
      // tail_n, Horner over d_{n+1} .. d_{n+J}, remainder in [0, maxd beta^-J / (beta - 1)].
      const std::uint64_t J = static_cast<std::uint64_t>((work + 8) / lb) + 2;
      Enclosure t = Enclosure::point(mpz_class(0), work);
      for (std::uint64_t j = J; j >= 1; --j) t = (t + mpz_class(digits->digit(n + j))) / beta;
      Enclosure rest = one / pow(beta, J) * maxd / (beta - one);
      mpfr_set_zero(rest.lo.get(), 1);
      t = t + rest;
      Enclosure v = t - s;
      mpz_class k;
      if (!common_floor(v, k)) return Enclosure::unit(work);
      Enclosure r = v + mpz_class(-k);
      if (r.lo.sign() < 0) mpfr_set_zero(r.lo.get(), 1);
      return r;
    });
  }

 private:
  PisotBase base_;
  std::shared_ptr<const DigitSource> digits_;
  double log2_beta_ = 1;
  double log2_inv_g_ = 1;
};

// {b^n alpha} where alpha's digits are in base b: the tail after n digits.
class ShiftSource final : public PointStream::Source {
 public:
  explicit ShiftSource(std::shared_ptr<const DigitSource> digits) : digits_(std::move(digits)) {}
  TrackedReal at(std::uint64_t n, std::size_t) const override {
    auto digits = digits_;
    return TrackedReal::approximate([digits, n](Bits p) {
      Enclosure e = enclose_digit_tail(*digits, n, p);
      if (mpfr_cmp_ui(e.hi.get(), 1) >= 0) return Enclosure::unit(p);
      return e;
    });
  }

 private:
  std::shared_ptr<const DigitSource> digits_;
};

std::function<mpz_class(std::uint64_t)> slow_growth_formula(const std::string& f) {
  if (f == "isqrt") {
    return [](std::uint64_t n) { mpz_class r; mpz_sqrt(r.get_mpz_t(), z(n).get_mpz_t()); return r; };
  }
  if (f == "icbrt") {
    return [](std::uint64_t n) { mpz_class r; mpz_root(r.get_mpz_t(), z(n).get_mpz_t(), 3); return r; };
  }
  if (f == "ilog2") {
    return [](std::uint64_t n) { return mpz_class(static_cast<unsigned long>(63 - __builtin_clzll(n))); };
  }
  if (f.rfind("div:", 0) == 0) {
    mpz_class k;
    if (k.set_str(f.substr(4), 10) != 0 || k < 1 || !k.fits_ulong_p()) invalid("bad divisor in '" + f + "'");
    const unsigned long kk = k.get_ui();
    return [kk](std::uint64_t n) { return z(n / kk); };
  }
  invalid("unknown slow-growth formula '" + f + "' (isqrt, icbrt, ilog2, div:K)");
}

std::function<mpz_class(std::uint64_t)> table_lookup(std::shared_ptr<const std::vector<mpz_class>> t) {
  return [t](std::uint64_t n) { return (*t)[n - 1]; };
}

PointStream table_stream(const SequenceSpec& spec, const RealSpec& alpha, std::vector<mpz_class> a, double tol) {
  auto table = std::make_shared<const std::vector<mpz_class>>(std::move(a));
  auto source = std::make_shared<MultiplierSource>(alpha, table_lookup(table));
  return PointStream(spec, table->size(), tol, source, table);
}

CFExpansion exact_cf(const RealSpec& alpha, std::size_t n) {
  if (!alpha.is_algebraic()) throw Error(ErrorKind::InexactCF, alpha.str() + " has no exact continued fraction");
  if (alpha.is_rational()) throw Error(ErrorKind::DegenerateInput, "alpha " + alpha.str() + " is rational");
  return cf_expand(alpha, n);
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::Kronecker: return "kronecker";
    case Family::PolyKronecker: return "poly_kronecker";
    case Family::BetaPower: return "beta_power";
    case Family::QnPlusN: return "qn_plus_n";
    case Family::GrowthConstrained: return "growth_constrained";
    case Family::MultiAlpha: return "multi_alpha";
    case Family::SlowGrowth: return "slow_growth";
    case Family::Explicit: return "explicit";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::Kronecker, Family::PolyKronecker, Family::BetaPower, Family::QnPlusN,
                   Family::GrowthConstrained, Family::MultiAlpha, Family::SlowGrowth, Family::Explicit}) {
    if (to_string(f) == name) return f;
  }
  invalid("unknown sequence family '" + std::string(name) + "'");
}

void SequenceSpec::validate() const {
  switch (family) {
    case Family::PolyKronecker: {
      if (polys.empty()) invalid("poly_kronecker needs at least one polynomial");
      for (const auto& p : polys) {
        // Only the trivial necessary condition for u.d. is checked.
        bool irrational = false;
        for (std::size_t j = 1; j < p.size(); ++j) irrational = irrational || !p[j].is_rational();
        if (!irrational) invalid("polynomial has no irrational non-constant coefficient");
      }
      break;
    }
    case Family::BetaPower:
      if (!beta) invalid("beta_power needs a base");
      break;
    case Family::MultiAlpha:
      if (alphas.empty()) invalid("multi_alpha needs alphas");
      if (alpha_index >= alphas.size()) invalid("multi_alpha index out of range");
      break;
    case Family::SlowGrowth:
      slow_growth_formula(formula);
      break;
    case Family::Explicit:
      if (terms.empty()) invalid("explicit sequence is empty");
      if (strictly_increasing) {
        for (std::size_t i = 1; i < terms.size(); ++i) {
          if (terms[i] <= terms[i - 1]) invalid("explicit terms not strictly increasing at index " + std::to_string(i + 1));
        }
      }
      break;
    case Family::GrowthConstrained:
      PhiFunction::parse(phi);
      break;
    default:
      break;
  }
}

SequenceSpec SequenceSpec::kronecker(const RealSpec& alpha) {
  SequenceSpec s;
  s.alpha = alpha;
  return s;
}
SequenceSpec SequenceSpec::poly(std::vector<Polynomial> polys) {
  SequenceSpec s;
  s.family = Family::PolyKronecker;
  s.polys = std::move(polys);
  return s;
}
SequenceSpec SequenceSpec::beta_power(const PisotBase& beta, const RealSpec& alpha) {
  SequenceSpec s;
  s.family = Family::BetaPower;
  s.beta = beta;
  s.alpha = alpha;
  return s;
}
SequenceSpec SequenceSpec::qn_plus_n(const RealSpec& alpha) {
  SequenceSpec s;
  s.family = Family::QnPlusN;
  s.alpha = alpha;
  return s;
}
SequenceSpec SequenceSpec::growth(const std::string& phi, const RealSpec& alpha) {
  SequenceSpec s;
  s.family = Family::GrowthConstrained;
  s.phi = phi;
  s.alpha = alpha;
  return s;
}
SequenceSpec SequenceSpec::multi_alpha(std::vector<RealSpec> alphas, std::size_t index, std::size_t k_cap) {
  SequenceSpec s;
  s.family = Family::MultiAlpha;
  s.alphas = std::move(alphas);
  s.alpha_index = index;
  s.k_cap = k_cap;
  if (!s.alphas.empty() && index < s.alphas.size()) s.alpha = s.alphas[index];
  return s;
}
SequenceSpec SequenceSpec::slow_growth(const std::string& formula, const RealSpec& alpha) {
  SequenceSpec s;
  s.family = Family::SlowGrowth;
  s.formula = formula;
  s.alpha = alpha;
  return s;
}
SequenceSpec SequenceSpec::explicit_terms(std::vector<mpz_class> terms, const RealSpec& alpha) {
  SequenceSpec s;
  s.family = Family::Explicit;
  s.terms = std::move(terms);
  s.alpha = alpha;
  return s;
}

// --- PointStream -----------------------------------------------------------

PointStream::PointStream(SequenceSpec spec, std::uint64_t n_points, double tol, std::shared_ptr<const Source> source,
                         std::shared_ptr<const std::vector<mpz_class>> multipliers)
    : spec_(std::make_shared<const SequenceSpec>(std::move(spec))),
      n_points_(n_points),
      tol_(tol),
      source_(std::move(source)),
      multipliers_(std::move(multipliers)) {}

TrackedReal PointStream::coordinate(std::uint64_t n, std::size_t dim) const {
  if (n == 0 || n > n_points_) invalid("point index " + std::to_string(n) + " outside 1.." + std::to_string(n_points_));
  return source_->at(n, dim);
}

std::vector<TrackedReal> PointStream::point(std::uint64_t n) const {
  std::vector<TrackedReal> out;
  for (std::size_t d = 0; d < dims(); ++d) out.push_back(coordinate(n, d));
  return out;
}

TrackedReal frac_multiple(const RealSpec& alpha, const mpz_class& a) {
  if (const auto& q = alpha.algebraic()) return TrackedReal((*q * a).frac());
  LinearForm form;
  form.add(alpha, a);
  return frac_of(form);
}

PointStream generate(const SequenceSpec& spec, std::uint64_t n_points, double tol) {
  if (n_points == 0) invalid("n_points must be >= 1");
  if (!(tol > 0 && tol < 0.5)) invalid("tolerance must lie in (0, 0.5)");
  spec.validate();
  switch (spec.family) {
    case Family::Kronecker:
      return PointStream(spec, n_points, tol, std::make_shared<MultiplierSource>(spec.alpha, [](std::uint64_t n) { return z(n); }));
    case Family::SlowGrowth:
      return PointStream(spec, n_points, tol, std::make_shared<MultiplierSource>(spec.alpha, slow_growth_formula(spec.formula)));
    case Family::PolyKronecker:
      return PointStream(spec, n_points, tol, std::make_shared<PolySource>(spec.polys));
    case Family::Explicit: {
      if (spec.terms.size() < n_points) invalid("explicit sequence has only " + std::to_string(spec.terms.size()) + " terms");
      return table_stream(spec, spec.alpha, std::vector<mpz_class>(spec.terms.begin(), spec.terms.begin() + static_cast<std::ptrdiff_t>(n_points)), tol);
    }
    case Family::QnPlusN: {
      auto built = build_qn_plus_n(spec.alpha, n_points);
      return table_stream(spec, spec.alpha, std::move(built.a), tol);
    }
    case Family::GrowthConstrained: {
      auto built = build_growth_constrained(PhiFunction::parse(spec.phi), spec.alpha, n_points);
      return table_stream(spec, spec.alpha, std::move(built.a), tol);
    }
    case Family::MultiAlpha: {
      const std::size_t k_cap = spec.k_cap == 0 ? n_points : spec.k_cap;
      auto built = build_multi_alpha(spec.alphas, k_cap, n_points);
      std::vector<mpz_class> a(built.streams[spec.alpha_index].multipliers()->begin(),
                               built.streams[spec.alpha_index].multipliers()->end());
      return table_stream(spec, spec.alphas[spec.alpha_index], std::move(a), tol);
    }
    case Family::BetaPower: {
      const PisotBase& base = *spec.beta;
      const auto* digits = spec.alpha.digit_source();
      if (base.is_integer()) {
        const unsigned long b = base.beta().a().get_ui();
        if (digits && digits->base() == b) {
          auto shared = std::get<std::shared_ptr<const DigitSource>>(spec.alpha.value());
          return PointStream(spec, n_points, tol, std::make_shared<ShiftSource>(shared));
        }
        return PointStream(spec, n_points, tol, std::make_shared<MultiplierSource>(spec.alpha, [b](std::uint64_t n) {
                             mpz_class r;
                             mpz_ui_pow_ui(r.get_mpz_t(), b, n);
                             return r;
                           }));
      }
      if (digits) {
        if (digits->base() != base.max_digit() + 1) {
          invalid("digit stream " + digits->name() + " must use digits 0.." + std::to_string(base.max_digit()) +
                  " to be read as a beta-expansion");
        }
        auto shared = std::get<std::shared_ptr<const DigitSource>>(spec.alpha.value());
        return PointStream(spec, n_points, tol, std::make_shared<BetaDigitSource>(base, shared));
      }
      const QuadraticSurd alpha = *spec.alpha.algebraic();
      if (!alpha.is_rational() && alpha.d() != base.beta().d()) {
        invalid("alpha " + alpha.str() + " is not in the field of beta " + base.str());
      }
      struct PowerSource final : PointStream::Source {
        PisotBase base;
        QuadraticSurd alpha;
        PowerSource(PisotBase b, QuadraticSurd a) : base(std::move(b)), alpha(std::move(a)) {}
        TrackedReal at(std::uint64_t n, std::size_t) const override { return TrackedReal((base.power(n) * alpha).frac()); }
      };
      return PointStream(spec, n_points, tol, std::make_shared<PowerSource>(base, alpha));
    }
  }
  invalid("unsupported family");
}

// --- builders --------------------------------------------------------------

QnPlusN build_qn_plus_n(const RealSpec& alpha, std::uint64_t n_points) {
  const CFExpansion cf = exact_cf(alpha, 8);
  if (!cf.exact()) throw Error(ErrorKind::InexactCF, "expansion of " + alpha.str() + " is not closed");
  QnPlusN out{denominators(cf, n_points), {}, PointStream(SequenceSpec{}, 1, 1e-12, nullptr)};
  out.a.reserve(n_points);
  for (std::uint64_t n = 1; n <= n_points; ++n) out.a.push_back(out.q[n] + z(n));
  out.points = table_stream(SequenceSpec::qn_plus_n(alpha), alpha, out.a, 1e-12);
  return out;
}

PhiFunction PhiFunction::parse(const std::string& name) {
  PhiFunction f;
  f.name_ = name;
  auto number = [&](const std::string& s) {
    mpz_class v;
    if (s.empty() || v.set_str(s, 10) != 0 || !v.fits_ulong_p()) throw Error(ErrorKind::InvalidPhi, "bad phi '" + name + "'");
    return v.get_ui();
  };
  if (name == "2^n") {
    f.kind_ = Kind::Exponential;
  } else if (name.rfind("n^", 0) == 0) {
    f.kind_ = Kind::Power;
    f.param_ = number(name.substr(2));
  } else if (name.size() >= 2 && name.back() == 'n') {
    f.kind_ = Kind::Linear;
    f.param_ = number(name.substr(0, name.size() - 1));
  } else {
    throw Error(ErrorKind::InvalidPhi, "unknown phi '" + name + "' (Kn, n^p, 2^n)");
  }
  return f;
}

mpz_class PhiFunction::operator()(std::uint64_t n) const {
  mpz_class r;
  switch (kind_) {
    case Kind::Linear:
      return z(n) * param_;
    case Kind::Power:
      if (n == 1) return 2;  // keeps phi(n) >= 2n at n = 1
      mpz_pow_ui(r.get_mpz_t(), z(n).get_mpz_t(), param_);
      return r;
    case Kind::Exponential:
      mpz_ui_pow_ui(r.get_mpz_t(), 2, n);
      return r;
  }
  return r;
}

GrowthConstrained build_growth_constrained(const PhiFunction& phi, const RealSpec& alpha, std::uint64_t n_points) {
  mpz_class prev = 0;
  for (std::uint64_t n = 1; n <= n_points; ++n) {
    const mpz_class v = phi(n);
    if (v < 2 * z(n)) throw Error(ErrorKind::InvalidPhi, phi.name() + " violates phi(n) >= 2n at n = " + std::to_string(n));
    if (v <= prev) throw Error(ErrorKind::InvalidPhi, phi.name() + " is not increasing at n = " + std::to_string(n));
    prev = v;
  }
  if (!alpha.is_algebraic() || alpha.is_rational()) {
    throw Error(ErrorKind::UnboundedQuotients, alpha.str() + " has no periodic continued fraction");
  }
  const CFExpansion cf = cf_expand(alpha, 8);
  if (!cf.periodic()) throw Error(ErrorKind::UnboundedQuotients, alpha.str() + " expansion not periodic");

  GrowthConstrained out{{}, {}, {1}, {}, PointStream(SequenceSpec{}, 1, 1e-12, nullptr)};
  out.certificate.L = cf.max_quotient() + 1;
  mpz_class q_prev = 0;  // q_{-1}
  std::size_t idx = 0;    // current n' candidate; q[idx] = q_idx
  for (std::uint64_t n = 1; n <= n_points; ++n) {
    const mpz_class target = phi(n) - z(n);
    // Smallest n' >= 0 with q_{n'} >= phi(n) - n (q is nondecreasing).
    while (out.q[idx] < target) {
      if (idx + 1 >= out.q.size()) {
        const mpz_class before = idx == 0 ? q_prev : out.q[idx - 1];
        out.q.push_back(cf.quotient(idx + 1) * out.q[idx] + before);
      }
      ++idx;
    }
    out.n_prime.push_back(idx);
    const mpz_class a = out.q[idx] + z(n);
    out.a.push_back(a);
    const mpz_class f = phi(n);
    if (a < f || a > out.certificate.L * f) {
      out.certificate.holds = false;
      out.certificate.failures.push_back(n);
    }
  }
  out.points = table_stream(SequenceSpec::growth(phi.name(), alpha), alpha, out.a, 1e-12);
  return out;
}

MultiAlpha build_multi_alpha(const std::vector<RealSpec>& alphas, std::size_t k_cap, std::uint64_t n_points) {
  if (alphas.empty()) invalid("build_multi_alpha needs at least one alpha");
  if (k_cap < 1) invalid("k_cap must be >= 1");
  if (k_cap < n_points) invalid("k_cap must cover n_points (a_n = q_n + n)");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (alphas[i].is_rational()) throw Error(ErrorKind::DegenerateInput, "alpha " + alphas[i].str() + " is rational");
    for (std::size_t j = 0; j < i; ++j) {
      if (alphas[i].str() == alphas[j].str()) invalid("alphas must be pairwise distinct");
    }
  }
  MultiAlpha out;
  // running[i] = min_{1<=n<=k} ||n alpha_i|| for alphas already admitted.
  std::vector<TrackedReal> running;
  std::vector<TrackedReal> dist_cache;
  auto dist = [&](std::size_t i, std::uint64_t n) { return distance_from_fraction(frac_multiple(alphas[i], z(n))); };
  auto smaller = [](const TrackedReal& x, const TrackedReal& y) {
    const Order o = compare(x, y);
    if (o == Order::Unresolved) throw Error(ErrorKind::PrecisionExhausted, "cannot order distances");
    return o == Order::Less;
  };
  mpz_class q_prev = 0;
  for (std::size_t k = 1; k <= k_cap; ++k) {
    for (std::size_t i = 0; i < running.size(); ++i) {
      TrackedReal d = dist(i, k);
      if (smaller(d, running[i])) running[i] = d;
    }
    if (k <= alphas.size()) {
      TrackedReal best = dist(k - 1, 1);
      for (std::uint64_t n = 2; n <= k; ++n) {
        TrackedReal d = dist(k - 1, n);
        if (smaller(d, best)) best = d;
      }
      running.push_back(best);
    }
    TrackedReal eps = running[0];
    for (std::size_t i = 1; i < running.size(); ++i) {
      if (smaller(running[i], eps)) eps = running[i];
    }
    const std::size_t m = std::min(k, alphas.size());
    const std::vector<RealSpec> active(alphas.begin(), alphas.begin() + static_cast<std::ptrdiff_t>(m));
    // Dirichlet guarantees a solution below eps^-m; the window past q_{k-1}
    // starts generous and doubles on failure.
    const double e = eps.approx();
    mpz_class width = z(static_cast<std::uint64_t>(std::ceil(std::pow(1.0 / e, static_cast<double>(m))))) * 4 + 64;
    for (;;) {
      try {
        q_prev = simultaneous_approx(active, eps, q_prev + width, q_prev + 1);
        break;
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::NotFound) throw;
        width *= 2;
        if (q_prev + width > mpz_class(1) << 60) throw;
      }
    }
    out.q.push_back(q_prev);
    out.eps.push_back(eps);
  }
  for (const auto& alpha : alphas) {
    std::vector<mpz_class> a;
    a.reserve(n_points);
    for (std::uint64_t n = 1; n <= n_points; ++n) a.push_back(out.q[n - 1] + z(n));
    out.streams.push_back(table_stream(SequenceSpec::multi_alpha(alphas, out.streams.size(), k_cap), alpha, std::move(a), 1e-12));
  }
  return out;
}

CounterexampleBoundary counterexample_boundary(unsigned depth, const mpz_class& work_budget) {
  if (depth < 1) invalid("depth must be >= 1");
  if (depth > 4) throw Error(ErrorKind::DepthTooLarge, "depth " + std::to_string(depth) + " exceeds 4");
  const QuadraticSurd alpha(2, -1, 1, 2);
  const RealSpec spec = RealSpec::surd(alpha);
  const CFExpansion cf = cf_expand(spec, 8);
  auto q_at = [&](const mpz_class& n) {
    if (n > work_budget) {
      throw Error(ErrorKind::DepthTooLarge, "convergent index " + n.get_str() + " exceeds work budget " + work_budget.get_str());
    }
    return convergent_at(cf, n.get_ui()).q;
  };
  auto fr = [&](const mpz_class& m) { return (alpha * m).frac(); };

  CounterexampleBoundary out{alpha, {}, TrackedReal(), TrackedReal(), {}};
  // n_1: smallest even n >= 2 with {(q_n + n) alpha} + alpha < 1 and {q_n alpha} < alpha.
  const QuadraticSurd one = QuadraticSurd::integer(1);
  for (mpz_class n = 2;; n += 2) {
    const mpz_class q = q_at(n);
    if ((fr(q + n) + alpha - one).sign() < 0 && (fr(q) - alpha).sign() < 0) {
      out.n.push_back(n);
      break;
    }
  }
  while (out.n.size() < depth) {
    const mpz_class& last = out.n.back();
    const mpz_class next = last + q_at(last + 2);
    if (next > work_budget) {
      throw Error(ErrorKind::DepthTooLarge, "n_" + std::to_string(out.n.size() + 1) + " = " +
                  (mpz_sizeinbase(next.get_mpz_t(), 10) > 40 ? std::string("~10^") + std::to_string(mpz_sizeinbase(next.get_mpz_t(), 10)) : next.get_str()) +
                  " exceeds work budget " + work_budget.get_str());
    }
    out.n.push_back(next);
  }
  std::vector<QuadraticSurd> lower, upper;
  for (const auto& n : out.n) {
    lower.push_back(fr(n));
    upper.push_back(fr(q_at(n) + n));
  }
  for (std::size_t i = 0; i + 1 < out.n.size(); ++i) {
    out.sandwich.push_back(lower[i] < lower[i + 1] && lower[i + 1] < upper[i + 1] && upper[i + 1] < upper[i]);
  }
  out.a_lower = TrackedReal(lower.back());
  out.a_upper = TrackedReal(upper.back());
  return out;
}

std::vector<TrackedReal> kesten_lengths(const RealSpec& alpha, std::size_t j_max) {
  if (alpha.is_rational()) throw Error(ErrorKind::DegenerateInput, "alpha " + alpha.str() + " is rational");
  if (j_max < 1) invalid("j_max must be >= 1");
  std::vector<TrackedReal> out;
  for (std::size_t j = 1; j <= j_max; ++j) out.push_back(frac_multiple(alpha, z(j)));
  return out;
}

}  // namespace remlab
