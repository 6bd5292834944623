#include "remlab/contfrac.hpp"

#include <array>
#include <map>

#include "remlab/error.hpp"
#include "remlab/parallel.hpp"

namespace remlab {

namespace {

mpq_class to_rational(const BigFloat& x) {
  mpz_class m;
  const mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x.get());
  mpq_class q(m);
  if (e >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  }
  return q;
}

mpz_class floor_q(const mpq_class& x) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

CFExpansion expand_rational(mpq_class x, std::size_t n) {
  CFExpansion cf;
  while (cf.quotients.size() < n) {
    const mpz_class a = floor_q(x);
    cf.quotients.push_back(a);
    x -= a;
    if (x == 0) {
      cf.terminated = true;
      break;
    }
    x = 1 / x;
  }
  return cf;
}

// x = (P + sqrt(D)) / Q with Q | D - P^2 and D not a square.
CFExpansion expand_surd(const QuadraticSurd& s, std::size_t n) {
  mpz_class P, Q;
  const mpz_class D = s.b() * s.b() * s.c() * s.c() * s.d();
  if (s.b() > 0) {
    P = s.a() * s.c();
    Q = s.c() * s.c();
  } else {
    P = -s.a() * s.c();
    Q = -s.c() * s.c();
  }
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), D.get_mpz_t());

  // Runs past n until the state repeats, so surd expansions come back
  // closed; the step cap only guards pathological radicands.
  constexpr std::size_t kMaxSteps = 1 << 20;
  CFExpansion cf;
  std::map<std::pair<mpz_class, mpz_class>, std::size_t> seen;
  while (cf.quotients.size() < std::max(n, kMaxSteps)) {
    auto [it, fresh] = seen.try_emplace({P, Q}, cf.quotients.size());
    if (!fresh) {
      cf.period_start = it->second;
      cf.period_length = cf.quotients.size() - it->second;
      break;
    }
    mpz_class a;
    if (Q > 0) {
      const mpz_class num = P + root;
      mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), Q.get_mpz_t());
    } else {
      // (P + sqrt D)/Q is irrational, so floor = -(floor((P + root)/|Q|) + 1).
      const mpz_class num = P + root;
      const mpz_class absq = -Q;
      mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), absq.get_mpz_t());
      a = -a - 1;
    }
    cf.quotients.push_back(a);
    P = a * Q - P;
    const mpz_class rem = D - P * P;
    mpz_divexact(Q.get_mpz_t(), rem.get_mpz_t(), Q.get_mpz_t());
  }
  return cf;
}

CFExpansion expand_enclosed(const RealSpec& x, std::size_t n) {
  const PrecisionPolicy& policy = PrecisionPolicy::standard();
  for (Bits p = policy.start_bits; p <= policy.cap_bits; p *= 2) {
    const Enclosure e = x.enclose(p);
    mpq_class lo = to_rational(e.lo), hi = to_rational(e.hi);
    CFExpansion cf;
    while (cf.quotients.size() < n) {
      const mpz_class a = floor_q(lo);
      if (floor_q(hi) != a) break;
      lo -= a;
      hi -= a;
      if (lo == 0 || hi == 0) break;
      cf.quotients.push_back(a);
      // 1/x reverses the order of the endpoints.
      mpq_class nlo = 1 / hi, nhi = 1 / lo;
      lo = nlo;
      hi = nhi;
    }
    if (cf.quotients.size() >= n) return cf;
  }
  throw Error(ErrorKind::PrecisionExhausted,
              "cannot certify " + std::to_string(n) + " partial quotients of " + x.str());
}

using Mat = std::array<mpz_class, 4>;  // [[m0, m1], [m2, m3]]

Mat mul(const Mat& x, const Mat& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

}  // namespace

const mpz_class& CFExpansion::quotient(std::size_t i) const {
  if (i < quotients.size()) return quotients[i];
  if (periodic()) return quotients[*period_start + (i - *period_start) % period_length];
  if (terminated) throw Error(ErrorKind::NotFound, "rational expansion ends at index " + std::to_string(quotients.size() - 1));
  throw Error(ErrorKind::InexactCF, "partial quotient " + std::to_string(i) + " beyond truncated expansion");
}

mpz_class CFExpansion::max_quotient() const {
  if (!exact()) throw Error(ErrorKind::UnboundedQuotients, "expansion " + str() + " is not periodic");
  mpz_class m = 0;
  for (std::size_t i = 1; i < quotients.size(); ++i) m = std::max(m, quotients[i]);
  return m;
}

std::string CFExpansion::str() const {
  std::string out = "[";
  for (std::size_t i = 0; i < quotients.size(); ++i) {
    const bool open = periodic() && i == *period_start;
    if (i == 1) out += ";";
    else if (i > 1) out += ",";
    if (open) out += "(";
    out += quotients[i].get_str();
  }
  if (periodic()) out += ")";
  else if (!terminated) out += ",...";
  return out + "]";
}

CFExpansion cf_expand(const RealSpec& x, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidSpec, "cf_expand needs n >= 1");
  if (const auto& s = x.algebraic()) {
    if (s->is_rational()) return expand_rational(s->to_rational(), n);
    return expand_surd(*s, n);
  }
  return expand_enclosed(x, n);
}

std::vector<Convergent> convergents(const CFExpansion& cf, std::size_t n) {
  std::vector<Convergent> out;
  out.reserve(n);
  mpz_class p_prev = 1, q_prev = 0;
  mpz_class p = cf.quotient(0), q = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    const mpz_class& a = cf.quotient(i);
    mpz_class np = a * p + p_prev, nq = a * q + q_prev;
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(np);
    q = std::move(nq);
    out.push_back({i, p, q});
  }
  return out;
}

std::vector<mpz_class> denominators(const CFExpansion& cf, std::size_t n) {
  std::vector<mpz_class> q(n + 1);
  q[0] = 1;
  mpz_class prev = 0;
  for (std::size_t i = 1; i <= n; ++i) q[i] = cf.quotient(i) * q[i - 1] + (i >= 2 ? q[i - 2] : prev);
  return q;
}

Convergent convergent_at(const CFExpansion& cf, std::size_t n) {
  // [[p_n, p_{n-1}], [q_n, q_{n-1}]] = prod_{i<=n} [[a_i, 1], [1, 0]].
  auto step = [&](std::size_t i) { return Mat{cf.quotient(i), 1, 1, 0}; };
  Mat m = step(0);
  if (!cf.periodic() || n < cf.quotients.size() + cf.period_length) {
    for (std::size_t i = 1; i <= n; ++i) m = mul(m, step(i));
    return {n, m[0], m[2]};
  }
  const std::size_t start = *cf.period_start == 0 ? 1 : *cf.period_start;
  for (std::size_t i = 1; i < start; ++i) m = mul(m, step(i));
  Mat period{1, 0, 0, 1};
  for (std::size_t i = 0; i < cf.period_length; ++i) period = mul(period, step(start + i));
  std::size_t reps = (n - start + 1) / cf.period_length;
  const std::size_t tail = (n - start + 1) % cf.period_length;
  Mat power{1, 0, 0, 1};
  while (reps > 0) {
    if (reps & 1) power = mul(power, period);
    period = mul(period, period);
    reps >>= 1;
  }
  m = mul(m, power);
  const std::size_t done = n - tail;
  for (std::size_t i = done + 1; i <= n; ++i) m = mul(m, step(i));
  return {n, m[0], m[2]};
}

mpz_class simultaneous_approx(const std::vector<RealSpec>& alphas, const TrackedReal& eps,
                              const mpz_class& q_cap, const mpz_class& q_min) {
  if (alphas.empty()) throw Error(ErrorKind::InvalidSpec, "simultaneous_approx needs at least one alpha");
  if (eps.enclosure().lo.sign() <= 0 || mpfr_cmp_d(eps.enclosure().hi.get(), 0.5) > 0) {
    throw Error(ErrorKind::InvalidSpec, "eps must lie in (0, 1/2)");
  }
  if (q_min < 1 || q_cap < q_min) throw Error(ErrorKind::NotFound, "empty search window");
  if (q_cap > mpz_class(1) << 60) throw Error(ErrorKind::InvalidSpec, "q_cap above 2^60");
  const std::uint64_t lo_q = q_min.get_ui();
  const std::uint64_t hi_q = q_cap.get_ui();

  // 64-bit fixed-point filter: {q alpha} * 2^64 lies within 2q ulps above
  // q * F mod 2^64, so candidates failing by more than that are discarded.
  std::vector<std::uint64_t> fixed;
  for (const auto& a : alphas) {
    LinearForm form;
    form.add(a, 1);
    const Enclosure e = frac_of(form).enclose(128);
    BigFloat scaled(192);
    mpfr_mul_2ui(scaled.get(), e.lo.get(), 64, MPFR_RNDD);
    mpz_class f;
    mpfr_get_z(f.get_mpz_t(), scaled.get(), MPFR_RNDD);
    if (f < 0) f = 0;
    fixed.push_back(mpz_get_ui(f.get_mpz_t()));
  }
  BigFloat eps_scaled(192);
  mpfr_mul_2ui(eps_scaled.get(), eps.enclosure().hi.get(), 64, MPFR_RNDU);
  mpz_class eps_z;
  mpfr_get_z(eps_z.get_mpz_t(), eps_scaled.get(), MPFR_RNDU);
  const std::uint64_t eps64 = eps_z.get_ui();

  auto passes_exactly = [&](std::uint64_t q) {
    for (const auto& a : alphas) {
      LinearForm form;
      form.add(a, mpz_class(std::to_string(q)));
      const Order o = compare(distance_from_fraction(frac_of(form)), eps);
      if (o == Order::Unresolved) {
        throw Error(ErrorKind::PrecisionExhausted, "cannot compare ||" + std::to_string(q) + " alpha|| with eps");
      }
      if (o != Order::Less) return false;
    }
    return true;
  };
  auto scan = [&](std::uint64_t from, std::uint64_t to) -> std::optional<std::uint64_t> {
    for (std::uint64_t q = from; q <= to; ++q) {
      bool candidate = true;
      for (std::size_t i = 0; i < fixed.size() && candidate; ++i) {
        const std::uint64_t g = q * fixed[i] + q;  // centre of the error band
        const std::uint64_t d = std::min<std::uint64_t>(g, 0 - g);
        candidate = d < eps64 + q + 2;
      }
      if (candidate && passes_exactly(q)) return q;
    }
    return std::nullopt;
  };

  constexpr std::uint64_t kChunk = 1 << 16;
  const unsigned batch = worker_count();
  for (std::uint64_t base = lo_q; base <= hi_q;) {
    std::vector<std::optional<std::uint64_t>> found(batch);
    std::vector<std::uint64_t> starts;
    for (unsigned w = 0; w < batch; ++w) {
      const std::uint64_t s = base + w * kChunk;
      if (s > hi_q || s < base) break;
      starts.push_back(s);
    }
    parallel_for(starts.size(), [&](std::size_t w) {
      found[w] = scan(starts[w], std::min(hi_q, starts[w] + kChunk - 1));
    });
    for (std::size_t w = 0; w < starts.size(); ++w) {
      if (found[w]) return mpz_class(std::to_string(*found[w]));
    }
    const std::uint64_t next = starts.back() + kChunk;
    if (next <= base) break;
    base = next;
  }
  throw Error(ErrorKind::NotFound, "no q <= " + q_cap.get_str() + " approximates all alphas within eps");
}

}  // namespace remlab
