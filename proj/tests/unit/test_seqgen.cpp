#include <doctest.h>

#include <cmath>
#include <set>

#include "oracle.hpp"
#include "remlab/error.hpp"
#include "remlab/seqgen.hpp"

using namespace remlab;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidSpec;
}

std::vector<long> as_longs(const std::vector<mpz_class>& v) {
  std::vector<long> out;
  for (const auto& x : v) out.push_back(x.get_si());
  return out;
}

const oracle::Surd kGolden{-1, 1, 2, 5};
const RealSpec golden() { return RealSpec::parse("surd:(-1,1,2,5)"); }

}  // namespace

TEST_CASE("kronecker points match the oracle") {
  const PointStream p = generate(SequenceSpec::kronecker(golden()), 3000);
  CHECK(p.size() == 3000);
  CHECK(p.coordinate(1).approx() == doctest::Approx(0.6180339887));
  CHECK(p.coordinate(2).approx() == doctest::Approx(0.2360679775));
  CHECK(p.coordinate(3).approx() == doctest::Approx(0.8541019662));
  for (std::uint64_t n = 1; n <= 3000; n += 7) CHECK(std::fabs(p.coordinate(n).approx() - kGolden.approx(n)) < 1e-15);
  CHECK_THROWS_AS(p.coordinate(0), Error);
  CHECK_THROWS_AS(p.coordinate(3001), Error);
}

TEST_CASE("beta power and polynomial families") {
  const PointStream b = generate(SequenceSpec::beta_power(PisotBase::integer(2), RealSpec::parse("rational:1/3")), 3);
  CHECK(b.coordinate(1).exact()->sign() != 0);
  CHECK(compare(b.coordinate(1), TrackedReal(mpq_class(2, 3))) == Order::Equal);
  CHECK(compare(b.coordinate(2), TrackedReal(mpq_class(1, 3))) == Order::Equal);
  CHECK(compare(b.coordinate(3), TrackedReal(mpq_class(2, 3))) == Order::Equal);

  const Polynomial p{RealSpec::parse("rational:0"), RealSpec::parse("rational:0"), RealSpec::parse("surd:(0,1,1,2)")};
  const PointStream poly = generate(SequenceSpec::poly({p}), 2000);
  CHECK(poly.coordinate(1).approx() == doctest::Approx(0.41421356237));
  const oracle::Surd r2{0, 1, 1, 2};
  for (std::uint64_t n = 1; n <= 2000; n += 13) {
    CHECK(std::fabs(poly.coordinate(n).approx() - r2.approx(n * n)) < 1e-15);
  }
  const PointStream two = generate(SequenceSpec::poly({p, {RealSpec::parse("rational:1/2"), RealSpec::parse("surd:(0,1,1,3)")}}), 5);
  CHECK(two.dims() == 2);
  CHECK(two.point(2).size() == 2);
  CHECK_THROWS_AS(generate(SequenceSpec::poly({}), 5), Error);
}

TEST_CASE("golden beta powers with a digit stream") {
  // {phi^n alpha} for alpha = 1/2 equals {(phi^n) / 2} evaluated exactly.
  const PointStream s = generate(SequenceSpec::beta_power(PisotBase::golden(), RealSpec::parse("rational:1/2")), 30);
  for (unsigned long n = 1; n <= 30; ++n) {
    const double phi = (1 + std::sqrt(5.0L)) / 2;
    const long double v = std::pow(static_cast<long double>(phi), n) / 2;
    CHECK(s.coordinate(n).approx() == doctest::Approx(static_cast<double>(v - std::floor(v))).epsilon(1e-6));
  }
}

TEST_CASE("q_n + n builder") {
  const QnPlusN b = build_qn_plus_n(RealSpec::parse("surd:(2,-1,1,2)"), 20);
  CHECK(as_longs(std::vector<mpz_class>(b.a.begin(), b.a.begin() + 5)) == std::vector<long>{2, 4, 8, 16, 34});
  CHECK(b.q[0] == 1);
  for (std::size_t n = 1; n <= 20; ++n) CHECK(b.a[n - 1] == b.q[n] + n);
  CHECK(b.points.multipliers() != nullptr);
  CHECK(kind_of([] { build_qn_plus_n(RealSpec::parse("rational:1/3"), 5); }) == ErrorKind::DegenerateInput);
}

TEST_CASE("growth-constrained builder") {
  const GrowthConstrained g = build_growth_constrained(PhiFunction::parse("2n"), golden(), 200);
  CHECK(g.a[3] == 9);
  CHECK(g.certificate.holds);
  CHECK(g.certificate.L == 2);
  const PhiFunction phi = PhiFunction::parse("2n");
  for (std::uint64_t n = 1; n <= 200; ++n) {
    CHECK(phi(n) <= g.a[n - 1]);
    CHECK(g.a[n - 1] <= 2 * phi(n));
  }
  const PhiFunction sq = PhiFunction::parse("n^2");
  CHECK(sq(1) == 2);
  CHECK(sq(5) == 25);
  CHECK(PhiFunction::parse("2^n")(10) == 1024);
  CHECK(kind_of([] { PhiFunction::parse("n"); }) == ErrorKind::InvalidPhi);
  CHECK(kind_of([] { build_growth_constrained(PhiFunction::parse("1n"), golden(), 10); }) == ErrorKind::InvalidPhi);
  const GrowthConstrained g2 = build_growth_constrained(sq, golden(), 300);
  CHECK(g2.certificate.holds);
  for (std::uint64_t n = 1; n <= 300; ++n) CHECK(sq(n) <= g2.a[n - 1]);
}

TEST_CASE("multi-alpha builder") {
  // eps_k = min_{n, i <= k} ||n a_i||; q_k is the least q > q_{k-1} with ||q a_i|| < eps_k for i <= k.
  // Distances are compared as floor(2^256 ||x||), exact away from ties.
  const std::vector<oracle::Surd> os{{0, 1, 1, 2}, {0, 1, 1, 3}};
  auto dist = [&](std::size_t i, long m) {
    const mpz_class f = os[i].scaled_frac(m, 256), one = mpz_class(1) << 256;
    return std::min(f, mpz_class(one - f - 1));
  };
  const MultiAlpha m = build_multi_alpha({RealSpec::parse("surd:(0,1,1,2)"), RealSpec::parse("surd:(0,1,1,3)")}, 40, 40);
  REQUIRE(m.q.size() == 40);
  long q_prev = 0;
  mpz_class eps = mpz_class(1) << 256;
  for (long k = 1; k <= 40; ++k) {
    const std::size_t active = std::min<std::size_t>(k, 2);
    for (std::size_t i = 0; i < active; ++i) {
      for (long n = 1; n <= k; ++n) eps = std::min(eps, dist(i, n));
    }
    long q = q_prev + 1;
    for (;; ++q) {
      bool ok = true;
      for (std::size_t i = 0; i < active && ok; ++i) ok = dist(i, q) < eps;
      if (ok) break;
    }
    CHECK(m.q[k - 1] == q);
    q_prev = q;
  }
  CHECK(m.streams.size() == 2);
  CHECK(m.streams[0].size() == 40);
  CHECK(compare(m.streams[1].coordinate(3), frac_multiple(RealSpec::parse("surd:(0,1,1,3)"), m.q[2] + 3)) == Order::Equal);
}

TEST_CASE("counterexample boundary") {
  const CounterexampleBoundary b = counterexample_boundary(3);
  CHECK(as_longs(b.n) == std::vector<long>{2, 14, 470846});
  CHECK(b.sandwich == std::vector<bool>{true, true});
  CHECK(compare(b.a_lower, b.a_upper) == Order::Less);
  const CounterexampleBoundary b1 = counterexample_boundary(1);
  CHECK(as_longs(b1.n) == std::vector<long>{2});
  CHECK(kind_of([] { counterexample_boundary(4); }) == ErrorKind::DepthTooLarge);
  CHECK(kind_of([] { counterexample_boundary(0); }) == ErrorKind::InvalidSpec);
}

TEST_CASE("kesten lengths") {
  const auto k = kesten_lengths(golden(), 3);
  CHECK(k[0].approx() == doctest::Approx(0.618033988749895));
  CHECK(k[1].approx() == doctest::Approx(0.236067977499790));
  CHECK(kind_of([] { kesten_lengths(RealSpec::parse("rational:2/5"), 2); }) == ErrorKind::DegenerateInput);
}

TEST_CASE("slow growth and explicit families") {
  const PointStream s = generate(SequenceSpec::slow_growth("isqrt", RealSpec::parse("surd:(0,1,1,2)")), 30);
  for (std::uint64_t n = 1; n <= 30; ++n) {
    const long v = static_cast<long>(std::sqrt(static_cast<double>(n)));
    CHECK(compare(s.coordinate(n), frac_multiple(RealSpec::parse("surd:(0,1,1,2)"), v)) == Order::Equal);
  }
  CHECK_THROWS_AS(generate(SequenceSpec::slow_growth("nope", golden()), 3), Error);
  SequenceSpec e = SequenceSpec::explicit_terms({3, 1, 4}, golden());
  CHECK(compare(generate(e, 3).coordinate(2), frac_multiple(golden(), 1)) == Order::Equal);
  e.strictly_increasing = true;
  CHECK(kind_of([&] { e.validate(); }) == ErrorKind::InvalidSpec);
  CHECK(parse_family("qn_plus_n") == Family::QnPlusN);
  CHECK(kind_of([] { parse_family("bogus"); }) == ErrorKind::InvalidSpec);
}
