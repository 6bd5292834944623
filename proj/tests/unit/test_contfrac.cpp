#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "remlab/contfrac.hpp"
#include "remlab/error.hpp"

using namespace remlab;

namespace {

struct TestSurd {
  const char* spec;
  oracle::Surd o;
};

const TestSurd kSurds[] = {
    {"surd:(-1,1,2,5)", {-1, 1, 2, 5}},  // golden conjugate
    {"surd:(2,-1,1,2)", {2, -1, 1, 2}},  // 2 - sqrt 2
    {"surd:(-1,1,1,2)", {-1, 1, 1, 2}},  // sqrt 2 - 1
};

std::vector<long> as_longs(const std::vector<mpz_class>& v) {
  std::vector<long> out;
  for (const auto& x : v) out.push_back(x.get_si());
  return out;
}

}  // namespace

TEST_CASE("expansions of surds are exact and periodic") {
  const CFExpansion g = cf_expand(RealSpec::parse("surd:(-1,1,2,5)"), 10);
  CHECK(g.periodic());
  CHECK(g.str() == "[0;(1)]");
  const CFExpansion a = cf_expand(RealSpec::parse("surd:(2,-1,1,2)"), 10);
  CHECK(a.str() == "[0;1,1,(2)]");
  CHECK(a.quotient(1000) == 2);
  CHECK(a.max_quotient() == 2);
  const CFExpansion s7 = cf_expand(RealSpec::parse("surd:(0,1,1,7)"), 3);
  CHECK(s7.str() == "[2;(1,1,1,4)]");
  const CFExpansion r = cf_expand(RealSpec::parse("rational:7/12"), 10);
  CHECK(r.terminated);
  CHECK(as_longs(r.quotients) == std::vector<long>{0, 1, 1, 2, 2});
  CHECK_THROWS_AS(r.quotient(5), Error);
}

TEST_CASE("surd expansions agree with the scaled-integer oracle") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> coef(-40, 40), den(1, 30);
  const long radicands[] = {2, 3, 5, 6, 7, 11, 13, 19, 31, 94};
  for (int i = 0; i < 200; ++i) {
    long b = coef(rng);
    if (b == 0) b = 3;
    const oracle::Surd o{coef(rng), b, den(rng), radicands[i % 10]};
    const QuadraticSurd s(o.a, o.b, o.c, o.d);
    const CFExpansion cf = cf_expand(RealSpec::surd(s), 40);
    CHECK(cf.periodic());
    // floor(2^600 x) bounds x within 2^-600.
    const mpz_class scale = mpz_class(1) << 600;
    const mpz_class num = oracle::floor_surd(scale * o.a, scale * o.b, o.c, o.d);
    const auto expect = oracle::cf_of_interval(num, scale);
    REQUIRE(expect.size() > 20);
    for (std::size_t k = 0; k < 20; ++k) CHECK(cf.quotient(k) == expect[k]);
  }
}

TEST_CASE("digit stream expansions are interval-certified and truncated") {
  const CFExpansion c = cf_expand(RealSpec::parse("digits:champernowne:10"), 8);
  CHECK_FALSE(c.exact());
  // 0.123456789101112... = [0;8,9,1,149083,1,1,1,4,...]
  CHECK(as_longs(c.quotients) == std::vector<long>{0, 8, 9, 1, 149083, 1, 1, 1});
  CHECK(c.str().find(",...") != std::string::npos);
  CHECK_THROWS_AS(c.quotient(20), Error);
  CHECK_THROWS_AS(c.max_quotient(), Error);
}

TEST_CASE("convergents") {
  const CFExpansion a = cf_expand(RealSpec::parse("surd:(2,-1,1,2)"), 20);
  const auto cs = convergents(a, 12);
  std::vector<long> q;
  for (const auto& c : cs) q.push_back(c.q.get_si());
  CHECK(std::vector<long>(q.begin(), q.begin() + 5) == std::vector<long>{1, 2, 5, 12, 29});
  for (std::size_t n = 1; n <= 12; ++n) CHECK((cs[n - 1].q % 2 == 0) == (n % 2 == 0));
  const auto fib = convergents(cf_expand(RealSpec::parse("surd:(-1,1,2,5)"), 20), 5);
  std::vector<long> f;
  for (const auto& c : fib) f.push_back(c.q.get_si());
  CHECK(f == std::vector<long>{1, 2, 3, 5, 8});
  for (std::size_t n : {1u, 7u, 40u, 300u}) {
    const Convergent c = convergent_at(a, n);
    const auto all = convergents(a, n);
    CHECK(c.q == all.back().q);
    CHECK(c.p == all.back().p);
  }
  const auto den = denominators(a, 5);
  CHECK(as_longs(den) == std::vector<long>{1, 1, 2, 5, 12, 29});
}

TEST_CASE("best approximation and approximation quality") {
  for (const auto& t : kSurds) {
    const CFExpansion cf = cf_expand(RealSpec::parse(t.spec), 20);
    const auto cs = convergents(cf, 13);
    for (std::size_t n = 2; n <= 12; ++n) {
      const mpz_class qn = cs[n - 1].q, qn1 = cs[n].q;
      for (mpz_class m = 1; m < qn1; ++m) {
        if (m == qn) continue;
        CHECK_MESSAGE(t.o.cmp_dist(qn, m) < 0, t.spec << " n=" << n << " m=" << m);
      }
      // |alpha - p/q| < 1/(q q'), i.e. |q alpha - p| < 1/q'
      const mpz_class p = cs[n - 1].p;
      const mpz_class A = qn * t.o.a - p * t.o.c, B = qn * t.o.b;
      // |A + B sqrt d| / c < 1 / q'  <=>  q' |A + B sqrt d| < c
      const int s = oracle::sign_surd(A, B, t.o.d);
      CHECK(oracle::sign_surd(qn1 * s * A - t.o.c, qn1 * s * B, t.o.d) < 0);
      if (n >= 4) CHECK(qn > n);
    }
  }
}

TEST_CASE("simultaneous approximation") {
  const RealSpec r2 = RealSpec::parse("surd:(0,1,1,2)"), r3 = RealSpec::parse("surd:(0,1,1,3)");
  // ||29 sqrt 2|| = 0.0122, so the first q below 1/100 is 70 (||70 sqrt 2|| = 0.00505).
  CHECK(simultaneous_approx({r2}, TrackedReal(mpq_class(1, 100)), 10000) == 70);
  CHECK(simultaneous_approx({RealSpec::parse("rational:1/4")}, TrackedReal(mpq_class(1, 10)), 100) == 4);
  // Brute-force oracle for two alphas.
  const oracle::Surd o2{0, 1, 1, 2}, o3{0, 1, 1, 3};
  auto close = [](const oracle::Surd& o, long q, const mpq_class& eps) {
    return o.cmp_frac(q, eps) < 0 || o.cmp_frac(q, 1 - eps) > 0;
  };
  for (const mpq_class eps : {mpq_class(1, 10), mpq_class(1, 20), mpq_class(3, 100), mpq_class(1, 80)}) {
    long expect = 0;
    for (long q = 1; q < 100000 && !expect; ++q) {
      if (close(o2, q, eps) && close(o3, q, eps)) expect = q;
    }
    CHECK(simultaneous_approx({r2, r3}, TrackedReal(eps), 100000) == expect);
    CHECK(simultaneous_approx({r2, r3}, TrackedReal(eps), 100000, expect + 1) > expect);
  }
  CHECK_THROWS_AS(simultaneous_approx({r2, r3}, TrackedReal(mpq_class(1, 1000)), 10), Error);
  CHECK(simultaneous_approx({r2}, TrackedReal(mpq_class(1, 2)), 10) == 1);
  CHECK_THROWS_AS(simultaneous_approx({}, TrackedReal(mpq_class(1, 4)), 10), Error);
}
