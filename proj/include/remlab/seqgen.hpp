#pragma once

// Sequence families ({a_n alpha}), polynomial Weyl sequences and powers of
// Pisot numbers, plus the builders behind the counterexample, the
// growth-constrained and the multi-alpha constructions.

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "remlab/betaexp.hpp"
#include "remlab/certified.hpp"
#include "remlab/contfrac.hpp"
#include "remlab/real_spec.hpp"

namespace remlab {

enum class Family { Kronecker, PolyKronecker, BetaPower, QnPlusN, GrowthConstrained, MultiAlpha, SlowGrowth, Explicit };

std::string_view to_string(Family f);
Family parse_family(std::string_view name);

/// c_0 + c_1 n + c_2 n^2 + ...
using Polynomial = std::vector<RealSpec>;

struct SequenceSpec {
  Family family = Family::Kronecker;
  RealSpec alpha;
  std::vector<Polynomial> polys;        // PolyKronecker, one per dimension
  std::optional<PisotBase> beta;        // BetaPower
  std::string phi;                      // GrowthConstrained, see PhiFunction
  std::vector<RealSpec> alphas;         // MultiAlpha
  std::size_t alpha_index = 0;          // MultiAlpha: which alpha to evaluate
  std::size_t k_cap = 0;                // MultiAlpha: 0 means n_points
  std::string formula;                  // SlowGrowth: isqrt, icbrt, ilog2, div:K
  std::vector<mpz_class> terms;         // Explicit a_1, a_2, ...
  bool strictly_increasing = false;     // Explicit: validate the flag

  std::size_t dims() const { return family == Family::PolyKronecker ? polys.size() : 1; }
  /// Throws InvalidSpec on inconsistent fields.
  void validate() const;

  static SequenceSpec kronecker(const RealSpec& alpha);
  static SequenceSpec poly(std::vector<Polynomial> polys);
  static SequenceSpec beta_power(const PisotBase& beta, const RealSpec& alpha);
  static SequenceSpec qn_plus_n(const RealSpec& alpha);
  static SequenceSpec growth(const std::string& phi, const RealSpec& alpha);
  static SequenceSpec multi_alpha(std::vector<RealSpec> alphas, std::size_t index, std::size_t k_cap = 0);
  static SequenceSpec slow_growth(const std::string& formula, const RealSpec& alpha);
  static SequenceSpec explicit_terms(std::vector<mpz_class> terms, const RealSpec& alpha);
};

/// Random-access view of x_1, x_2, ... in [0,1)^s. Cheap to copy; copies
/// share immutable tables and may be used from several threads.
class PointStream {
 public:
  struct Source {
    virtual ~Source() = default;
    virtual TrackedReal at(std::uint64_t n, std::size_t dim) const = 0;
  };

  PointStream(SequenceSpec spec, std::uint64_t n_points, double tol, std::shared_ptr<const Source> source,
              std::shared_ptr<const std::vector<mpz_class>> multipliers = nullptr);

  const SequenceSpec& spec() const { return *spec_; }
  std::size_t dims() const { return spec_->dims(); }
  std::uint64_t size() const { return n_points_; }
  double tol() const { return tol_; }

  /// Coordinate `dim` of x_n, 1 <= n <= size().
  TrackedReal coordinate(std::uint64_t n, std::size_t dim = 0) const;
  std::vector<TrackedReal> point(std::uint64_t n) const;
  /// a_1 .. a_N when the family is {a_n alpha} with a tabulated a_n.
  const std::vector<mpz_class>* multipliers() const { return multipliers_.get(); }

 private:
  std::shared_ptr<const SequenceSpec> spec_;
  std::uint64_t n_points_;
  double tol_;
  std::shared_ptr<const Source> source_;
  std::shared_ptr<const std::vector<mpz_class>> multipliers_;
};

/// Lazily evaluated stream of the first n_points points.
PointStream generate(const SequenceSpec& spec, std::uint64_t n_points, double tol = 1e-12);

/// {a_n alpha} for an integer multiplier.
TrackedReal frac_multiple(const RealSpec& alpha, const mpz_class& a);

// --- builders --------------------------------------------------------------

struct QnPlusN {
  std::vector<mpz_class> q;  // q_0 .. q_N
  std::vector<mpz_class> a;  // a_1 .. a_N stored at a[0] .. a[N-1]
  PointStream points;
};
QnPlusN build_qn_plus_n(const RealSpec& alpha, std::uint64_t n_points);

/// Integer-valued, strictly increasing phi. Names: "Kn" (K*n, e.g. "2n"),
/// "n^p" (with phi(1) = 2 so that phi(n) >= 2n), "2^n".
class PhiFunction {
 public:
  static PhiFunction parse(const std::string& name);
  mpz_class operator()(std::uint64_t n) const;
  const std::string& name() const { return name_; }

 private:
  enum class Kind { Linear, Power, Exponential };
  std::string name_;
  Kind kind_ = Kind::Linear;
  unsigned long param_ = 2;
};

struct GrowthCertificate {
  mpz_class L;
  bool holds = true;                          // phi(n) <= a_n <= L phi(n) for all n
  std::vector<std::uint64_t> failures;        // indices violating it
};

struct GrowthConstrained {
  std::vector<mpz_class> a;                   // a_1 .. a_N
  std::vector<std::size_t> n_prime;           // n' for each n
  std::vector<mpz_class> q;                   // convergent denominators used
  GrowthCertificate certificate;
  PointStream points;
};
GrowthConstrained build_growth_constrained(const PhiFunction& phi, const RealSpec& alpha, std::uint64_t n_points);

struct MultiAlpha {
  std::vector<mpz_class> q;                   // q_1 .. q_K at q[0] .. q[K-1]
  std::vector<TrackedReal> eps;               // eps_1 .. eps_K
  std::vector<PointStream> streams;           // {(q_n + n) alpha_i}, one per alpha
};
MultiAlpha build_multi_alpha(const std::vector<RealSpec>& alphas, std::size_t k_cap, std::uint64_t n_points);

struct CounterexampleBoundary {
  QuadraticSurd alpha;                        // 2 - sqrt(2)
  std::vector<mpz_class> n;                   // n_1 .. n_depth
  TrackedReal a_lower;                        // {n_depth alpha}
  TrackedReal a_upper;                        // {(q_{n_depth} + n_depth) alpha}
  std::vector<bool> sandwich;                 // ordering check for i < depth
};
/// work_budget bounds n_depth (the largest convergent index evaluated).
CounterexampleBoundary counterexample_boundary(unsigned depth, const mpz_class& work_budget = 10000000);

/// {j alpha} for j = 1 .. j_max.
std::vector<TrackedReal> kesten_lengths(const RealSpec& alpha, std::size_t j_max);

}  // namespace remlab
