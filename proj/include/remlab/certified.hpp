#pragma once

// Certified reals: values carried either exactly (a SurdSum) or as a refinable
// enclosure, with three-way comparison that never guesses.

#include <gmpxx.h>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "remlab/bigfloat.hpp"
#include "remlab/real_spec.hpp"
#include "remlab/surd.hpp"

namespace remlab {

struct CertifiedValue {
  BigFloat midpoint;
  BigFloat radius;
  Bits precision = 0;

  static CertifiedValue from_enclosure(const Enclosure& e);
  double value() const { return midpoint.to_double(); }
  double radius_value() const { return radius.to_double(MPFR_RNDU); }
  /// "<midpoint> +/- <radius>", midpoint with 17 significant digits.
  std::string str() const;
};

class TrackedReal {
 public:
  using Refiner = std::function<Enclosure(Bits)>;

  TrackedReal() : TrackedReal(SurdSum()) {}
  TrackedReal(const SurdSum& exact, const PrecisionPolicy& policy = PrecisionPolicy::standard());  // NOLINT
  TrackedReal(const QuadraticSurd& exact)  // NOLINT(google-explicit-constructor)
      : TrackedReal(SurdSum(exact)) {}
  explicit TrackedReal(const mpq_class& q) : TrackedReal(SurdSum(q)) {}

  /// Value known only through `refine(prec)`, which must return an enclosure
  /// of width about 2^-prec (wider results only cost escalations).
  static TrackedReal approximate(Refiner refine, const PrecisionPolicy& policy = PrecisionPolicy::standard());

  bool is_exact() const { return exact_.has_value(); }
  const std::optional<SurdSum>& exact() const { return exact_; }

  /// Enclosure at the policy's starting precision (cached).
  const Enclosure& enclosure() const { return cached_; }
  Enclosure enclose(Bits prec) const;
  double approx() const { return cached_.midpoint().to_double(); }

  /// Escalates precision until the radius drops below tol.
  CertifiedValue certify(const BigFloat& tol, const PrecisionPolicy& policy = PrecisionPolicy::standard()) const;
  CertifiedValue certify(double tol, const PrecisionPolicy& policy = PrecisionPolicy::standard()) const;
  /// As certify, additionally requiring the enclosure to lie inside [0, 1).
  CertifiedValue certify_fraction(double tol, const PrecisionPolicy& policy = PrecisionPolicy::standard()) const;

  std::string str() const;

 private:
  std::optional<SurdSum> exact_;
  std::shared_ptr<const Refiner> refiner_;
  Enclosure cached_;
};

enum class Order { Less, Equal, Greater, Unresolved };

/// Exact when both sides are exact; otherwise escalates to the policy cap and
/// reports Unresolved rather than guessing (equal inexact values always end
/// up Unresolved).
Order compare(const TrackedReal& x, const TrackedReal& y, const PrecisionPolicy& policy = PrecisionPolicy::standard());

TrackedReal operator+(const TrackedReal& x, const TrackedReal& y);
TrackedReal operator-(const TrackedReal& x, const TrackedReal& y);
TrackedReal operator*(const TrackedReal& x, const mpz_class& m);

/// {x}; exact for exact inputs.
TrackedReal frac(const TrackedReal& x);
/// ||x|| for x already reduced to [0, 1).
TrackedReal distance_from_fraction(const TrackedReal& f);
/// floor(x), escalating as needed; throws PrecisionExhausted at the cap.
mpz_class certified_floor(const TrackedReal& x, const PrecisionPolicy& policy = PrecisionPolicy::standard());

/// Finite integer combination  algebraic + sum_k m_k * stream_k  of reals.
struct LinearForm {
  SurdSum algebraic;
  std::vector<std::pair<mpz_class, std::shared_ptr<const DigitSource>>> streams;

  /// Adds m * x; algebraic terms with different radicands stay exact.
  void add(const RealSpec& x, const mpz_class& m);
};

/// {form}: exact when no digit streams are involved; stream terms use exact
/// digit shifts for the base-power part of each multiplier.
TrackedReal frac_of(const LinearForm& form);

/// {m x} and ||m x|| as certified values with radius < tol.
CertifiedValue frac_part(const RealSpec& x, const mpz_class& m, double tol);
CertifiedValue nearest_int_dist(const RealSpec& x, const mpz_class& m, double tol);

}  // namespace remlab
