#pragma once

// Continued fractions: exact expansion of quadratic surds (period detected
// from the (P, Q) state recurrence), Euclid for rationals, interval
// expansion for digit streams; convergents; simultaneous approximation.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "remlab/certified.hpp"
#include "remlab/real_spec.hpp"

namespace remlab {

struct CFExpansion {
  std::vector<mpz_class> quotients;  // a0, a1, ... as computed
  bool terminated = false;           // rational input, expansion complete
  std::optional<std::size_t> period_start;
  std::size_t period_length = 0;

  bool periodic() const { return period_start.has_value(); }
  /// Closed form known: terminating or periodic.
  bool exact() const { return terminated || periodic(); }

  /// a_i, extending periodic expansions indefinitely. Throws InexactCF when
  /// i lies beyond a truncated expansion and NotFound past a terminated one.
  const mpz_class& quotient(std::size_t i) const;
  /// Largest partial quotient a_i over i >= 1 (periodic or terminated only).
  mpz_class max_quotient() const;

  /// "[a0;a1,a2,(p1,...)]"; truncated expansions end with ",...".
  std::string str() const;
};

/// First n partial quotients (fewer if a rational terminates sooner).
CFExpansion cf_expand(const RealSpec& x, std::size_t n);

struct Convergent {
  std::size_t n = 0;
  mpz_class p;
  mpz_class q;
};

/// Convergents 1..n by the three-term recurrence (seeded with q_0 = 1).
std::vector<Convergent> convergents(const CFExpansion& cf, std::size_t n);

/// p_n / q_n for a single large index; periodic expansions use powers of the
/// period matrix.
Convergent convergent_at(const CFExpansion& cf, std::size_t n);

/// q_0 .. q_n.
std::vector<mpz_class> denominators(const CFExpansion& cf, std::size_t n);

/// Smallest q in [q_min, q_cap] with ||q alpha_i|| < eps for every alpha.
/// Throws NotFound when the window holds no such q.
mpz_class simultaneous_approx(const std::vector<RealSpec>& alphas, const TrackedReal& eps,
                              const mpz_class& q_cap, const mpz_class& q_min = 1);

}  // namespace remlab
