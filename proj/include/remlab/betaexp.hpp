#pragma once

// Beta-expansions in Pisot bases (integers >= 2 and quadratic Pisot
// numbers), distances ||beta^n|| via the conjugate identity, tail indices
// of sum ||beta^n||, and zero-block search in digit streams.

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "remlab/certified.hpp"
#include "remlab/real_spec.hpp"
#include "remlab/surd.hpp"

namespace remlab {

class PisotBase {
 public:
  static PisotBase integer(unsigned long b);
  /// Validates: algebraic integer of degree 2, beta > 1, |beta'| < 1.
  static PisotBase quadratic(const QuadraticSurd& beta);
  static PisotBase golden() { return quadratic(QuadraticSurd(1, 1, 2, 5)); }
  /// "2", "golden", or a real-spec surd "surd:(a,b,c,d)".
  static PisotBase parse(std::string_view text);

  int degree() const { return beta_.is_rational() ? 1 : 2; }
  bool is_integer() const { return degree() == 1; }
  const QuadraticSurd& beta() const { return beta_; }
  const QuadraticSurd& conjugate() const { return conjugate_; }
  /// ceil(beta) - 1, the largest admissible digit.
  unsigned max_digit() const { return max_digit_; }
  /// beta^n, exactly.
  QuadraticSurd power(unsigned long n) const;
  std::string str() const;

 private:
  PisotBase(QuadraticSurd beta, unsigned max_digit);
  QuadraticSurd beta_;
  QuadraticSurd conjugate_;
  unsigned max_digit_;
};

struct BetaExpansion {
  std::vector<unsigned> digits;  // d_1, d_2, ...
  PisotBase base;
};

/// First n greedy digits of x in [0, 1). Exact for algebraic x in the field
/// of beta; interval arithmetic with escalation otherwise.
BetaExpansion beta_expand(const RealSpec& x, const PisotBase& base, std::size_t n_digits);

/// ||beta^n||; for degree 2 and |beta'|^n < 1/2 this is |beta'|^n exactly.
TrackedReal pisot_power_distance(const PisotBase& base, unsigned long n);
CertifiedValue pisot_power_dist(const PisotBase& base, unsigned long n, double tol);

/// Smallest m with sum_{n>=m} ||beta^n|| < eps / max_digit (exact tail sums).
std::uint64_t tail_index(const PisotBase& base, const mpq_class& eps);

/// Quasi-greedy expansion of 1: preperiod u and period v with d*(1) = u v^inf.
struct QuasiGreedyOne {
  std::vector<unsigned> preperiod;
  std::vector<unsigned> period;
  unsigned at(std::size_t i) const;  // 0-based
};
QuasiGreedyOne quasi_greedy_one(const PisotBase& base);

/// Seeded digit stream that stays in the beta-shift: each digit is drawn
/// uniformly among the digits keeping every suffix lexicographically below
/// d*(1). Used as a stand-in input for non-integer bases; it is not claimed
/// to be normal. Digits are generated sequentially and cached.
class AdmissibleRandomDigits final : public DigitSource {
 public:
  AdmissibleRandomDigits(const PisotBase& base, std::uint64_t seed);
  unsigned base() const override { return base_.max_digit() + 1; }
  unsigned digit(std::uint64_t i) const override;
  std::string name() const override;
  const PisotBase& pisot() const { return base_; }

 private:
  PisotBase base_;
  QuasiGreedyOne limit_;
  std::uint64_t seed_;
  mutable std::mutex mu_;
  mutable std::vector<std::uint8_t> cache_;
  mutable std::size_t state_ = 0;
  mutable std::uint64_t rng_state_;
};

/// 1-based start of the first block of run_len zeros lying entirely within
/// digits 1..scan_cap.
std::optional<std::uint64_t> zero_run_find(const DigitSource& digits, std::uint64_t run_len, std::uint64_t scan_cap);

}  // namespace remlab
