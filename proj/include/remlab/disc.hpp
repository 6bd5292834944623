#pragma once

// Measurement engine: interval membership with certified endpoints,
// discrepancy traces N*D_N(J), exact extreme discrepancy, run lengths,
// grid covering indices, window checks, BRS probes and refutation
// thresholds.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "remlab/certified.hpp"
#include "remlab/seqgen.hpp"

namespace remlab {

enum class Membership { Inside, Outside, Unresolved };

/// Half-open [a, b), or [a, 1) u [0, b) when wrap is set.
struct Interval {
  TrackedReal a;
  TrackedReal b;
  bool wrap = false;

  /// Endpoints in [0, 1]; wraps when a > b. a == b gives the empty interval.
  static Interval make(const TrackedReal& a, const TrackedReal& b);
  static Interval make(const mpq_class& a, const mpq_class& b) { return make(TrackedReal(a), TrackedReal(b)); }
  /// "a,b" where each side is a real spec or a decimal/fraction literal.
  static Interval parse(const std::string& text);

  TrackedReal length() const;
  Membership classify(const TrackedReal& x, const PrecisionPolicy& policy = PrecisionPolicy::standard()) const;
  std::string str() const;
};

/// Product of per-dimension intervals.
struct IntervalBox {
  std::vector<Interval> sides;
  Membership classify(const std::vector<TrackedReal>& x) const;
};

struct TraceSample {
  std::uint64_t N = 0;
  std::uint64_t count = 0;
  double signed_nd = 0;        // count - N * length
  double block_max = 0;        // max |N D_N| over (previous sample, N]
  double running_max = 0;      // max |N D_N| over [1, N]
};

struct DiscrepancyTrace {
  Interval interval;
  double length = 0;
  double length_radius = 0;    // |signed values| carry at most N * length_radius error
  std::uint64_t stride = 1;
  std::uint64_t n_max = 0;
  std::vector<TraceSample> samples;
  double abs_running_max = 0;  // over all N <= n_max
  std::uint64_t argmax_N = 0;
  std::uint64_t count_at_argmax = 0;
};

/// Memberships of x_1 .. x_n, classified chunk-parallel.
std::vector<Membership> classify_prefix(const PointStream& points, const IntervalBox& box, std::uint64_t n);

/// Throws UnresolvedMembership naming the first point that cannot be
/// classified.
DiscrepancyTrace discrepancy_trace(const PointStream& points, const Interval& interval, std::uint64_t n_max,
                                   std::uint64_t stride);

/// sup over all [a, b) in [0, 1] of |#{x_i in [a, b)}/N - (b - a)|, exactly.
mpq_class extreme_discrepancy(const std::vector<mpq_class>& points);

struct RunReport {
  std::uint64_t max_inside_run = 0;
  std::uint64_t inside_start = 0;   // 1-based, 0 when there is no run
  std::uint64_t max_outside_run = 0;
  std::uint64_t outside_start = 0;
  std::uint64_t unresolved_count = 0;
  std::vector<std::uint64_t> unresolved;  // first few indices
  std::uint64_t n = 0;
};

/// Membership pattern summary that merges associatively; unresolved points
/// break runs on both sides.
struct RunSummary {
  std::uint64_t first_index = 0;    // 1-based index of the first element
  std::uint64_t length = 0;
  std::uint64_t prefix = 0;        // leading run length of prefix_kind
  Membership prefix_kind = Membership::Unresolved;
  std::uint64_t suffix = 0;
  Membership suffix_kind = Membership::Unresolved;
  std::uint64_t best_in = 0, best_in_start = 0;
  std::uint64_t best_out = 0, best_out_start = 0;
  std::uint64_t unresolved = 0;

  static RunSummary single(Membership m, std::uint64_t index);
  static RunSummary merge(const RunSummary& left, const RunSummary& right);
};

RunReport run_report(const PointStream& points, const IntervalBox& box, std::uint64_t n_max);
RunReport run_report(const PointStream& points, const Interval& interval, std::uint64_t n_max);
/// Run report over an explicit membership pattern (used for synthetic data).
RunReport run_report(const std::vector<Membership>& pattern);

struct CoveringReport {
  unsigned l = 1;
  std::size_t dims = 1;
  std::vector<std::uint64_t> first_hit;  // per cell, 0 = not hit; cells in row-major order
  std::optional<std::uint64_t> K;        // max first hit when every cell is hit
  std::uint64_t cells_incomplete = 0;
  std::uint64_t scanned = 0;
};

/// Cells [j/l, (j+1)/l)^s; scans at most scan_cap points.
CoveringReport covering_index(const PointStream& points, unsigned l, std::size_t dims, std::uint64_t scan_cap);

struct WindowCheck {
  std::uint64_t K = 0;
  std::uint64_t n_max = 0;
  std::uint64_t violation_count = 0;
  std::vector<std::uint64_t> violations;          // first few window starts N
  std::uint64_t unresolved_count = 0;
  std::vector<std::uint64_t> unresolved_windows;  // first few
};

/// Windows x_{N+1} .. x_{N+K}, 0 <= N <= n_max - K, with no point in target.
WindowCheck window_covering_check(const PointStream& points, const IntervalBox& target, std::uint64_t K,
                                  std::uint64_t n_max);

enum class Verdict { Stable, Growing, Inconclusive };
std::string_view to_string(Verdict v);

struct ProbeConfig {
  double stable_tolerance = 1.05;
  double growth_factor = 2.0;
};

struct BrsProbe {
  std::uint64_t split = 0;
  double sup_head = 0;   // sup |N D_N| on [1, split]
  double sup_tail = 0;   // on (split, n_max]
  double ratio = 0;
  double log_slope = 0;  // least-squares slope of log running max vs log N past split
  Verdict verdict = Verdict::Inconclusive;
};

/// Heuristic label, never a proof. split must be a multiple of the stride.
BrsProbe brs_probe(const DiscrepancyTrace& trace, std::uint64_t split, const ProbeConfig& config = {});

struct Thresholds {
  mpz_class k_inside;   // smallest integer > 2c / (1 - |J|)
  mpz_class k_outside;  // smallest integer > 2c / |J|
};
Thresholds snbrs_thresholds(const mpq_class& c, const Interval& interval);

}  // namespace remlab
