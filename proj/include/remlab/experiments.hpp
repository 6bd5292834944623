#pragma once

// Theorem-level experiments on top of the disc/seqgen operations, their
// configuration, and JSON/CSV artifact output.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "remlab/disc.hpp"
#include "remlab/seqgen.hpp"

namespace remlab {

// --- checks --------------------------------------------------------------------

struct CountIdentity {
  std::uint64_t k = 0;
  std::uint64_t n_max = 0;
  bool equal = true;                  // counts agree for every N in [k, n_max]
  std::uint64_t first_difference = 0; // smallest N where they differ
  std::uint64_t count_left = 0;       // totals at n_max
  std::uint64_t count_right = 0;
};

/// #{k <= n <= N: x_n in J} vs #{k <= n <= N: y_n in J} for all N <= n_max.
/// Throws UnresolvedMembership if any membership cannot be certified.
CountIdentity count_identity(const PointStream& x, const PointStream& y, const Interval& interval, std::uint64_t k,
                             std::uint64_t n_max);

/// Same check over coordinates evaluated once by materialize().
CountIdentity count_identity(const std::vector<TrackedReal>& x, const std::vector<TrackedReal>& y,
                             const Interval& interval, std::uint64_t k);

/// Coordinates x_1 .. x_n of a one-dimensional stream, evaluated in parallel.
std::vector<TrackedReal> materialize(const PointStream& points, std::uint64_t n);

/// J = [a, a + alpha) known only through a_lower < a <= a_upper.
struct SandwichInterval {
  TrackedReal a_lower, a_upper, end_lower, end_upper;

  explicit SandwichInterval(const CounterexampleBoundary& boundary);
  /// Unresolved when the verdict depends on where a lies in the sandwich.
  Membership classify(const TrackedReal& x) const;
};

struct MismatchReport {
  std::uint64_t n_max = 0;
  std::uint64_t mismatches = 0;          // {n alpha} not in J, {(q_n + n) alpha} in J
  std::vector<std::uint64_t> mismatch_at;
  std::uint64_t reverse_after_n1 = 0;    // {n alpha} in J, {(q_n + n) alpha} not in J, n > n_1
  std::vector<std::uint64_t> reverse_at;
  std::vector<std::uint64_t> unresolved; // n whose verdict depends on the unknown a
};
MismatchReport counterexample_mismatches(const CounterexampleBoundary& boundary, std::uint64_t n_max);

struct DistanceCheck {
  std::uint64_t n_max = 0;
  std::vector<std::uint64_t> failures;   // n with ||q_{n'} alpha|| >= min_{l<=n} ||l alpha||
};
/// ||q_{n'} alpha|| < min_{1<=l<=n} ||l alpha|| for n = 1 .. n_max.
DistanceCheck growth_distance_check(const GrowthConstrained& g, const RealSpec& alpha, std::uint64_t n_max);

// --- configuration ---------------------------------------------------------------

struct ExperimentConfig {
  std::string experiment;                     // measure, kesten, theorem1, ...
  std::optional<SequenceSpec> sequence;       // from a spec file
  std::string alpha;                          // RealSpec syntax; empty = experiment default
  std::vector<std::string> alphas;            // theorem6
  std::vector<std::string> intervals;         // "a,b"
  std::uint64_t n_max = 0;                    // 0 = experiment default
  std::uint64_t stride = 0;                   // 0 = n_max / 1000
  std::uint64_t split = 0;                    // 0 = n_max / 1000
  double tol = 1e-12;
  std::uint64_t seed = 0;
  std::string beta = "2";
  std::string phi = "2n";
  std::string formula = "isqrt";
  std::string poly;                           // "c0;c1;c2", one dimension
  unsigned j = 1;
  unsigned depth = 3;
  unsigned k_max = 0;                         // 0 = experiment default
  unsigned l = 10;
  double max_unresolved_fraction = 0;
  std::string out_csv;
  std::string out_json;

  /// Fills fields from a JSON object; unknown keys are InvalidSpec.
  void merge_json(const nlohmann::json& j);
  /// Throws InvalidSpec on inconsistent values.
  void validate() const;
};

/// SequenceSpec from {"family": ..., "alpha": ..., "params": {...}}.
SequenceSpec sequence_from_json(const nlohmann::json& j);

struct ExperimentResult {
  nlohmann::json summary;
  std::string csv;                            // trace rows, empty when none
  std::uint64_t checked = 0;                  // memberships examined
  std::uint64_t unresolved = 0;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

/// Trace rows "N,count,signed_ND,abs_running_max" with a header line.
std::string trace_csv(const DiscrepancyTrace& trace);
nlohmann::json to_json(const CertifiedValue& v);
nlohmann::json to_json(const RunReport& r);
nlohmann::json to_json(const CoveringReport& r);
nlohmann::json to_json(const BrsProbe& p);

/// Writes through a temporary file in the same directory and renames it.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace remlab
