#include "remlab/experiments.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "remlab/error.hpp"
#include "remlab/parallel.hpp"

namespace remlab {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::InvalidSpec, msg); }

constexpr const char* kGoldenConjugate = "surd:(-1,1,2,5)";
constexpr const char* kTwoMinusSqrt2 = "surd:(2,-1,1,2)";
constexpr std::size_t kKeep = 20;

mpz_class z(std::uint64_t v) {
  mpz_class r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return r;
}

IntervalBox box_of(const Interval& j) { return IntervalBox{{j}}; }

void keep(std::vector<std::uint64_t>& v, std::uint64_t n) {
  if (v.size() < kKeep) v.push_back(n);
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t pick(std::uint64_t value, std::uint64_t fallback) { return value == 0 ? fallback : value; }

std::uint64_t default_stride(const ExperimentConfig& c, std::uint64_t n_max) {
  return pick(c.stride, std::max<std::uint64_t>(1, n_max / 1000));
}

std::uint64_t default_split(const ExperimentConfig& c, std::uint64_t n_max, std::uint64_t stride) {
  std::uint64_t s = pick(c.split, n_max / 1000);
  s = std::max(stride, s / stride * stride);
  return s;
}

std::string alpha_or(const ExperimentConfig& c, const char* fallback) { return c.alpha.empty() ? fallback : c.alpha; }

Interval interval_or(const ExperimentConfig& c, std::size_t i, const std::string& fallback) {
  return Interval::parse(i < c.intervals.size() ? c.intervals[i] : fallback);
}

json interval_json(const Interval& j) {
  return json{{"a", j.a.str()}, {"b", j.b.str()}, {"wrap", j.wrap},
              {"length", to_json(CertifiedValue::from_enclosure(j.length().enclosure()))}};
}

json exact_json(const TrackedReal& x, double tol) {
  json out = to_json(x.certify(tol));
  if (x.is_exact() && x.exact()->str().size() <= 200) out["exact"] = x.exact()->str();
  return out;
}

// {k1 alpha} < {k2 alpha} pairs with k1, k2 in [lo, hi].
std::vector<std::pair<unsigned, unsigned>> ordered_pairs(const RealSpec& alpha, unsigned lo, unsigned hi) {
  std::vector<std::pair<unsigned, unsigned>> out;
  for (unsigned k1 = lo; k1 <= hi; ++k1) {
    for (unsigned k2 = lo; k2 <= hi; ++k2) {
      if (compare(frac_multiple(alpha, k1), frac_multiple(alpha, k2)) == Order::Less) out.emplace_back(k1, k2);
    }
  }
  return out;
}

void add_run(ExperimentResult& r, const RunReport& rep) {
  r.checked += rep.n;
  r.unresolved += rep.unresolved_count;
}

// --- experiments -------------------------------------------------------------------

SequenceSpec sequence_or_kronecker(const ExperimentConfig& c, const char* fallback) {
  if (c.sequence) return *c.sequence;
  return SequenceSpec::kronecker(RealSpec::parse(alpha_or(c, fallback)));
}

ExperimentResult run_measure(const ExperimentConfig& c) {
  const std::uint64_t n_max = pick(c.n_max, 100000);
  const std::uint64_t stride = default_stride(c, n_max);
  const SequenceSpec spec = sequence_or_kronecker(c, kGoldenConjugate);
  const PointStream points = generate(spec, n_max, c.tol);
  ExperimentResult r;
  r.summary["sequence"] = to_string(spec.family);
  if (points.dims() == 1) {
    const Interval J = interval_or(c, 0, "0,1/2");
    const DiscrepancyTrace trace = discrepancy_trace(points, J, n_max, stride);
    const RunReport runs = run_report(points, J, n_max);
    add_run(r, runs);
    r.summary["interval"] = interval_json(J);
    r.summary["probe"] = to_json(brs_probe(trace, default_split(c, n_max, stride)));
    r.summary["abs_running_max"] = trace.abs_running_max;
    r.summary["runs"] = to_json(runs);
    r.csv = trace_csv(trace);
  } else {
    IntervalBox box;
    for (std::size_t d = 0; d < points.dims(); ++d) box.sides.push_back(interval_or(c, d, "0,1/2"));
    const RunReport runs = run_report(points, box, n_max);
    add_run(r, runs);
    r.summary["runs"] = to_json(runs);
  }
  r.summary["n_max"] = n_max;
  return r;
}

ExperimentResult run_kesten(const ExperimentConfig& c) {
  const std::uint64_t n_max = pick(c.n_max, 1000000);
  const std::uint64_t stride = default_stride(c, n_max);
  const std::uint64_t split = default_split(c, n_max, stride);
  const RealSpec alpha = RealSpec::parse(alpha_or(c, kGoldenConjugate));
  const TrackedReal len = kesten_lengths(alpha, c.j).back();
  const PointStream points = generate(SequenceSpec::kronecker(alpha), n_max, c.tol);
  const Interval kesten = Interval::make(TrackedReal(mpq_class(0)), len);
  const Interval contrast = interval_or(c, 0, "0,1/2");
  const DiscrepancyTrace t1 = discrepancy_trace(points, kesten, n_max, stride);
  const DiscrepancyTrace t2 = discrepancy_trace(points, contrast, n_max, stride);
  ExperimentResult r;
  r.checked = 2 * n_max;
  r.summary = {{"alpha", alpha.str()},
               {"j", c.j},
               {"n_max", n_max},
               {"stride", stride},
               {"kesten_interval", interval_json(kesten)},
               {"kesten_probe", to_json(brs_probe(t1, split))},
               {"contrast_interval", interval_json(contrast)},
               {"contrast_probe", to_json(brs_probe(t2, split))}};
  r.csv = trace_csv(t1);
  return r;
}

ExperimentResult run_theorem1(const ExperimentConfig& c) {
  const std::uint64_t n_max = pick(c.n_max, 100000);
  const PisotBase beta = PisotBase::parse(c.beta);
  RealSpec alpha;
  if (c.alpha.empty() || c.alpha == "admissible") {
    if (beta.is_integer() && c.alpha.empty()) {
      alpha = RealSpec::parse("digits:champernowne:" + beta.str());
    } else {
      alpha = RealSpec::digits(std::make_shared<AdmissibleRandomDigits>(beta, c.seed));
    }
  } else {
    alpha = RealSpec::parse(c.alpha);
  }
  const Interval J = interval_or(c, 0, "0,1/1024");
  const PointStream points = generate(SequenceSpec::beta_power(beta, alpha), n_max, c.tol);
  const RunReport runs = run_report(points, J, n_max);
  ExperimentResult r;
  add_run(r, runs);
  r.summary = {{"beta", beta.str()}, {"alpha", alpha.str()}, {"n_max", n_max}, {"interval", interval_json(J)},
               {"runs", to_json(runs)}};
  if (const DigitSource* digits = alpha.digit_source()) {
    std::uint64_t best = 0, best_start = 0, run = 0;
    for (std::uint64_t i = 1; i <= n_max; ++i) {
      run = digits->digit(i) == 0 ? run + 1 : 0;
      if (run > best) {
        best = run;
        best_start = i - run + 1;
      }
    }
    r.summary["longest_zero_block"] = {{"length", best}, {"start", best_start}, {"scanned_digits", n_max}};
  }
  if (!beta.is_integer()) {
    const CertifiedValue len = CertifiedValue::from_enclosure(J.length().enclosure());
    mpq_class eps(len.value());
    if (eps > 0) r.summary["tail_index"] = tail_index(beta, eps);
  }
  return r;
}

ExperimentResult run_theorem3_1(const ExperimentConfig& c) {
  const std::uint64_t n_max = pick(c.n_max, 10000);
  const unsigned k_max = c.k_max == 0 ? 5 : c.k_max;
  const RealSpec alpha = RealSpec::parse(alpha_or(c, kTwoMinusSqrt2));
  const QnPlusN built = build_qn_plus_n(alpha, n_max);
  const auto xs = materialize(built.points, n_max);
  const auto ys = materialize(generate(SequenceSpec::kronecker(alpha), n_max, c.tol), n_max);
  ExperimentResult r;
  json pairs = json::array();
  bool all = true;
  for (auto [k1, k2] : ordered_pairs(alpha, 1, k_max)) {
    const Interval J = Interval::make(frac_multiple(alpha, k1), frac_multiple(alpha, k2));
    const std::uint64_t k = std::max<std::uint64_t>({k1 + 1, k2 + 1, 4});
    const CountIdentity id = count_identity(xs, ys, J, k);
    r.checked += 2 * n_max;
    all = all && id.equal;
    pairs.push_back({{"k1", k1}, {"k2", k2}, {"k", k}, {"equal", id.equal}, {"first_difference", id.first_difference},
                     {"count", id.count_left}});
  }
  json a = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(10, built.a.size()); ++i) a.push_back(built.a[i].get_str());
  r.summary = {{"alpha", alpha.str()}, {"n_max", n_max}, {"a_head", a}, {"pairs", pairs}, {"all_equal", all}};
  return r;
}

ExperimentResult run_theorem3_2(const ExperimentConfig& c) {
  const std::uint64_t n_max = pick(c.n_max, 10000);
  const CounterexampleBoundary b = counterexample_boundary(c.depth);
  const MismatchReport m = counterexample_mismatches(b, n_max);
  ExperimentResult r;
  r.checked = n_max;
  r.unresolved = m.unresolved.size();
  json n = json::array();
  for (const auto& v : b.n) n.push_back(v.get_str());
  r.summary = {{"alpha", b.alpha.str()},
               {"depth", c.depth},
               {"n", n},
               {"a_lower", exact_json(b.a_lower, c.tol)},
               {"a_upper", exact_json(b.a_upper, c.tol)},
               {"sandwich", b.sandwich},
               {"n_max", n_max},
               {"mismatches", m.mismatches},
               {"mismatch_at", m.mismatch_at},
               {"reverse_after_n1", m.reverse_after_n1},
               {"reverse_at", m.reverse_at},
               {"unresolved_at", m.unresolved}};
  return r;
}

ExperimentResult run_theorem4(const ExperimentConfig& c) {
  const std::uint64_t n_max = pick(c.n_max, 10000);
  const unsigned k_max = c.k_max == 0 ? 50 : c.k_max;
  const SequenceSpec spec =
      c.sequence ? *c.sequence : SequenceSpec::slow_growth(c.formula, RealSpec::parse(alpha_or(c, "surd:(0,1,1,2)")));
  const Interval J = interval_or(c, 0, "0,1/2");
  const RunReport runs = run_report(generate(spec, n_max, c.tol), J, n_max);
  ExperimentResult r;
  add_run(r, runs);
  const std::uint64_t longest = std::max(runs.max_inside_run, runs.max_outside_run);
  r.summary = {{"sequence", to_string(spec.family)}, {"formula", spec.formula}, {"alpha", spec.alpha.str()},
               {"interval", interval_json(J)}, {"n_max", n_max}, {"runs", to_json(runs)},
               {"k_max", k_max}, {"exceeds_k_max", longest > k_max}};
  return r;
}

ExperimentResult run_theorem5(const ExperimentConfig& c) {
  const std::uint64_t n_max = pick(c.n_max, 1000);
  const RealSpec alpha = RealSpec::parse(alpha_or(c, kGoldenConjugate));
  const GrowthConstrained g = build_growth_constrained(PhiFunction::parse(c.phi), alpha, n_max);
  const DistanceCheck d = growth_distance_check(g, alpha, n_max);
  ExperimentResult r;
  r.checked = n_max;
  json a = json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(10, g.a.size()); ++i) a.push_back(g.a[i].get_str());
  std::vector<std::uint64_t> fails(g.certificate.failures.begin(),
                                   g.certificate.failures.begin() +
                                       static_cast<std::ptrdiff_t>(std::min(kKeep, g.certificate.failures.size())));
  r.summary = {{"phi", c.phi},
               {"alpha", alpha.str()},
               {"n_max", n_max},
               {"L", g.certificate.L.get_str()},
               {"a_head", a},
               {"certificate_holds", g.certificate.holds},
               {"certificate_failures", fails},
               {"distance_failures", d.failures.size()},
               {"distance_failures_at", std::vector<std::uint64_t>(d.failures.begin(), d.failures.begin() +
                                              static_cast<std::ptrdiff_t>(std::min(kKeep, d.failures.size())))}};
  return r;
}

ExperimentResult run_theorem6(const ExperimentConfig& c) {
  const std::uint64_t n_max = pick(c.n_max, 1000);
  const unsigned pair_max = c.k_max == 0 ? 3 : c.k_max;
  std::vector<RealSpec> alphas;
  for (const auto& s : c.alphas.empty() ? std::vector<std::string>{"surd:(0,1,1,2)", "surd:(0,1,1,3)"} : c.alphas) {
    alphas.push_back(RealSpec::parse(s));
  }
  const MultiAlpha m = build_multi_alpha(alphas, n_max, n_max);
  ExperimentResult r;
  json ks = json::array();
  bool increasing = true, distances = true;
  for (std::size_t k = 1; k <= m.q.size(); ++k) {
    if (k > 1 && m.q[k - 1] <= m.q[k - 2]) increasing = false;
    json row = {{"k", k}, {"q", m.q[k - 1].get_str()}, {"eps", to_json(m.eps[k - 1].certify(c.tol))}};
    for (std::size_t i = 0; i < std::min(k, alphas.size()); ++i) {
      const bool ok = compare(distance_from_fraction(frac_multiple(alphas[i], m.q[k - 1])), m.eps[k - 1]) == Order::Less;
      distances = distances && ok;
    }
    if (k <= 10) ks.push_back(row);
  }
  json identities = json::array();
  bool all = true;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const auto xs = materialize(m.streams[i], n_max);
    const auto ys = materialize(generate(SequenceSpec::kronecker(alphas[i]), n_max, c.tol), n_max);
    for (auto [k1, k2] : ordered_pairs(alphas[i], 0, pair_max)) {
      const Interval J = Interval::make(frac_multiple(alphas[i], k1), frac_multiple(alphas[i], k2));
      const std::uint64_t k = std::max<std::uint64_t>({k1 + 1, k2 + 1, i + 1});
      const CountIdentity id = count_identity(xs, ys, J, k);
      r.checked += 2 * n_max;
      all = all && id.equal;
      identities.push_back({{"alpha", i + 1}, {"k1", k1}, {"k2", k2}, {"k", k}, {"equal", id.equal},
                            {"first_difference", id.first_difference}});
    }
  }
  json names = json::array();
  for (const auto& a : alphas) names.push_back(a.str());
  r.summary = {{"alphas", names}, {"n_max", n_max}, {"q_head", ks}, {"q_increasing", increasing},
               {"distances_below_eps", distances}, {"identities", identities}, {"all_equal", all}};
  return r;
}

ExperimentResult run_lemma3(const ExperimentConfig& c) {
  const std::uint64_t n_max = pick(c.n_max, 100000);
  const SequenceSpec spec = sequence_or_kronecker(c, kGoldenConjugate);
  const PointStream points = generate(spec, n_max, c.tol);
  const CoveringReport cov = covering_index(points, c.l, points.dims(), n_max);
  ExperimentResult r;
  r.summary = {{"sequence", to_string(spec.family)}, {"n_max", n_max}, {"covering", to_json(cov)}};
  if (!cov.K) return r;
  IntervalBox target;
  for (std::size_t d = 0; d < points.dims(); ++d) {
    target.sides.push_back(interval_or(c, d, "0,2/" + std::to_string(c.l)));
  }
  const WindowCheck w = window_covering_check(points, target, *cov.K, n_max);
  r.checked = n_max;
  r.unresolved = w.unresolved_count;
  r.summary["window"] = {{"K", w.K},
                         {"violation_count", w.violation_count},
                         {"violations", w.violations},
                         {"unresolved_count", w.unresolved_count},
                         {"unresolved_windows", w.unresolved_windows}};
  return r;
}

ExperimentResult run_polyrun(const ExperimentConfig& c) {
  const std::uint64_t n_max = pick(c.n_max, 1000000);
  SequenceSpec spec;
  if (c.sequence) {
    spec = *c.sequence;
  } else {
    Polynomial p;
    std::stringstream ss(c.poly.empty() ? "0;0;surd:(0,1,1,2)" : c.poly);
    for (std::string part; std::getline(ss, part, ';');) {
      p.push_back(RealSpec::parse(part.find(':') == std::string::npos ? "rational:" + part : part));
    }
    spec = SequenceSpec::poly({p});
  }
  const PointStream points = generate(spec, n_max, c.tol);
  IntervalBox box;
  for (std::size_t d = 0; d < points.dims(); ++d) box.sides.push_back(interval_or(c, d, "0,1/10"));
  const std::vector<Membership> member = classify_prefix(points, box, n_max);
  const std::uint64_t head = std::max<std::uint64_t>(1, n_max / 10);
  const RunReport early = run_report(std::vector<Membership>(member.begin(), member.begin() + static_cast<std::ptrdiff_t>(head)));
  const RunReport full = run_report(member);
  ExperimentResult r;
  add_run(r, full);
  const double e = static_cast<double>(std::max(early.max_inside_run, early.max_outside_run));
  const double f = static_cast<double>(std::max(full.max_inside_run, full.max_outside_run));
  r.summary = {{"sequence", to_string(spec.family)}, {"n_max", n_max}, {"checkpoint", head},
               {"runs_checkpoint", to_json(early)}, {"runs", to_json(full)}, {"growth", e > 0 ? f / e : 0.0}};
  return r;
}

}  // namespace

// --- checks ------------------------------------------------------------------------

namespace {

CountIdentity compare_counts(const std::vector<Membership>& mx, const std::vector<Membership>& my,
                             const Interval& interval, std::uint64_t k) {
  if (k < 1) invalid("k must be >= 1");
  if (mx.size() != my.size()) invalid("count identity needs streams of equal length");
  CountIdentity out;
  out.k = k;
  out.n_max = mx.size();
  for (std::uint64_t n = k; n <= mx.size(); ++n) {
    if (mx[n - 1] == Membership::Unresolved || my[n - 1] == Membership::Unresolved) {
      throw Error(ErrorKind::UnresolvedMembership, "membership of point " + std::to_string(n) + " in " + interval.str());
    }
    out.count_left += mx[n - 1] == Membership::Inside;
    out.count_right += my[n - 1] == Membership::Inside;
    if (out.equal && out.count_left != out.count_right) {
      out.equal = false;
      out.first_difference = n;
    }
  }
  return out;
}

std::vector<Membership> classify_all(const std::vector<TrackedReal>& x, const Interval& interval) {
  std::vector<Membership> out(x.size());
  parallel_for(x.size(), [&](std::size_t i) { out[i] = interval.classify(x[i]); });
  return out;
}

}  // namespace

CountIdentity count_identity(const PointStream& x, const PointStream& y, const Interval& interval, std::uint64_t k,
                             std::uint64_t n_max) {
  return compare_counts(classify_prefix(x, box_of(interval), n_max), classify_prefix(y, box_of(interval), n_max),
                        interval, k);
}

CountIdentity count_identity(const std::vector<TrackedReal>& x, const std::vector<TrackedReal>& y,
                             const Interval& interval, std::uint64_t k) {
  return compare_counts(classify_all(x, interval), classify_all(y, interval), interval, k);
}

std::vector<TrackedReal> materialize(const PointStream& points, std::uint64_t n) {
  if (points.dims() != 1) invalid("materialize needs a one-dimensional stream");
  if (n > points.size()) invalid("n exceeds the stream length");
  std::vector<TrackedReal> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = points.coordinate(i + 1); });
  return out;
}

SandwichInterval::SandwichInterval(const CounterexampleBoundary& b)
    : a_lower(b.a_lower),
      a_upper(b.a_upper),
      end_lower(b.a_lower + TrackedReal(b.alpha)),
      end_upper(b.a_upper + TrackedReal(b.alpha)) {}

Membership SandwichInterval::classify(const TrackedReal& x) const {
  auto at_least = [](Order o) { return o == Order::Greater || o == Order::Equal; };
  auto at_most = [](Order o) { return o == Order::Less || o == Order::Equal; };
  if (at_least(compare(x, a_upper)) && compare(x, end_lower) == Order::Less) return Membership::Inside;
  if (at_most(compare(x, a_lower)) || at_least(compare(x, end_upper))) return Membership::Outside;
  return Membership::Unresolved;
}

MismatchReport counterexample_mismatches(const CounterexampleBoundary& b, std::uint64_t n_max) {
  const RealSpec alpha = RealSpec::surd(b.alpha);
  const QnPlusN built = build_qn_plus_n(alpha, n_max);
  const PointStream plain = generate(SequenceSpec::kronecker(alpha), n_max);
  const SandwichInterval J(b);
  std::vector<Membership> mx(n_max), my(n_max);
  parallel_for(n_max, [&](std::size_t i) {
    mx[i] = J.classify(plain.coordinate(i + 1));
    my[i] = J.classify(built.points.coordinate(i + 1));
  });
  MismatchReport out;
  out.n_max = n_max;
  const std::uint64_t n1 = b.n.front().get_ui();
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const Membership p = mx[n - 1], q = my[n - 1];
    if (p == Membership::Outside && q == Membership::Inside) {
      ++out.mismatches;
      keep(out.mismatch_at, n);
    } else if (n > n1 && p == Membership::Inside && q == Membership::Outside) {
      ++out.reverse_after_n1;
      keep(out.reverse_at, n);
    } else if (p == Membership::Unresolved || q == Membership::Unresolved) {
      // Listed only when some value of a in the sandwich makes it a mismatch.
      auto can = [](Membership m, Membership want) { return m == want || m == Membership::Unresolved; };
      const bool forward = can(p, Membership::Outside) && can(q, Membership::Inside);
      const bool reverse = n > n1 && can(p, Membership::Inside) && can(q, Membership::Outside);
      if (forward || reverse) out.unresolved.push_back(n);
    }
  }
  return out;
}

DistanceCheck growth_distance_check(const GrowthConstrained& g, const RealSpec& alpha, std::uint64_t n_max) {
  if (n_max > g.a.size()) invalid("n_max exceeds the built sequence");
  DistanceCheck out;
  out.n_max = n_max;
  TrackedReal best;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const TrackedReal d = distance_from_fraction(frac_multiple(alpha, z(n)));
    if (n == 1 || compare(d, best) == Order::Less) best = d;
    const TrackedReal dq = distance_from_fraction(frac_multiple(alpha, g.q[g.n_prime[n - 1]]));
    if (compare(dq, best) != Order::Less) out.failures.push_back(n);
  }
  return out;
}

// --- configuration -------------------------------------------------------------------

namespace {

std::vector<std::string> string_list(const json& v, const std::string& key) {
  std::vector<std::string> out;
  if (v.is_string()) return {v.get<std::string>()};
  if (!v.is_array()) invalid("'" + key + "' must be a string or a list of strings");
  for (const auto& e : v) {
    if (!e.is_string()) invalid("'" + key + "' entries must be strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::uint64_t count_value(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0 && d == static_cast<double>(static_cast<std::uint64_t>(d))) return static_cast<std::uint64_t>(d);
  }
  invalid("'" + key + "' must be a non-negative integer");
}

std::string text_value(const json& v, const std::string& key) {
  if (!v.is_string()) invalid("'" + key + "' must be a string");
  return v.get<std::string>();
}

mpz_class integer_value(const json& v) {
  mpz_class out;
  if (v.is_number_integer()) return mpz_class(std::to_string(v.get<long long>()));
  if (v.is_string() && out.set_str(v.get<std::string>(), 10) == 0) return out;
  invalid("explicit terms must be integers");
}

}  // namespace

SequenceSpec sequence_from_json(const json& j) {
  if (!j.is_object()) invalid("sequence spec must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "family" && key != "alpha" && key != "params") invalid("unknown sequence key '" + key + "'");
  }
  if (!j.contains("family")) invalid("sequence spec needs 'family'");
  SequenceSpec s;
  s.family = parse_family(text_value(j["family"], "family"));
  if (j.contains("alpha")) s.alpha = RealSpec::parse(text_value(j["alpha"], "alpha"));
  const json params = j.value("params", json::object());
  if (!params.is_object()) invalid("'params' must be an object");
  for (const auto& [key, v] : params.items()) {
    if (key == "polys") {
      if (!v.is_array()) invalid("'polys' must be a list of coefficient lists");
      for (const auto& p : v) {
        Polynomial poly;
        for (const auto& c : string_list(p, "polys")) poly.push_back(RealSpec::parse(c));
        s.polys.push_back(poly);
      }
    } else if (key == "beta") {
      s.beta = PisotBase::parse(text_value(v, key));
    } else if (key == "phi") {
      s.phi = text_value(v, key);
    } else if (key == "alphas") {
      for (const auto& a : string_list(v, key)) s.alphas.push_back(RealSpec::parse(a));
    } else if (key == "index") {
      s.alpha_index = count_value(v, key);
    } else if (key == "k_cap") {
      s.k_cap = count_value(v, key);
    } else if (key == "formula") {
      s.formula = text_value(v, key);
    } else if (key == "terms") {
      if (!v.is_array()) invalid("'terms' must be a list");
      for (const auto& t : v) s.terms.push_back(integer_value(t));
    } else if (key == "terms_file") {
      const std::string path = text_value(v, key);
      std::ifstream in(path);
      if (!in) invalid("cannot open terms file '" + path + "'");
      std::string line;
      for (std::size_t ln = 1; std::getline(in, line); ++ln) {
        line.erase(std::remove_if(line.begin(), line.end(), ::isspace), line.end());
        if (line.empty()) continue;
        mpz_class t;
        if (t.set_str(line, 10) != 0) invalid(path + ":" + std::to_string(ln) + ": not an integer: '" + line + "'");
        s.terms.push_back(t);
      }
    } else if (key == "strictly_increasing") {
      if (!v.is_boolean()) invalid("'strictly_increasing' must be a boolean");
      s.strictly_increasing = v.get<bool>();
    } else {
      invalid("unknown params key '" + key + "'");
    }
  }
  if (s.family == Family::BetaPower && !s.beta) s.beta = PisotBase::integer(2);
  if (s.family == Family::GrowthConstrained && s.phi.empty()) s.phi = "2n";
  if (s.family == Family::SlowGrowth && s.formula.empty()) s.formula = "isqrt";
  if (s.family == Family::MultiAlpha && s.alphas.empty()) s.alphas.push_back(s.alpha);
  s.validate();
  return s;
}

void ExperimentConfig::merge_json(const json& j) {
  if (!j.is_object()) invalid("config must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "experiment") experiment = text_value(v, key);
    else if (key == "sequence") sequence = sequence_from_json(v);
    else if (key == "alpha") alpha = text_value(v, key);
    else if (key == "alphas") alphas = string_list(v, key);
    else if (key == "interval" || key == "intervals") intervals = string_list(v, key);
    else if (key == "n_max") n_max = count_value(v, key);
    else if (key == "stride") stride = count_value(v, key);
    else if (key == "split") split = count_value(v, key);
    else if (key == "tol") {
      if (!v.is_number()) invalid("'tol' must be a number");
      tol = v.get<double>();
    } else if (key == "seed") seed = count_value(v, key);
    else if (key == "beta") beta = text_value(v, key);
    else if (key == "phi") phi = text_value(v, key);
    else if (key == "formula") formula = text_value(v, key);
    else if (key == "poly") poly = text_value(v, key);
    else if (key == "j") this->j = static_cast<unsigned>(count_value(v, key));
    else if (key == "depth") depth = static_cast<unsigned>(count_value(v, key));
    else if (key == "k_max") k_max = static_cast<unsigned>(count_value(v, key));
    else if (key == "l") l = static_cast<unsigned>(count_value(v, key));
    else if (key == "max_unresolved_fraction") {
      if (!v.is_number()) invalid("'max_unresolved_fraction' must be a number");
      max_unresolved_fraction = v.get<double>();
    } else if (key == "out_csv") out_csv = text_value(v, key);
    else if (key == "out_json") out_json = text_value(v, key);
    else invalid("unknown config key '" + key + "'");
  }
}

void ExperimentConfig::validate() const {
  static const std::vector<std::string> known = {"measure", "kesten",   "theorem1", "theorem3-1", "theorem3-2",
                                                 "theorem4", "theorem5", "theorem6", "lemma3",     "polyrun"};
  if (std::find(known.begin(), known.end(), experiment) == known.end()) invalid("unknown experiment '" + experiment + "'");
  if (!(tol > 0 && tol < 0.5)) invalid("tol must lie in (0, 0.5)");
  if (n_max != 0 && stride > n_max) invalid("stride must not exceed n_max");
  if (stride != 0 && split != 0 && split % stride != 0) invalid("split must be a multiple of stride");
  if (j < 1) invalid("j must be >= 1");
  if (l < 1) invalid("l must be >= 1");
  if (!(max_unresolved_fraction >= 0 && max_unresolved_fraction <= 1)) invalid("max_unresolved_fraction must lie in [0, 1]");
  if (!out_csv.empty() && !out_json.empty() && out_csv == out_json) invalid("out_csv and out_json must differ");
}

ExperimentResult run_experiment(const ExperimentConfig& c) {
  c.validate();
  ExperimentResult r;
  if (c.experiment == "measure") r = run_measure(c);
  else if (c.experiment == "kesten") r = run_kesten(c);
  else if (c.experiment == "theorem1") r = run_theorem1(c);
  else if (c.experiment == "theorem3-1") r = run_theorem3_1(c);
  else if (c.experiment == "theorem3-2") r = run_theorem3_2(c);
  else if (c.experiment == "theorem4") r = run_theorem4(c);
  else if (c.experiment == "theorem5") r = run_theorem5(c);
  else if (c.experiment == "theorem6") r = run_theorem6(c);
  else if (c.experiment == "lemma3") r = run_lemma3(c);
  else r = run_polyrun(c);
  r.summary["experiment"] = c.experiment;
  r.summary["unresolved"] = r.unresolved;
  return r;
}

// --- output ------------------------------------------------------------------------

std::string trace_csv(const DiscrepancyTrace& trace) {
  std::string out = "N,count,signed_ND,abs_running_max\n";
  for (const auto& s : trace.samples) {
    out += std::to_string(s.N) + "," + std::to_string(s.count) + "," + fmt17(s.signed_nd) + "," +
           fmt17(s.running_max) + "\n";
  }
  return out;
}

json to_json(const CertifiedValue& v) { return json{{"value", v.value()}, {"radius", v.radius_value()}}; }

json to_json(const RunReport& r) {
  return json{{"n", r.n},
              {"max_inside_run", r.max_inside_run},
              {"inside_start", r.inside_start},
              {"max_outside_run", r.max_outside_run},
              {"outside_start", r.outside_start},
              {"unresolved_count", r.unresolved_count},
              {"unresolved", r.unresolved}};
}

json to_json(const CoveringReport& r) {
  json out{{"l", r.l}, {"dims", r.dims}, {"cells_incomplete", r.cells_incomplete}, {"scanned", r.scanned}};
  out["K"] = r.K ? json(*r.K) : json(nullptr);
  if (r.first_hit.size() <= 1000) out["first_hit"] = r.first_hit;
  return out;
}

json to_json(const BrsProbe& p) {
  return json{{"split", p.split},   {"sup_head", p.sup_head},   {"sup_tail", p.sup_tail},
              {"ratio", p.ratio},   {"log_slope", p.log_slope}, {"verdict", std::string(to_string(p.verdict))}};
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidSpec, "cannot write '" + tmp.string() + "'");
    out << content;
    out.close();
    if (!out) {
      fs::remove(tmp);
      throw Error(ErrorKind::InvalidSpec, "write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorKind::InvalidSpec, "cannot move output into '" + path + "': " + ec.message());
  }
}

}  // namespace remlab
