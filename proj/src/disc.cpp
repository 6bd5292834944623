#include "remlab/disc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "remlab/error.hpp"
#include "remlab/parallel.hpp"

namespace remlab {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::InvalidSpec, msg); }

constexpr std::uint64_t kChunk = 1 << 14;
constexpr std::size_t kKeepIndices = 20;

TrackedReal parse_endpoint(std::string text) {
  while (!text.empty() && text.front() == ' ') text.erase(0, 1);
  while (!text.empty() && text.back() == ' ') text.pop_back();
  if (text.find(':') != std::string::npos) {
    const RealSpec spec = RealSpec::parse(text);
    if (const auto& q = spec.algebraic()) return TrackedReal(*q);
    return TrackedReal::approximate([spec](Bits p) { return spec.enclose(p); });
  }
  mpq_class q;
  const auto dot = text.find('.');
  const auto exp = text.find_first_of("eE");
  if (exp != std::string::npos) invalid("exponent notation not accepted in interval endpoint '" + text + "'");
  if (dot != std::string::npos) {
    // Decimal literal, read exactly.
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    mpz_class num;
    if (digits.empty() || num.set_str(digits, 10) != 0) invalid("bad interval endpoint '" + text + "'");
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, text.size() - dot - 1);
    q = mpq_class(num, den);
  } else if (q.set_str(text, 10) != 0) {
    invalid("bad interval endpoint '" + text + "'");
  }
  q.canonicalize();
  return TrackedReal(q);
}

Order must_compare(const TrackedReal& x, const TrackedReal& y, const char* what) {
  const Order o = compare(x, y);
  if (o == Order::Unresolved) throw Error(ErrorKind::UnresolvedMembership, std::string("cannot order ") + what);
  return o;
}

}  // namespace

std::vector<Membership> classify_prefix(const PointStream& points, const IntervalBox& box, std::uint64_t n) {
  if (n > points.size()) {
    invalid("n_max " + std::to_string(n) + " exceeds stream length " + std::to_string(points.size()));
  }
  if (box.sides.size() != points.dims()) invalid("interval box dimension does not match the stream");
  std::vector<Membership> out(n);
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::uint64_t lo = c * kChunk, hi = std::min<std::uint64_t>(n, lo + kChunk);
    for (std::uint64_t i = lo; i < hi; ++i) out[i] = box.classify(points.point(i + 1));
  });
  return out;
}

namespace {

IntervalBox single(const Interval& j) { return IntervalBox{{j}}; }

}  // namespace

// --- Interval ----------------------------------------------------------------

Interval Interval::make(const TrackedReal& a, const TrackedReal& b) {
  const TrackedReal zero, one(mpq_class(1));
  for (const TrackedReal* e : {&a, &b}) {
    if (must_compare(*e, zero, "interval endpoint with 0") == Order::Less ||
        must_compare(*e, one, "interval endpoint with 1") == Order::Greater) {
      invalid("interval endpoint " + e->str() + " outside [0, 1]");
    }
  }
  return Interval{a, b, must_compare(a, b, "interval endpoints") == Order::Greater};
}

Interval Interval::parse(const std::string& text) {
  int depth = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '(' || ch == '[') ++depth;
    if (ch == ')' || ch == ']') --depth;
    if (ch == ',' && depth == 0) return make(parse_endpoint(text.substr(0, i)), parse_endpoint(text.substr(i + 1)));
  }
  invalid("interval must be written 'a,b', got '" + text + "'");
}

TrackedReal Interval::length() const {
  if (!wrap) return b - a;
  return TrackedReal(mpq_class(1)) - a + b;
}

Membership Interval::classify(const TrackedReal& x, const PrecisionPolicy& policy) const {
  const Order xa = compare(x, a, policy);
  if (!wrap) {
    if (xa == Order::Less) return Membership::Outside;
    if (xa == Order::Unresolved) return Membership::Unresolved;
    const Order xb = compare(x, b, policy);
    if (xb == Order::Unresolved) return Membership::Unresolved;
    return xb == Order::Less ? Membership::Inside : Membership::Outside;
  }
  if (xa == Order::Greater || xa == Order::Equal) return Membership::Inside;
  const Order xb = compare(x, b, policy);
  if (xb == Order::Less) return Membership::Inside;
  if (xa == Order::Unresolved || xb == Order::Unresolved) return Membership::Unresolved;
  return Membership::Outside;
}

std::string Interval::str() const {
  return std::string(wrap ? "wrap" : "") + "[" + a.str() + ", " + b.str() + ")";
}

Membership IntervalBox::classify(const std::vector<TrackedReal>& x) const {
  bool unresolved = false;
  for (std::size_t d = 0; d < sides.size(); ++d) {
    const Membership m = sides[d].classify(x[d]);
    if (m == Membership::Outside) return Membership::Outside;
    unresolved = unresolved || m == Membership::Unresolved;
  }
  return unresolved ? Membership::Unresolved : Membership::Inside;
}

// --- traces ------------------------------------------------------------------

DiscrepancyTrace discrepancy_trace(const PointStream& points, const Interval& interval, std::uint64_t n_max,
                                   std::uint64_t stride) {
  if (n_max < 1) invalid("n_max must be >= 1");
  if (stride < 1 || stride > n_max) invalid("stride must lie in [1, n_max]");
  if (points.dims() != 1) invalid("discrepancy traces need a one-dimensional stream");
  const std::vector<Membership> member = classify_prefix(points, single(interval), n_max);
  for (std::uint64_t i = 0; i < n_max; ++i) {
    if (member[i] == Membership::Unresolved) {
      throw Error(ErrorKind::UnresolvedMembership,
                  "point " + std::to_string(i + 1) + " = " + points.coordinate(i + 1).str() + " vs " + interval.str());
    }
  }
  const CertifiedValue len = CertifiedValue::from_enclosure(interval.length().enclosure());
  DiscrepancyTrace t{interval, len.value(), len.radius_value(), stride, n_max, {}, 0, 0, 0};
  std::uint64_t count = 0;
  double block = 0;
  for (std::uint64_t N = 1; N <= n_max; ++N) {
    if (member[N - 1] == Membership::Inside) ++count;
    const double v = static_cast<double>(count) - static_cast<double>(N) * t.length;
    const double a = std::fabs(v);
    block = std::max(block, a);
    if (a > t.abs_running_max) {
      t.abs_running_max = a;
      t.argmax_N = N;
      t.count_at_argmax = count;
    }
    if (N % stride == 0 || N == n_max) {
      t.samples.push_back({N, count, v, block, t.abs_running_max});
      block = 0;
    }
  }
  return t;
}

// --- extreme discrepancy ------------------------------------------------------

mpq_class extreme_discrepancy(const std::vector<mpq_class>& points) {
  if (points.empty()) invalid("extreme_discrepancy needs at least one point");
  std::vector<mpq_class> xs = points;
  for (auto& x : xs) {
    x.canonicalize();
    if (x < 0 || x >= 1) invalid("points must lie in [0, 1)");
  }
  std::sort(xs.begin(), xs.end());
  const std::size_t N = xs.size();
  // G(t) = #{x < t} - N t. Walk the candidates t in {0} u {x_i} u {1} in
  // order, each at t itself and just above t (#{x <= t} - N t); any earlier
  // entry can serve as a and any later one as b.
  std::vector<mpq_class> values;
  std::vector<mpq_class> cands;
  cands.push_back(0);
  for (const auto& x : xs) {
    if (x != cands.back()) cands.push_back(x);
  }
  if (cands.back() != 1) cands.push_back(1);
  std::size_t below = 0;
  for (const auto& t : cands) {
    while (below < N && xs[below] < t) ++below;
    std::size_t upto = below;
    while (upto < N && xs[upto] == t) ++upto;
    values.push_back(mpq_class(below) - N * t);
    if (t != 1) values.push_back(mpq_class(upto) - N * t);
  }
  mpq_class best = 0, lo = values[0], hi = values[0];
  for (std::size_t j = 1; j < values.size(); ++j) {
    best = std::max(best, mpq_class(values[j] - lo));
    best = std::max(best, mpq_class(hi - values[j]));
    lo = std::min(lo, values[j]);
    hi = std::max(hi, values[j]);
  }
  mpq_class out = best / N;
  out.canonicalize();
  return out;
}

// --- runs --------------------------------------------------------------------

RunSummary RunSummary::single(Membership m, std::uint64_t index) {
  RunSummary s;
  s.first_index = index;
  s.length = 1;
  s.prefix_kind = s.suffix_kind = m;
  if (m == Membership::Unresolved) {
    s.unresolved = 1;
    return s;
  }
  s.prefix = s.suffix = 1;
  if (m == Membership::Inside) {
    s.best_in = 1;
    s.best_in_start = index;
  } else {
    s.best_out = 1;
    s.best_out_start = index;
  }
  return s;
}

RunSummary RunSummary::merge(const RunSummary& l, const RunSummary& r) {
  if (l.length == 0) return r;
  if (r.length == 0) return l;
  RunSummary m;
  m.length = l.length + r.length;
  m.unresolved = l.unresolved + r.unresolved;
  m.prefix_kind = l.prefix_kind;
  m.prefix = l.prefix;
  if (l.prefix == l.length && l.prefix_kind == r.prefix_kind && r.prefix > 0) m.prefix += r.prefix;
  m.suffix_kind = r.suffix_kind;
  m.suffix = r.suffix;
  if (r.suffix == r.length && r.suffix_kind == l.suffix_kind && l.suffix > 0) m.suffix += l.suffix;

  auto take = [](std::uint64_t& best, std::uint64_t& start, std::uint64_t len, std::uint64_t s) {
    if (len > best || (len == best && len > 0 && s < start)) {
      best = len;
      start = s;
    }
  };
  m.best_in = l.best_in;
  m.best_in_start = l.best_in_start;
  take(m.best_in, m.best_in_start, r.best_in, r.best_in_start);
  m.best_out = l.best_out;
  m.best_out_start = l.best_out_start;
  take(m.best_out, m.best_out_start, r.best_out, r.best_out_start);
  if (l.suffix > 0 && r.prefix > 0 && l.suffix_kind == r.prefix_kind) {
    const std::uint64_t len = l.suffix + r.prefix;
    const std::uint64_t start = l.first_index + l.length - l.suffix;
    if (l.suffix_kind == Membership::Inside) take(m.best_in, m.best_in_start, len, start);
    else take(m.best_out, m.best_out_start, len, start);
  }
  m.first_index = l.first_index;
  return m;
}

RunReport run_report(const std::vector<Membership>& pattern) {
  RunReport rep;
  rep.n = pattern.size();
  const std::size_t chunks = (pattern.size() + kChunk - 1) / kChunk;
  std::vector<RunSummary> parts(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const std::uint64_t lo = c * kChunk, hi = std::min<std::uint64_t>(pattern.size(), lo + kChunk);
    RunSummary s;
    for (std::uint64_t i = lo; i < hi; ++i) s = RunSummary::merge(s, RunSummary::single(pattern[i], i + 1));
    parts[c] = s;
  });
  RunSummary total;
  for (const auto& p : parts) total = RunSummary::merge(total, p);
  rep.max_inside_run = total.best_in;
  rep.inside_start = total.best_in_start;
  rep.max_outside_run = total.best_out;
  rep.outside_start = total.best_out_start;
  rep.unresolved_count = total.unresolved;
  for (std::uint64_t i = 0; i < pattern.size() && rep.unresolved.size() < kKeepIndices; ++i) {
    if (pattern[i] == Membership::Unresolved) rep.unresolved.push_back(i + 1);
  }
  return rep;
}

RunReport run_report(const PointStream& points, const IntervalBox& box, std::uint64_t n_max) {
  if (n_max < 1) invalid("n_max must be >= 1");
  return run_report(classify_prefix(points, box, n_max));
}

RunReport run_report(const PointStream& points, const Interval& interval, std::uint64_t n_max) {
  return run_report(points, single(interval), n_max);
}

// --- covering ------------------------------------------------------------------

CoveringReport covering_index(const PointStream& points, unsigned l, std::size_t dims, std::uint64_t scan_cap) {
  if (l < 1) invalid("grid resolution l must be >= 1");
  if (dims != points.dims()) invalid("dims does not match the stream");
  std::uint64_t cells = 1;
  for (std::size_t d = 0; d < dims; ++d) {
    if (cells > (std::uint64_t{1} << 40) / l) invalid("grid too large");
    cells *= l;
  }
  if (scan_cap < cells) invalid("scan_cap must be >= l^s");
  scan_cap = std::min(scan_cap, points.size());
  CoveringReport rep;
  rep.l = l;
  rep.dims = dims;
  rep.first_hit.assign(cells, 0);
  std::uint64_t missing = cells;
  const mpz_class L = l;
  for (std::uint64_t n = 1; n <= scan_cap && missing > 0; ++n) {
    std::uint64_t cell = 0;
    for (std::size_t d = 0; d < dims; ++d) {
      const mpz_class j = certified_floor(points.coordinate(n, d) * L);
      cell = cell * l + std::min<std::uint64_t>(j.get_ui(), l - 1);
    }
    if (rep.first_hit[cell] == 0) {
      rep.first_hit[cell] = n;
      --missing;
    }
    rep.scanned = n;
  }
  rep.cells_incomplete = missing;
  if (missing == 0) rep.K = *std::max_element(rep.first_hit.begin(), rep.first_hit.end());
  return rep;
}

WindowCheck window_covering_check(const PointStream& points, const IntervalBox& target, std::uint64_t K,
                                  std::uint64_t n_max) {
  if (K < 1) invalid("K must be >= 1");
  if (n_max < K) invalid("n_max must be >= K");
  const std::vector<Membership> member = classify_prefix(points, target, n_max);
  WindowCheck w;
  w.K = K;
  w.n_max = n_max;
  std::uint64_t last_inside = 0, last_unresolved = 0;
  for (std::uint64_t e = 1; e <= n_max; ++e) {
    if (member[e - 1] == Membership::Inside) last_inside = e;
    if (member[e - 1] == Membership::Unresolved) last_unresolved = e;
    if (e < K) continue;
    const std::uint64_t N = e - K;  // window x_{N+1} .. x_{N+K}
    if (last_inside > N) continue;
    if (last_unresolved > N) {
      ++w.unresolved_count;
      if (w.unresolved_windows.size() < kKeepIndices) w.unresolved_windows.push_back(N);
    } else {
      ++w.violation_count;
      if (w.violations.size() < kKeepIndices) w.violations.push_back(N);
    }
  }
  return w;
}

// --- probes ------------------------------------------------------------------

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "STABLE";
    case Verdict::Growing: return "GROWING";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

BrsProbe brs_probe(const DiscrepancyTrace& trace, std::uint64_t split, const ProbeConfig& config) {
  if (split < trace.stride || split % trace.stride != 0) invalid("split must be a positive multiple of the stride");
  if (split >= trace.n_max) invalid("trace must extend beyond split");
  BrsProbe p;
  p.split = split;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (const auto& s : trace.samples) {
    if (s.N <= split) {
      p.sup_head = s.running_max;
    } else {
      p.sup_tail = std::max(p.sup_tail, s.block_max);
    }
    if (s.N >= split && s.running_max > 0) {
      const double x = std::log(static_cast<double>(s.N)), y = std::log(s.running_max);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++m;
    }
  }
  if (p.sup_head > 0) p.ratio = p.sup_tail / p.sup_head;
  else p.ratio = p.sup_tail > 0 ? std::numeric_limits<double>::infinity() : 1.0;
  if (m >= 2) {
    const double den = m * sxx - sx * sx;
    p.log_slope = den != 0 ? (m * sxy - sx * sy) / den : 0;
  }
  if (p.ratio <= config.stable_tolerance) p.verdict = Verdict::Stable;
  else if (p.ratio >= config.growth_factor) p.verdict = Verdict::Growing;
  return p;
}

Thresholds snbrs_thresholds(const mpq_class& c, const Interval& interval) {
  if (c < 0) invalid("c must be >= 0");
  const TrackedReal len = interval.length();
  const TrackedReal zero, one(mpq_class(1));
  if (must_compare(len, zero, "length with 0") != Order::Greater || must_compare(len, one, "length with 1") != Order::Less) {
    throw Error(ErrorKind::DegenerateInput, "interval length must lie strictly between 0 and 1");
  }
  auto smallest_above = [&](const TrackedReal& denom) -> mpz_class {
    if (denom.is_exact()) {
      if (auto q = denom.exact()->as_quadratic()) {
        return (QuadraticSurd::rational(2 * c) / *q).floor() + 1;
      }
    }
    const TrackedReal ratio = TrackedReal::approximate([denom, c](Bits p) {
      return Enclosure::point(mpq_class(2 * c), p + 8) / denom.enclose(p + 8);
    });
    return certified_floor(ratio) + 1;
  };
  return Thresholds{smallest_above(one - len), smallest_above(len)};
}

}  // namespace remlab
