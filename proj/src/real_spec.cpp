#include "remlab/real_spec.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "remlab/error.hpp"

namespace remlab {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::InvalidSpec, msg); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

mpz_class parse_int(std::string_view s, std::string_view context) {
  s = trim(s);
  std::string str(s);
  if (!str.empty() && str[0] == '+') str.erase(0, 1);
  mpz_class v;
  if (str.empty() || v.set_str(str, 10) != 0) {
    invalid("expected integer, got '" + std::string(s) + "' in " + std::string(context));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

unsigned parse_base(std::string_view s, std::string_view context) {
  mpz_class b = parse_int(s, context);
  if (b < 2 || b > 36) invalid("digit base must be in [2, 36], got " + b.get_str());
  return static_cast<unsigned>(b.get_ui());
}

}  // namespace

// --- digit sources ---------------------------------------------------------

ChampernowneDigits::ChampernowneDigits(unsigned base) : base_(base) {
  if (base < 2) invalid("Champernowne base must be >= 2");
}

unsigned ChampernowneDigits::digit(std::uint64_t i) const {
  if (i == 0) invalid("digit positions are 1-based");
  using u128 = unsigned __int128;
  u128 pos = i - 1;
  u128 first = 1;  // smallest k-digit number
  for (unsigned k = 1;; ++k) {
    const u128 count = first * (base_ - 1);
    const u128 block = count * k;
    if (pos < block) {
      u128 number = first + pos / k;
      const unsigned offset = static_cast<unsigned>(pos % k);
      for (unsigned j = 0; j + 1 + offset < k; ++j) number /= base_;
      return static_cast<unsigned>(number % base_);
    }
    pos -= block;
    first *= base_;
  }
}

std::string ChampernowneDigits::name() const { return "champernowne:" + std::to_string(base_); }

HashedRandomDigits::HashedRandomDigits(unsigned base, std::uint64_t seed) : base_(base), seed_(seed) {
  if (base < 2) invalid("random digit base must be >= 2");
}

unsigned HashedRandomDigits::digit(std::uint64_t i) const {
  const std::uint64_t h = splitmix64(seed_ ^ splitmix64(i));
  return static_cast<unsigned>((static_cast<unsigned __int128>(h) * base_) >> 64);
}

std::string HashedRandomDigits::name() const {
  return "random:" + std::to_string(base_) + ":" + std::to_string(seed_);
}

VectorDigits::VectorDigits(unsigned base, std::vector<std::uint8_t> digits, std::string label)
    : base_(base), digits_(std::move(digits)), label_(std::move(label)) {
  for (auto d : digits_) {
    if (d >= base_) invalid("digit " + std::to_string(d) + " out of range for base " + std::to_string(base_));
  }
}

std::shared_ptr<const VectorDigits> VectorDigits::from_file(unsigned base, const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open digit file " + path);
  std::vector<std::uint8_t> digits;
  char ch;
  std::size_t line = 1;
  while (in.get(ch)) {
    if (ch == '\n') {
      ++line;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    int v = -1;
    if (ch >= '0' && ch <= '9') v = ch - '0';
    else if (ch >= 'a' && ch <= 'z') v = ch - 'a' + 10;
    if (v < 0 || static_cast<unsigned>(v) >= base) {
      invalid(path + ":" + std::to_string(line) + ": bad digit '" + std::string(1, ch) + "' for base " +
              std::to_string(base));
    }
    digits.push_back(static_cast<std::uint8_t>(v));
  }
  return std::make_shared<const VectorDigits>(base, std::move(digits),
                                              "file:" + std::to_string(base) + ":" + path);
}

unsigned VectorDigits::digit(std::uint64_t i) const {
  if (i == 0 || i > digits_.size()) {
    throw Error(ErrorKind::PrecisionExhausted, "digit " + std::to_string(i) + " beyond end of " + label_);
  }
  return digits_[i - 1];
}

Enclosure enclose_digit_tail(const DigitSource& src, std::uint64_t skip, Bits prec) {
  const unsigned base = src.base();
  const double bits_per_digit = std::log2(static_cast<double>(base));
  std::uint64_t n = static_cast<std::uint64_t>(std::ceil((prec + 64) / bits_per_digit));
  if (auto len = src.length()) n = std::min<std::uint64_t>(n, *len > skip ? *len - skip : 0);
  mpz_class s = 0;
  for (std::uint64_t j = 1; j <= n; ++j) {
    s *= base;
    s += src.digit(skip + j);
  }
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), base, n);
  // Remaining tail lies in [0, base^-n].
  Enclosure e(prec + 8);
  mpfr_set_z(e.lo.get(), s.get_mpz_t(), MPFR_RNDD);
  mpfr_div_z(e.lo.get(), e.lo.get(), scale.get_mpz_t(), MPFR_RNDD);
  s += 1;
  mpfr_set_z(e.hi.get(), s.get_mpz_t(), MPFR_RNDU);
  mpfr_div_z(e.hi.get(), e.hi.get(), scale.get_mpz_t(), MPFR_RNDU);
  return e;
}

// --- continued fractions ---------------------------------------------------

QuadraticSurd evaluate_continued_fraction(const ContinuedFraction& cf) {
  if (cf.preperiod.empty() && cf.period.empty()) invalid("empty continued fraction");
  for (std::size_t i = 1; i < cf.preperiod.size(); ++i) {
    if (cf.preperiod[i] < 1) invalid("partial quotient a" + std::to_string(i) + " must be >= 1");
  }
  for (const auto& p : cf.period) {
    if (p < 1) invalid("periodic partial quotients must be >= 1");
  }
  // Prefix matrix [[A, B], [C, D]] = prod [[a_i, 1], [1, 0]].
  mpz_class A = 1, B = 0, C = 0, D = 1;
  for (const auto& a : cf.preperiod) {
    mpz_class nA = a * A + B, nC = a * C + D;
    B = A;
    D = C;
    A = nA;
    C = nC;
  }
  if (cf.period.empty()) return QuadraticSurd::rational(mpq_class(A, C));
  mpz_class P = 1, Pm = 0, Q = 0, Qm = 1;
  for (const auto& a : cf.period) {
    mpz_class nP = a * P + Pm, nQ = a * Q + Qm;
    Pm = P;
    Qm = Q;
    P = nP;
    Q = nQ;
  }
  // y = (P y + Pm)/(Q y + Qm)  =>  Q y^2 + (Qm - P) y - Pm = 0, y > 0.
  const mpz_class disc = (Qm - P) * (Qm - P) + 4 * Q * Pm;
  QuadraticSurd y(P - Qm, 1, 2 * Q, disc);
  if (cf.preperiod.empty()) return y;
  return (y * A + QuadraticSurd::integer(B)) / (y * C + QuadraticSurd::integer(D));
}

// --- RealSpec --------------------------------------------------------------

RealSpec::RealSpec(Value v) : value_(std::move(v)) {
  if (auto* q = std::get_if<mpq_class>(&value_)) {
    algebraic_ = QuadraticSurd::rational(*q);
  } else if (auto* s = std::get_if<QuadraticSurd>(&value_)) {
    algebraic_ = *s;
  } else if (auto* cf = std::get_if<ContinuedFraction>(&value_)) {
    algebraic_ = evaluate_continued_fraction(*cf);
  } else if (!std::get<std::shared_ptr<const DigitSource>>(value_)) {
    invalid("null digit source");
  }
}

RealSpec RealSpec::rational(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  return RealSpec(Value(c));
}
RealSpec RealSpec::surd(const QuadraticSurd& s) { return RealSpec(Value(s)); }
RealSpec RealSpec::continued_fraction(ContinuedFraction cf) { return RealSpec(Value(std::move(cf))); }
RealSpec RealSpec::digits(std::shared_ptr<const DigitSource> source) { return RealSpec(Value(std::move(source))); }

const DigitSource* RealSpec::digit_source() const {
  auto* p = std::get_if<std::shared_ptr<const DigitSource>>(&value_);
  return p ? p->get() : nullptr;
}

Enclosure RealSpec::enclose(Bits prec) const {
  if (algebraic_) return SurdSum(*algebraic_).enclose(prec);
  return enclose_digit_tail(*digit_source(), 0, prec);
}

RealSpec RealSpec::parse(std::string_view text) {
  const std::string_view t = trim(text);
  const auto colon = t.find(':');
  if (colon == std::string_view::npos) invalid("missing kind prefix in real spec '" + std::string(t) + "'");
  const std::string_view kind = t.substr(0, colon);
  const std::string_view body = trim(t.substr(colon + 1));

  if (kind == "rational") {
    const auto slash = body.find('/');
    mpz_class p = parse_int(body.substr(0, slash), text);
    mpz_class q = slash == std::string_view::npos ? mpz_class(1) : parse_int(body.substr(slash + 1), text);
    if (q == 0) invalid("zero denominator in '" + std::string(t) + "'");
    return rational(mpq_class(p, q));
  }
  if (kind == "surd") {
    if (body.size() < 2 || body.front() != '(' || body.back() != ')') {
      invalid("surd syntax is surd:(a,b,c,d), got '" + std::string(t) + "'");
    }
    auto parts = split(body.substr(1, body.size() - 2), ',');
    if (parts.size() != 4) invalid("surd needs four integers, got '" + std::string(t) + "'");
    return surd(QuadraticSurd(parse_int(parts[0], text), parse_int(parts[1], text),
                              parse_int(parts[2], text), parse_int(parts[3], text)));
  }
  if (kind == "cf") {
    if (body.size() < 2 || body.front() != '[' || body.back() != ']') {
      invalid("cf syntax is cf:[a0;a1,...,(p1,...)], got '" + std::string(t) + "'");
    }
    std::string_view inner = body.substr(1, body.size() - 2);
    ContinuedFraction cf;
    const auto open = inner.find('(');
    if (open != std::string_view::npos) {
      const auto close = inner.find(')', open);
      if (close == std::string_view::npos || !trim(inner.substr(close + 1)).empty()) {
        invalid("period group must close the cf: '" + std::string(t) + "'");
      }
      for (auto p : split(inner.substr(open + 1, close - open - 1), ',')) cf.period.push_back(parse_int(p, text));
      inner = trim(inner.substr(0, open));
      while (!inner.empty() && (inner.back() == ',' || inner.back() == ';')) inner.remove_suffix(1);
    }
    if (!trim(inner).empty()) {
      const auto semi = inner.find(';');
      cf.preperiod.push_back(parse_int(inner.substr(0, semi), text));
      if (semi != std::string_view::npos && !trim(inner.substr(semi + 1)).empty()) {
        for (auto p : split(inner.substr(semi + 1), ',')) cf.preperiod.push_back(parse_int(p, text));
      }
    }
    return continued_fraction(std::move(cf));
  }
  if (kind == "digits") {
    auto parts = split(body, ':');
    if (parts[0] == "champernowne" && parts.size() == 2) {
      return digits(std::make_shared<ChampernowneDigits>(parse_base(parts[1], text)));
    }
    if (parts[0] == "random" && parts.size() == 3) {
      mpz_class seed = parse_int(parts[2], text);
      if (seed < 0 || !seed.fits_ulong_p()) invalid("seed out of range in '" + std::string(t) + "'");
      return digits(std::make_shared<HashedRandomDigits>(parse_base(parts[1], text), seed.get_ui()));
    }
    if (parts[0] == "file" && parts.size() >= 3) {
      const auto path_start = body.find(':', body.find(':') + 1) + 1;
      return digits(VectorDigits::from_file(parse_base(parts[1], text), std::string(body.substr(path_start))));
    }
    invalid("unknown digit stream '" + std::string(t) + "'");
  }
  invalid("unknown real spec kind '" + std::string(kind) + "'");
}

std::string RealSpec::str() const {
  struct Printer {
    std::string operator()(const mpq_class& q) const { return "rational:" + q.get_num().get_str() + "/" + q.get_den().get_str(); }
    std::string operator()(const QuadraticSurd& s) const {
      return "surd:(" + s.a().get_str() + "," + s.b().get_str() + "," + s.c().get_str() + "," + s.d().get_str() + ")";
    }
    std::string operator()(const ContinuedFraction& cf) const {
      std::string out = "cf:[";
      for (std::size_t i = 0; i < cf.preperiod.size(); ++i) {
        out += (i == 0 ? "" : (i == 1 ? ";" : ",")) + cf.preperiod[i].get_str();
      }
      if (!cf.period.empty()) {
        out += cf.preperiod.empty() ? "(" : (cf.preperiod.size() == 1 ? ";(" : ",(");
        for (std::size_t i = 0; i < cf.period.size(); ++i) out += (i ? "," : "") + cf.period[i].get_str();
        out += ")";
      }
      return out + "]";
    }
    std::string operator()(const std::shared_ptr<const DigitSource>& d) const { return "digits:" + d->name(); }
  };
  return std::visit(Printer{}, value_);
}

}  // namespace remlab
