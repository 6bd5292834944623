// remlab: command-line front end for the experiments.
//
// Exit codes: 0 success, 2 invalid input, 3 precision exhausted,
// 4 unresolved memberships above the configured fraction.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "remlab/error.hpp"
#include "remlab/experiments.hpp"

namespace {

using remlab::Error;
using remlab::ErrorKind;
using remlab::ExperimentConfig;

struct Flags {
  std::string experiment, config, spec, alpha, beta, phi, formula, poly, digits_file, out_csv, out_json;
  std::vector<std::string> alphas, intervals;
  std::uint64_t n_max = 0, stride = 0, split = 0, seed = 0;
  unsigned digits_base = 10, j = 1, depth = 3, k_max = 0, l = 10;
  double tol = 1e-12, max_unresolved = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidSpec, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Best-effort line of the first quoted name in an error message.
std::size_t line_of_message(const std::string& text, const std::string& msg) {
  const auto a = msg.find('\'');
  const auto b = a == std::string::npos ? a : msg.find('\'', a + 1);
  if (b == std::string::npos) return 0;
  const std::string needle = msg.substr(a + 1, b - a - 1);
  for (const std::string& probe : {"\"" + needle + "\"", needle}) {
    const auto at = text.find(probe);
    if (at != std::string::npos) return line_of_offset(text, at);
  }
  return 0;
}

nlohmann::json parse_json_file(const std::string& path, const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::InvalidSpec,
                path + ":" + std::to_string(line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1)) + ": malformed JSON");
  }
}

// Applies a JSON file, prefixing errors with path:line.
template <typename Fn>
void with_file(const std::string& path, Fn&& fn) {
  const std::string text = read_file(path);
  const nlohmann::json j = parse_json_file(path, text);
  try {
    fn(j);
  } catch (const Error& e) {
    std::string msg = e.what();
    const std::string prefix = std::string(remlab::to_string(e.kind())) + ": ";
    if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
    const std::size_t line = line_of_message(text, msg);
    throw Error(e.kind(), path + ":" + (line ? std::to_string(line) + ":" : std::string()) + " " + msg);
  }
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON experiment config (flags override it)");
  sub->add_option("--spec", f.spec, "JSON sequence spec file");
  sub->add_option("--alpha", f.alpha, "alpha as a real spec, e.g. surd:(-1,1,2,5)");
  sub->add_option("--alphas", f.alphas, "alphas for theorem6");
  sub->add_option("--interval", f.intervals, "interval a,b (repeat per dimension)");
  sub->add_option("--nmax", f.n_max, "number of points");
  sub->add_option("--stride", f.stride, "trace sampling stride");
  sub->add_option("--split", f.split, "probe split (multiple of stride)");
  sub->add_option("--tol", f.tol, "certification tolerance in (0, 0.5)");
  sub->add_option("--seed", f.seed, "seed for pseudo-random digit streams");
  sub->add_option("--beta", f.beta, "Pisot base: integer, golden, or surd spec");
  sub->add_option("--phi", f.phi, "growth function: Kn, n^p, 2^n");
  sub->add_option("--formula", f.formula, "slow-growth a_n: isqrt, icbrt, ilog2, div:K");
  sub->add_option("--poly", f.poly, "polynomial coefficients c0;c1;c2 as real specs");
  sub->add_option("--digits-file", f.digits_file, "alpha from a digit file");
  sub->add_option("--digits-base", f.digits_base, "base of --digits-file")->check(CLI::Range(2, 36));
  sub->add_option("--j", f.j, "Kesten index j (length {j alpha})");
  sub->add_option("--depth", f.depth, "counterexample depth");
  sub->add_option("--k-max", f.k_max, "largest k1, k2 or run length to check");
  sub->add_option("--l", f.l, "grid resolution");
  sub->add_option("--max-unresolved", f.max_unresolved, "tolerated unresolved fraction before exit 4");
  sub->add_option("--out-csv", f.out_csv, "trace CSV path");
  sub->add_option("--out-json", f.out_json, "summary JSON path");
}

ExperimentConfig build_config(CLI::App* sub, const Flags& f, const std::string& experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  if (!f.config.empty()) with_file(f.config, [&](const nlohmann::json& j) { c.merge_json(j); });
  if (!experiment.empty()) c.experiment = experiment;
  auto given = [&](const char* name) { return sub->count(name) > 0; };
  if (!f.spec.empty()) with_file(f.spec, [&](const nlohmann::json& j) { c.sequence = remlab::sequence_from_json(j); });
  if (given("--alpha")) c.alpha = f.alpha;
  if (given("--digits-file")) {
    c.alpha = "digits:file:" + std::to_string(f.digits_base) + ":" + f.digits_file;
  }
  if (given("--alphas")) c.alphas = f.alphas;
  if (given("--interval")) c.intervals = f.intervals;
  if (given("--nmax")) c.n_max = f.n_max;
  if (given("--stride")) c.stride = f.stride;
  if (given("--split")) c.split = f.split;
  if (given("--tol")) c.tol = f.tol;
  if (given("--seed")) c.seed = f.seed;
  if (given("--beta")) c.beta = f.beta;
  if (given("--phi")) c.phi = f.phi;
  if (given("--formula")) c.formula = f.formula;
  if (given("--poly")) c.poly = f.poly;
  if (given("--j")) c.j = f.j;
  if (given("--depth")) c.depth = f.depth;
  if (given("--k-max")) c.k_max = f.k_max;
  if (given("--l")) c.l = f.l;
  if (given("--max-unresolved")) c.max_unresolved_fraction = f.max_unresolved;
  if (given("--out-csv")) c.out_csv = f.out_csv;
  if (given("--out-json")) c.out_json = f.out_json;
  return c;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::PrecisionExhausted: return 3;
    case ErrorKind::UnresolvedMembership: return 4;
    default: return 2;
  }
}

int execute(const ExperimentConfig& c) {
  c.validate();
  const remlab::ExperimentResult r = remlab::run_experiment(c);
  const std::string summary = r.summary.dump(2) + "\n";
  if (!c.out_csv.empty()) remlab::write_atomic(c.out_csv, r.csv);
  if (!c.out_json.empty()) remlab::write_atomic(c.out_json, summary);
  std::cout << summary;
  if (r.checked > 0 && static_cast<double>(r.unresolved) > c.max_unresolved_fraction * static_cast<double>(r.checked)) {
    std::cerr << "error: " << r.unresolved << " of " << r.checked << " memberships unresolved\n";
    return 4;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"remlab: bounded remainder set experiments"};
  app.require_subcommand(1);
  Flags f;
  const std::vector<std::string> names = {"measure", "kesten",   "theorem1", "theorem3-1", "theorem3-2",
                                          "theorem4", "theorem5", "theorem6", "lemma3",     "polyrun"};
  std::vector<CLI::App*> subs;
  for (const auto& n : names) {
    CLI::App* sub = app.add_subcommand(n, "run the " + n + " experiment");
    add_common(sub, f);
    subs.push_back(sub);
  }
  CLI::App* run = app.add_subcommand("run", "run the experiment named by --experiment or the config");
  add_common(run, f);
  run->add_option("--experiment", f.experiment, "experiment id");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    ExperimentConfig c;
    if (run->parsed()) {
      c = build_config(run, f, f.experiment);
      if (c.experiment.empty()) throw Error(ErrorKind::InvalidSpec, "no experiment given (--experiment or config)");
    } else {
      for (std::size_t i = 0; i < subs.size(); ++i) {
        if (subs[i]->parsed()) c = build_config(subs[i], f, names[i]);
      }
    }
    return execute(c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
