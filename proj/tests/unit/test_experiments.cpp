#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "remlab/error.hpp"
#include "remlab/experiments.hpp"

using namespace remlab;
using nlohmann::json;

namespace {

ExperimentConfig config(const json& j) {
  ExperimentConfig c;
  c.merge_json(j);
  c.validate();
  return c;
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidSpec;
}

}  // namespace

TEST_CASE("config merging and validation") {
  const ExperimentConfig c = config({{"experiment", "measure"}, {"n_max", 100}, {"interval", "0,1/3"}, {"j", 2}});
  CHECK(c.n_max == 100);
  CHECK(c.j == 2);
  CHECK(c.intervals == std::vector<std::string>{"0,1/3"});
  CHECK(kind_of([] { config({{"experiment", "measure"}, {"bogus", 1}}); }) == ErrorKind::InvalidSpec);
  CHECK(kind_of([] { config({{"experiment", "nope"}}); }) == ErrorKind::InvalidSpec);
  CHECK(kind_of([] { config({{"experiment", "measure"}, {"tol", 0.7}}); }) == ErrorKind::InvalidSpec);
  CHECK(kind_of([] { config({{"experiment", "measure"}, {"n_max", 10}, {"stride", 20}}); }) == ErrorKind::InvalidSpec);
}

TEST_CASE("sequence specs from json") {
  const SequenceSpec s = sequence_from_json({{"family", "kronecker"}, {"alpha", "surd:(0,1,1,2)"}});
  CHECK(s.family == Family::Kronecker);
  const SequenceSpec g = sequence_from_json({{"family", "growth_constrained"}, {"alpha", "surd:(-1,1,2,5)"},
                                             {"params", {{"phi", "2n"}}}});
  CHECK(g.phi == "2n");
  const SequenceSpec e = sequence_from_json({{"family", "explicit"}, {"alpha", "surd:(0,1,1,2)"},
                                             {"params", {{"terms", {1, 2, 3}}, {"strictly_increasing", true}}}});
  CHECK(e.terms.size() == 3);
  CHECK_THROWS_AS(sequence_from_json({{"alpha", "surd:(0,1,1,2)"}}), Error);
  CHECK_THROWS_AS(sequence_from_json({{"family", "kronecker"}, {"seed", 1}}), Error);
  CHECK_THROWS_AS(sequence_from_json({{"family", "unknown"}, {"alpha", "rational:1/2"}}), Error);
}

TEST_CASE("measure experiment and csv trace") {
  const ExperimentResult r = run_experiment(config({{"experiment", "measure"}, {"n_max", 1000}, {"stride", 100}, {"split", 100}}));
  CHECK(r.summary["n_max"] == 1000);
  CHECK(r.summary["runs"]["max_inside_run"].get<int>() >= 1);
  std::istringstream csv(r.csv);
  std::string line;
  std::getline(csv, line);
  CHECK(line == "N,count,signed_ND,abs_running_max");
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 10);
  const ExperimentResult again = run_experiment(config({{"experiment", "measure"}, {"n_max", 1000}, {"stride", 100}, {"split", 100}}));
  CHECK(again.summary.dump() == r.summary.dump());
  CHECK(again.csv == r.csv);
}

TEST_CASE("theorem experiments at small scale") {
  const ExperimentResult t32 = run_experiment(config({{"experiment", "theorem3-2"}, {"n_max", 200}}));
  CHECK(t32.summary["n"] == json::array({"2", "14", "470846"}));
  CHECK(t32.summary["mismatches"].get<int>() >= 2);
  CHECK(t32.summary["reverse_after_n1"] == 0);

  const ExperimentResult t31 = run_experiment(config({{"experiment", "theorem3-1"}, {"n_max", 300}}));
  CHECK(t31.summary["all_equal"] == true);
  CHECK(t31.summary["a_head"][4] == "34");

  const ExperimentResult t4 = run_experiment(config({{"experiment", "theorem4"}, {"n_max", 3000}}));
  CHECK(t4.summary["exceeds_k_max"] == true);

  const ExperimentResult t5 = run_experiment(config({{"experiment", "theorem5"}, {"n_max", 100}}));
  CHECK(t5.summary["certificate_holds"] == true);
  CHECK(t5.summary["a_head"][3] == "9");

  const ExperimentResult l3 = run_experiment(config({{"experiment", "lemma3"}, {"n_max", 2000}}));
  CHECK(l3.summary["window"]["violation_count"] == 0);
}

TEST_CASE("atomic writes") {
  const std::string path = "remlab_atomic_test.json";
  write_atomic(path, "{\"a\": 1}\n");
  std::ifstream in(path);
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(s == "{\"a\": 1}\n");
  std::remove(path.c_str());
  CHECK_THROWS(write_atomic("/nonexistent-dir/x.json", "x"));
}
