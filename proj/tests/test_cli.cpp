#include <doctest.h>

#include "qmonoidal/cli.hpp"
#include "qmonoidal/json_io.hpp"
#include "test_util.hpp"

#include <filesystem>
#include <fstream>
#include <unistd.h>
#include <sstream>

using namespace qmon;
using namespace qtest;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  json doc;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  Run r;
  r.code = run_cli(args, o, e);
  r.out = o.str();
  r.err = e.str();
  if (!r.out.empty() && r.out[0] == '{') r.doc = json::parse(r.out);
  return r;
}

fs::path scratch() {
  static const fs::path d = [] {
    fs::path p = fs::temp_directory_path() / ("qmon_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return d;
}

std::string put(const std::string& name, const Mat& m) {
  const std::string p = (scratch() / name).string();
  write_matrix_file(p, m);
  return p;
}

}  // namespace

TEST_CASE("matrix file round trip is exact") {
  std::mt19937_64 rng(3);
  const Mat u = random_unitary(3, rng);
  const Mat back = read_matrix_file(put("u.json", u));
  CHECK((back - u).norm() == 0.0);
  json j = json::parse(R"({"n": 2, "entries": [[1, [0, 2]], [[3, 0], 4]]})");
  const Mat m = matrix_from_json(j);
  CHECK(m(0, 1) == cplx(0, 2));
  CHECK(m(1, 1) == cplx(4, 0));
  CHECK_THROWS_AS(matrix_from_json(json::parse(R"({"n": 3, "entries": [[1]]})")), Error);
  CHECK_THROWS_AS(matrix_from_json(json::parse(R"({"entries": [[1, 2]]})")), Error);
}

TEST_CASE("classify-ao on SU_0.2(2)") {
  const Run r = run({"classify-ao", "--input", put("su02.json", sq02())});
  REQUIRE(r.code == kExitOk);
  const json& res = r.doc["results"];
  CHECK(res["sign"] == -1);
  CHECK(res["trace"].get<double>() == doctest::Approx(5.2).epsilon(1e-12));
  CHECK(res["qdim"].get<double>() == doctest::Approx(5.2).epsilon(1e-12));
  CHECK(res["beta"].get<double>() == doctest::Approx(-1.0 / 5.2).epsilon(1e-12));
  CHECK(r.doc["pass"] == true);
  CHECK(r.doc.contains("inputs_hash"));
  CHECK_FALSE(res.contains("timings"));

  const Run t = run({"--format", "text", "classify-ao", "--input", put("su02.json", sq02())});
  CHECK(t.code == kExitOk);
  CHECK(t.out.find("sign: -1") != std::string::npos);
}

TEST_CASE("classify-ao on a non-admissible matrix") {
  Mat f(2, 2);
  f << 1, 1, 0, 1;
  const Run r = run({"classify-ao", "--input", put("bad.json", f)});
  CHECK(r.code == kExitInput);
  CHECK(r.err.find("NotAoAdmissible") != std::string::npos);
}

TEST_CASE("mon-equiv example") {
  const Run r = run({"mon-equiv", "--variant", "ao", "--f1", put("su02.json", sq02()), "--f2",
                     put("comp4.json", comp4())});
  REQUIRE(r.code == kExitOk);
  CHECK(r.doc["results"]["equivalent"] == false);
  CHECK(r.doc["results"]["monoidally_equivalent"] == true);
}

TEST_CASE("usage and input errors") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"classify-ao"}).code == kExitUsage);
  CHECK(run({"--tol", "1e-14", "--tol-rank", "1e-12", "classify-ao", "--input", "x"}).code == kExitUsage);
  CHECK(run({"classify-ao", "--input", (scratch() / "missing.json").string()}).code == kExitInput);
  {
    std::ofstream(scratch() / "garbage.json") << "{not json";
    CHECK(run({"classify-ao", "--input", (scratch() / "garbage.json").string()}).code == kExitInput);
  }
  CHECK(run({"construct-companion", "--sign", "1", "--trace", "1.0", "--n", "3"}).code == kExitInput);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("construct-companion output round trips through classify-ao") {
  const Run c = run({"construct-companion", "--sign", "-1", "--trace", "5.2", "--n", "4"});
  REQUIRE(c.code == kExitOk);
  const Mat m = matrix_from_json(c.doc["results"]["matrix"]);
  const Run r = run({"classify-ao", "--input", put("c4.json", m)});
  REQUIRE(r.code == kExitOk);
  CHECK(r.doc["results"]["sign"] == -1);
  CHECK(r.doc["results"]["trace"].get<double>() == doctest::Approx(5.2).epsilon(1e-10));
}

TEST_CASE("category cache hit returns the same payload") {
  const std::string dir = (scratch() / "cache").string();
  const std::string in = put("su02.json", sq02());
  const Run a = run({"--cache-dir", dir, "category", "--input", in, "--level", "3", "--sixj"});
  REQUIRE(a.code == kExitOk);
  CHECK(a.doc["timings"]["cache"] == "miss");
  const Run b = run({"--cache-dir", dir, "category", "--input", in, "--level", "3", "--sixj"});
  REQUIRE(b.code == kExitOk);
  CHECK(b.doc["timings"]["cache"] == "hit");
  CHECK(a.doc["results"] == b.doc["results"]);
  CHECK(a.doc["results"]["labels"]["2"]["dim"] == 3);
  CHECK(a.doc["results"]["labels"]["1"]["qdim"].get<double>() == doctest::Approx(5.2));
}

TEST_CASE("category for A_u words") {
  const Run r = run({"category", "--variant", "au", "--input", put("i2.json", Mat::Identity(2, 2)), "--level", "2"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.doc["results"]["labels"].contains("ab"));
  CHECK(r.doc["results"]["labels"]["ab"]["dim"] == 3);
}

TEST_CASE("linking and cocycle subcommands") {
  const std::string f1 = put("su02.json", sq02());
  const Run l = run({"linking", "all", "--f1", f1, "--f2", put("comp4.json", comp4()), "--level", "2"});
  REQUIRE(l.code == kExitOk);
  const json& res = l.doc["results"];
  CHECK(res["basis_sizes"]["0"] == 1);
  CHECK(res["basis_sizes"]["1"] == 8);
  CHECK(res["min_gram_eig"].get<double>() > 0.0);
  CHECK(res["residuals"]["kms"].get<double>() <= 1e-8);
  CHECK(res["multiplicities"]["1"]["mult"].get<double>() == doctest::Approx(4.0));
  CHECK(res["multiplicities"]["1"]["mult_q"].get<double>() == doctest::Approx(5.2));

  std::mt19937_64 rng(4);
  const Mat v = random_unitary(2, rng);
  const std::string f2 = put("rot.json", Mat(v * sq02() * v.transpose()));
  const Run c = run({"--seed", "17", "cocycle", "--f1", f1, "--f2", f2, "--level", "3"});
  REQUIRE(c.code == kExitOk);
  CHECK(c.doc["results"]["residuals"]["cocycle_identity"].get<double>() <= 1e-9);
  CHECK(c.doc["results"]["coboundary_equivalent"] == true);
  CHECK(run({"cocycle", "--f1", f1, "--f2", put("i2.json", Mat::Identity(2, 2))}).code == kExitInput);
}
