#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("gowerslab-cli-" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Run run(const std::string& args) {
  const fs::path log = scratch() / "stdout.txt";
  const std::string cmd = std::string("\"") + GOWERSLAB_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(log);
  return r;
}

std::string path(const std::string& name) { return (scratch() / name).string(); }

int count_lines_with(const std::string& text, const std::string& prefix) {
  std::istringstream is(text);
  std::string line;
  int n = 0;
  while (std::getline(is, line))
    if (line.rfind(prefix, 0) == 0) ++n;
  return n;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("--help").code == 0);
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("norm --k 3").code == 2);
  CHECK(run("norm --input " + path("missing.json") + " --k 3").code == 2);
  CHECK(run("norm --domain cyclic:0 --kind constant --k 3").code == 2);
  CHECK(run("--threads 0 norm --domain cyclic:8 --kind constant --k 2").code == 2);

  REQUIRE(run("generate --kind random-unimodular --domain cyclic:32 --seed 1 --out " + path("junk.json")).code == 0);
  const Run bad = run("decode --input " + path("junk.json") + " --k 3");
  CHECK(bad.code == 1);
  REQUIRE(run("generate --kind poly-phase --domain cyclic:16 --degree 2 --seed 3 --out " + path("quad.json")).code ==
          0);
  CHECK(run("decode --input " + path("quad.json") + " --k 3").code == 0);
}

TEST_CASE("generate then norm") {
  REQUIRE(run("generate --kind poly-phase --domain cyclic:27 --degree 2 --seed 9 --out " + path("p.json")).code == 0);
  const json sig = json::parse(slurp(path("p.json")));
  CHECK(sig.contains("domain"));
  REQUIRE(run("norm --input " + path("p.json") + " --k 3 --out " + path("n.json")).code == 0);
  const json rep = json::parse(slurp(path("n.json")));
  CHECK(rep["command"] == "norm");
  CHECK(rep["seed"].is_number());
  CHECK(rep.contains("tolerances"));
  CHECK(rep.dump().find("elapsed") == std::string::npos);
  const json* value = nullptr;
  for (auto it = rep.begin(); it != rep.end(); ++it)
    if (it.value().is_object() && it.value().contains("value")) value = &it.value()["value"];
  if (rep.contains("value")) value = &rep["value"];
  REQUIRE(value != nullptr);
  CHECK(value->get<double>() == doctest::Approx(1.0).epsilon(1e-9));

  // The same signal generated in place, with a second backend.
  REQUIRE(run("norm --kind poly-phase --domain cyclic:27 --degree 2 --seed 9 --k 3 --backend direct --out " +
              path("n2.json"))
              .code == 0);
  CHECK(slurp(path("n2.json")).find("direct") != std::string::npos);
}

TEST_CASE("reports are byte-identical across runs and thread counts") {
  const std::string gen = "generate --kind random-gaussian --domain group:6x10 --seed 5 --out ";
  REQUIRE(run(gen + path("g1.json")).code == 0);
  REQUIRE(run(gen + path("g2.json")).code == 0);
  CHECK(slurp(path("g1.json")) == slurp(path("g2.json")));

  const std::string norm = "norm --input " + path("g1.json") + " --k 3 --seed 5 --out ";
  REQUIRE(run("--threads 1 " + norm + path("t1.json")).code == 0);
  REQUIRE(run("--threads 4 " + norm + path("t4.json")).code == 0);
  REQUIRE(run("--threads 4 " + norm + path("t4b.json")).code == 0);
  CHECK(slurp(path("t1.json")) == slurp(path("t4.json")));
  CHECK(slurp(path("t4.json")) == slurp(path("t4b.json")));

  const std::string scalar = slurp(path("t1.json"));
  REQUIRE(run("--simd scalar " + norm + path("s.json")).code == 0);
  const json a = json::parse(scalar), b = json::parse(slurp(path("s.json")));
  CHECK(a.dump() == b.dump());
}

TEST_CASE("coset and scan subcommands") {
  REQUIRE(run("generate --kind coset-phase --domain cyclic:12 --gen-k 3 --generator 3 --offset 1 --seed 2 --out " +
              path("c.json"))
              .code == 0);
  const Run ok = run("coset --input " + path("c.json") + " --k 3 --epsilon 1e-6 --report " + path("cr.json"));
  CHECK(ok.code == 0);
  const json rep = json::parse(slurp(path("cr.json")));
  CHECK(rep["command"] == "coset");

  REQUIRE(run("generate --kind random-unimodular --domain cyclic:64 --seed 4 --out " + path("u.json")).code == 0);
  CHECK(run("coset --input " + path("u.json") + " --k 3 --epsilon 0.01").code == 1);

  REQUIRE(run("scan --input " + path("quad.json") + " --denominator 16 --out " + path("sc.json")).code == 0);
  CHECK(slurp(path("sc.json")).find("max_corr") != std::string::npos);
}

TEST_CASE("euclid and nil subcommands") {
  REQUIRE(run("euclid --check det --d 4 --out " + path("e.json")).code == 0);
  const json e = json::parse(slurp(path("e.json")));
  CHECK(e["det"] == "4096");
  CHECK(e["log2"] == 12);
  CHECK(run("euclid --check nonsense").code == 2);

  REQUIRE(run("nil --construct quadext --n 31 --q 3 --signal-out " + path("q.json") + " --out " + path("nq.json"))
              .code == 0);
  const json n = json::parse(slurp(path("nq.json")));
  CHECK(n["u3_ratio"].get<double>() > 0.8);
  CHECK(fs::exists(path("q.json")));
}

TEST_CASE("CSV outputs") {
  REQUIRE(run("bench --sizes 16,32 --k 2 --repeats 1 --out " + path("b.csv")).code == 0);
  const std::string bench = slurp(path("b.csv"));
  CHECK(bench.rfind("size,backend,k,elapsed_s,work\n", 0) == 0);
  CHECK(count_lines_with(bench, "16,") == 3);
  CHECK(count_lines_with(bench, "32,") == 3);

  {
    std::ofstream cfg(path("sweep.json"));
    cfg << R"({"items": [{"construction": "planted", "n": 32}, {"construction": "random", "n": 32, "seed": 2}]})";
  }
  REQUIRE(run("sweep --config " + path("sweep.json") + " --out " + path("s1.csv")).code == 0);
  REQUIRE(run("sweep --config " + path("sweep.json") + " --out " + path("s2.csv")).code == 0);
  const std::string sweep = slurp(path("s1.csv"));
  CHECK(sweep.rfind("construction,params,u3_ratio,max_corr,argmax_a,argmax_b\n", 0) == 0);
  CHECK(count_lines_with(sweep, "planted,") == 1);
  CHECK(count_lines_with(sweep, "random,") == 1);
  CHECK(sweep == slurp(path("s2.csv")));
}

TEST_CASE("selftest filtering and the mutation fixture") {
  const Run eu = run("selftest --filter euclid");
  CHECK(eu.code == 0);
  CHECK(count_lines_with(eu.out, "PASS [") == 3);
  CHECK(count_lines_with(eu.out, "PASS [9]") == 1);
  CHECK(count_lines_with(eu.out, "PASS [10]") == 1);
  CHECK(count_lines_with(eu.out, "PASS [11]") == 1);
  CHECK(count_lines_with(eu.out, "FAIL") == 0);

  const Run mutant = run("selftest --filter 1 --inject-u2-bug");
  CHECK(mutant.code == 1);
  CHECK(count_lines_with(mutant.out, "FAIL [1]") == 1);

  CHECK(run("selftest --filter 1").code == 0);
  CHECK(run("selftest --filter nothing-like-this").code == 2);
}
