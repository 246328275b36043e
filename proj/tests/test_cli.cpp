#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("fermicov_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string slurp(const std::string& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

struct Run {
  int code;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream err, out;
  auto* old_err = std::cerr.rdbuf(err.rdbuf());
  auto* old_out = std::cout.rdbuf(out.rdbuf());
  const int code = fermicov::cli::run(args);
  std::cerr.rdbuf(old_err);
  std::cout.rdbuf(old_out);
  return {code, err.str()};
}

}  // namespace

TEST_CASE("bound-check writes one row per instance and a summary") {
  TempDir d;
  const Run r = run({"bound-check", "--count", "1000", "--seed", "42", "--out", d / "r.csv"});
  CHECK(r.code == 0);
  const auto ls = lines(slurp(d / "r.csv"));
  REQUIRE(ls.size() == 1002);
  CHECK(ls[0] == "# fermicov-schema v1");
  CHECK(ls[1] == "instance_id,seed,d,m,N,n,beta,det_re,det_im,det_abs,bound,slack,pass");
  const auto js = nlohmann::json::parse(slurp(d / "r.csv.json"));
  CHECK(js["suite"] == "bound-check");
  CHECK(js["count"] == 1000);
  CHECK(js["failures"].empty());
  CHECK(js.contains("min_slack"));
  CHECK(js.contains("wall_time_s"));
  CHECK(fs::directory_iterator(d.path) != fs::directory_iterator());
  for (const auto& e : fs::directory_iterator(d.path)) CHECK(e.path().string().find(".tmp.") == std::string::npos);
}

TEST_CASE("kernel table at the singular eigenvalue") {
  TempDir d;
  CHECK(run({"kernel", "--beta", "1", "--n", "8", "--lambda", "singular", "--out", d / "k.csv"}).code == 0);
  const auto ls = lines(slurp(d / "k.csv"));
  REQUIRE(ls.size() == 2 + 16);
  CHECK(ls[2] == "1,-0.875,1");      // n^{-1} beta - beta
  CHECK(ls[2 + 8] == "9,0.125,-1");  // n^{-1} beta
  int nonzero = 0;
  for (std::size_t i = 2; i < ls.size(); ++i) {
    const std::string v = ls[i].substr(ls[i].rfind(',') + 1);
    if (v != "0" && v != "-0") ++nonzero;
  }
  CHECK(nonzero == 2);
  const auto js = nlohmann::json::parse(slurp(d / "k.csv.json"));
  CHECK(js["branch"] == "closed-limit");
}

TEST_CASE("sharpness rows") {
  TempDir d;
  CHECK(run({"sharpness", "--epsilon", "0.1", "--out", d / "s.csv"}).code == 0);
  const auto ls = lines(slurp(d / "s.csv"));
  REQUIRE(ls.size() == 2 + 4);
  for (std::size_t i = 2; i < ls.size(); ++i) {
    std::vector<std::string> cells;
    std::stringstream ss(ls[i]);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    REQUIRE(cells.size() == 12);
    const int N = std::stoi(cells[4]);
    CHECK(std::stod(cells[6]) >= std::pow(0.9, 2 * N));
    CHECK(cells[11] == "1");
  }
}

TEST_CASE("determinism: byte-identical CSV across runs and job counts") {
  TempDir d;
  const std::vector<std::vector<std::string>> suites{
      {"bound-check", "--count", "300", "--seed", "9"},
      {"modular-verify", "--count", "6", "--seed", "9"},
      {"wick-verify", "--max-N", "2", "--draws", "2", "--seed", "9"},
      {"bk-matrix", "--m", "5", "--t", "0.6", "--seed", "9"},
      {"sharpness", "--epsilon", "0.1,0.01"}};
  int i = 0;
  for (auto args : suites) {
    auto a = args, b = args;
    a.insert(a.end(), {"--jobs", "1", "--out", d / ("a" + std::to_string(i) + ".csv")});
    b.insert(b.end(), {"--jobs", "4", "--out", d / ("b" + std::to_string(i) + ".csv")});
    CHECK(run(a).code == 0);
    CHECK(run(b).code == 0);
    CHECK(slurp(d / ("a" + std::to_string(i) + ".csv")) == slurp(d / ("b" + std::to_string(i) + ".csv")));
    ++i;
  }
}

TEST_CASE("config files") {
  TempDir d;
  {
    std::ofstream f(d / "ok.yaml");
    f << "seed: 5\n"
         "torus: {beta: 2.0, n: 4}\n"
         "hamiltonian:\n  diagonal: [0.0, 1.5]\n"
         "cutoff: {type: gaussian, center: 0.0, width: 3.0}\n"
         "m_matrix:\n  tree: {vertices: 2, edges: [[1, 2, 0.25]]}\n  t: 1.0\n"
         "points:\n"
         "  - {alpha: 0.5, phi: [1, 0], color: 1}\n"
         "  - {alpha: 0.0, phi: [[0, 1], 1], color: 2}\n";
  }
  CHECK(run({"covariance-det", "--config", d / "ok.yaml", "--out", d / "c.csv"}).code == 0);
  const auto ls = lines(slurp(d / "c.csv"));
  REQUIRE(ls.size() == 3);
  CHECK(ls[2].rfind("0,0,2,2,1,4,2,", 0) == 0);

  // flags win over the file
  CHECK(run({"covariance-det", "--config", d / "ok.yaml", "--n", "8", "--beta", "1", "--out", d / "c2.csv"}).code == 0);
  CHECK(lines(slurp(d / "c2.csv"))[2].rfind("0,0,2,2,1,8,1,", 0) == 0);

  {
    std::ofstream f(d / "unknown.yaml");
    f << "seed: 1\ntorus:\n  beta: 1\n  nn: 4\n";
  }
  Run r = run({"kernel", "--config", d / "unknown.yaml"});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 4") != std::string::npos);
  CHECK(r.err.find("torus.nn") != std::string::npos);

  {
    std::ofstream f(d / "type.yaml");
    f << "torus:\n  beta: hello\n";
  }
  r = run({"kernel", "--config", d / "type.yaml"});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(r.err.find("torus.beta") != std::string::npos);

  {
    std::ofstream f(d / "syntax.yaml");
    f << "torus: [1, 2\n";
  }
  CHECK(run({"kernel", "--config", d / "syntax.yaml"}).code == 2);
  {
    std::ofstream f(d / "inf.yaml");
    f << "torus: {beta: .inf}\n";
  }
  CHECK(run({"kernel", "--config", d / "inf.yaml"}).code == 2);
  CHECK(run({"kernel", "--config", d / "missing.yaml"}).code == 2);
}

TEST_CASE("usage errors and exit codes") {
  CHECK(run({}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({"kernel", "--n", "3"}).code == 2);
  CHECK(run({"kernel", "--lambda", "abc"}).code == 2);
  CHECK(run({"bound-check", "--m-source", "tree"}).code == 2);
  CHECK(run({"bk-matrix", "--t", "2"}).code == 2);
  CHECK(run({"sharpness", "--epsilon", "1.5"}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"bound-check", "--help"}).code == 0);
}
