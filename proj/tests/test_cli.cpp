#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bcs/commands.hpp"
#include "bcs/kernels.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace bcs;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "bcs-tc-lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> r;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
    r.push_back(l);
  }
  return r;
}

std::vector<double> fields(const std::string& row) {
  std::vector<double> r;
  std::istringstream in(row);
  for (std::string f; std::getline(in, f, ',');) r.push_back(f == "inf" ? INFINITY : std::stod(f));
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "bcs_cli_test";
  std::filesystem::create_directories(dir);
  const auto p = dir / name;
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config errors exit with code 2") {
  const auto bad = scratch("bad.json");
  std::ofstream(bad) << "{ \"command\": \"tc\", ";
  const auto out = scratch("never.json");
  Run r = cli({"tc", "--config", bad.string(), "--out", out.string()});
  CHECK(r.code == kExitConfig);
  CHECK_FALSE(std::filesystem::exists(out));
  CHECK(nlohmann::json::parse(lines(r.err).at(0))["error"]["kind"] == "config");

  CHECK(cli({"sweep", "--lambdas", ""}).code == kExitConfig);
  CHECK(cli({"kernel_eval", "--kernel", "K,X"}).code == kExitConfig);
  CHECK(cli({"tc", "--interaction", "yukawa"}).code == kExitConfig);
  CHECK(cli({"verify", "--suite", "regions", "--dim", "1"}).code == kExitConfig);
  CHECK(cli({"tc", "--tol", "-1"}).code == kExitConfig);
  CHECK(cli({"nonsense"}).code == kExitConfig);
  CHECK(cli({"kernel_eval", "--config", bad.string()}).code == kExitConfig);
}

TEST_CASE("kernel_eval tabulates the library kernels") {
  const Run r = cli({"kernel_eval", "--p-range", "0,2,21", "--q", "0,0.4,1", "--temps", "0.05,1"});
  REQUIRE(r.code == kExitOk);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 2 + 2 * 3 * 21);
  CHECK(ls[0].rfind("# bcs-tc-lab/1 config_sha256=", 0) == 0);
  CHECK(ls[1] == "p,q,temp,K,B,N,M");
  CHECK(r.out.find("\r\n") != std::string::npos);
  bool saw_pole = false;
  for (std::size_t i = 2; i < ls.size(); ++i) {
    const auto v = fields(ls[i]);
    REQUIRE(v.size() == 7);
    const PhysParams par{1.0, v[2], 1};
    CHECK(v[3] == k_t(v[0], par));
    CHECK(v[4] == b_t(v[0], v[1], par));
    CHECK(v[5] == n_t(v[0], v[1], par));
    CHECK(v[4] <= v[5]);
    saw_pole = saw_pole || std::isinf(v[6]);
  }
  // (p, q) = (0, 1) sits on both Fermi points.
  CHECK(saw_pole);
}

TEST_CASE("outputs are deterministic and carry the config digest") {
  const auto a = scratch("a.csv"), b = scratch("b.csv");
  CHECK(cli({"kernel_eval", "--kernel", "N", "--out", a.string()}).code == kExitOk);
  CHECK(cli({"kernel_eval", "--kernel", "N", "--out", b.string()}).code == kExitOk);
  std::stringstream sa, sb;
  sa << std::ifstream(a).rdbuf();
  sb << std::ifstream(b).rdbuf();
  CHECK(sa.str() == sb.str());
  const Run other = cli({"kernel_eval", "--kernel", "N", "--temps", "0.2"});
  CHECK(lines(other.out).at(0) != lines(sa.str()).at(0));
}

TEST_CASE("tc writes JSON and orders Tl below Tu") {
  const auto tl_path = scratch("tl.json"), tu_path = scratch("tu.json");
  const std::vector<std::string> base = {"tc", "--interaction", "gaussian_difference", "--lambda", "0.6"};
  auto with = [&](std::vector<std::string> extra) {
    auto v = base;
    v.insert(v.end(), extra.begin(), extra.end());
    return v;
  };
  const Run rl = cli(with({"--target", "tl", "--out", tl_path.string()}));
  const Run ru = cli(with({"--target", "tu", "--out", tu_path.string()}));
  REQUIRE(rl.code == kExitOk);
  REQUIRE(ru.code == kExitOk);
  const auto jl = nlohmann::json::parse(std::ifstream(tl_path));
  const auto ju = nlohmann::json::parse(std::ifstream(tu_path));
  CHECK(jl["target"] == "tl");
  CHECK(jl["config_sha256"].get<std::string>().size() == 64);
  CHECK(jl["T"].get<double>() <= ju["T"].get<double>());
  CHECK(jl["T"].get<double>() > 0.0);
}

TEST_CASE("numeric failures exit with code 1") {
  const Run r = cli({"tc", "--target", "tc0", "--lambda", "0.05"});
  CHECK(r.code == kExitNumeric);
  CHECK(nlohmann::json::parse(lines(r.out).at(0))["error"]["kind"] == "no_root");
}
