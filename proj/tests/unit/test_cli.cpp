#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {
struct Result {
  int code;
  std::string out;
};

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mtcrit_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Result run(const std::string& args, const fs::path& dir) {
  const fs::path log = dir / "stdout.txt";
  const std::string cmd = std::string(MTCRIT_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int st = std::system(cmd.c_str());
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, slurp(log)};
}

Result run_config(const std::string& sub, const std::string& cfg, const fs::path& dir) {
  write(dir / "cfg.json", cfg);
  return run(sub + " --config " + (dir / "cfg.json").string() + " --out " + dir.string(), dir);
}
}  // namespace

TEST_CASE("criterion on the unperturbed disk") {
  const auto d = scratch("crit0");
  const auto r = run_config("criterion", R"({"family":{"kind":"Zero"}})", d);
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(d / "criterion_report.json"));
  CHECK(j["verdict"] == "ExtremalExists_l");
  CHECK(std::abs(j["l_closed"].get<double>() - 0.867879) < 1e-6);
}

TEST_CASE("criterion for a negative decaying family") {
  const auto d = scratch("critneg");
  const auto r = run_config("criterion", R"({"family":{"kind":"PowerLog","c_prime":-1,"a_prime":1,"b_prime":0}})", d);
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(d / "criterion_report.json"));
  CHECK(j["verdict"] == "NoExtremal_Truncations");
}

TEST_CASE("malformed input names the problem") {
  const auto d = scratch("bad");
  auto r = run_config("criterion", R"({"family": {"kind": "Zero"})", d);
  CHECK(r.code == 1);
  CHECK(r.out.find("error") != std::string::npos);
  r = run_config("criterion", R"({"family":{"kind":"PowerLog","c_prime":"minus one"}})", d);
  CHECK(r.code == 1);
  CHECK(r.out.find("c_prime") != std::string::npos);
  r = run("criterion --config " + (d / "missing.json").string(), d);
  CHECK(r.code == 1);
}

TEST_CASE("profiles subcommand") {
  const auto d = scratch("prof");
  CHECK(run_config("profiles", R"({"r_max": 50})", d).code == 1);
  const auto r = run_config("profiles", "{}", d);
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(d / "profiles_constants.json"));
  CHECK(std::abs(j["profiles"][0]["A"].get<double>() / 12.566370614359172 - 1.0) < 1e-3);
  // one CSV row per sample plus the header
  std::ifstream csv(d / "profile_S0.csv");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == j["profiles"][0]["samples"].get<std::size_t>() + 1);
}

TEST_CASE("profiles output is byte-identical across runs and thread counts") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  write(a / "cfg.json", "{}");
  REQUIRE(run("profiles --jobs 1 --config " + (a / "cfg.json").string() + " --out " + a.string(), a).code == 0);
  REQUIRE(run("profiles --jobs 4 --config " + (a / "cfg.json").string() + " --out " + b.string(), b).code == 0);
  CHECK(slurp(a / "profiles_constants.json") == slurp(b / "profiles_constants.json"));
  CHECK(slurp(a / "profile_S1.csv") == slurp(b / "profile_S1.csv"));
}

TEST_CASE("bubble subcommand") {
  const auto d = scratch("bub");
  CHECK(run_config("bubble", R"({"gammas":[3],"lambda":0})", d).code == 1);
  CHECK(run_config("bubble", R"({"gammas":[3],"lambda":-2})", d).code == 1);
  CHECK(run_config("bubble", R"({"gammas":[3],"eps0":0.5})", d).code == 1);
  CHECK(run_config("bubble", R"({"gammas":[3],"eps0":1.2})", d).code == 1);
  const auto r = run_config("bubble", R"({"gammas":[3,4]})", d);
  CHECK(r.code == 0);
  CHECK(fs::exists(d / "bubble_report.json"));
  CHECK(fs::exists(d / "bubble_gamma_4.csv"));
}

TEST_CASE("extremal subcommand") {
  const auto d = scratch("ext");
  CHECK(run_config("extremal", R"({"alphas_over_4pi":[1.2]})", d).code == 1);
  CHECK(run_config("extremal", R"({"alphas_over_4pi":[0.7],"starts":[]})", d).code == 1);
  const auto r = run_config("extremal", R"({"alphas_over_4pi":[0.7,0.8],"step1_eps":[0.01],"model_gammas":[3]})", d);
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(d / "extremal_report.json"));
  CHECK(j["runs"][1]["J"].get<double>() > j["runs"][0]["J"].get<double>());
  CHECK(j["runs"][0]["branch"] == "saturated");
}

TEST_CASE("verify subcommand") {
  const auto d = scratch("ver");
  const auto ok = run_config("verify", "{}", d);
  CHECK(ok.code == 0);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  const auto bad = run_config("verify", R"({"inject":{"A_2": 7.0}})", d);
  CHECK(bad.code == 1);
  bool named = false;
  std::istringstream ls(bad.out);
  for (std::string line; std::getline(ls, line);)
    if (line.find("FAIL") != std::string::npos && line.find("NoteSi A_2") != std::string::npos) named = true;
  CHECK(named);
}
