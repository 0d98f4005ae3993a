#include <doctest.h>
#include <json.hpp>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using namespace telegraph::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_args(std::vector<std::string> args) {
  args.insert(args.begin(), "telegraph-cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Runs the real executable; returns its exit status and stdout.
Run run_binary(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "telegraph_cli_test_stdout.txt";
  const std::string cmd = std::string(TELEGRAPH_CLI_PATH) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str(), ""};
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::string verdict;
};

Csv parse_csv(const std::string& text) {
  Csv c;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.rfind("# verdict: ", 0) == 0) {
      c.verdict = line.substr(11);
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    if (first) {
      while (std::getline(ss, cell, ',')) c.header.push_back(cell);
      first = false;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    c.rows.push_back(row);
  }
  return c;
}

std::size_t column(const Csv& c, const std::string& name) {
  for (std::size_t i = 0; i < c.header.size(); ++i)
    if (c.header[i] == name) return i;
  FAIL("no column " << name);
  return 0;
}

}  // namespace

TEST_CASE("config parsing") {
  std::istringstream in("# model\na1 = 0.5\n\na2=0.25   # trailing\nnu_max = 3\n");
  const auto m = parse_config(in);
  CHECK(m.at("a1") == "0.5");
  CHECK(m.at("a2") == "0.25");
  CHECK(m.at("nu-max") == "3");

  std::istringstream bad_key("colour = red\n");
  CHECK_THROWS_AS(parse_config(bad_key), UsageError);
  std::istringstream no_eq("a1 0.5\n");
  CHECK_THROWS_AS(parse_config(no_eq), UsageError);

  const auto cfg = config_from_map({{"a1", "0.5"}, {"direction", "1, 1, 0"}, {"format", "json"}, {"steps", "12"}});
  CHECK(cfg.a[0] == 0.5);
  CHECK(cfg.direction == std::array<double, 3>{1, 1, 0});
  CHECK(cfg.format == Format::json);
  CHECK(cfg.steps == 12u);

  CHECK_THROWS_AS(config_from_map({{"a1", "-1"}}), UsageError);
  CHECK_THROWS_AS(config_from_map({{"tau", "0"}}), UsageError);
  CHECK_THROWS_AS(config_from_map({{"a1", "1x"}}), UsageError);
  CHECK_THROWS_AS(config_from_map({{"steps", "-3"}}), UsageError);
  CHECK_THROWS_AS(config_from_map({{"direction", "1,2"}}), UsageError);
  CHECK_THROWS_AS(config_from_map({{"format", "xml"}}), UsageError);
}

TEST_CASE("flags override the config file") {
  const fs::path path = fs::temp_directory_path() / "telegraph_cli_test.cfg";
  {
    std::ofstream f(path);
    f << "a3 = 1.0\ntau = 0.5\nsteps = 2\nformat = json\n";
  }
  const auto r = run_args({"evolve", "--config", path.string(), "--a3", "2"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["meta"]["a3"] == "2");
  CHECK(doc["meta"]["tau"] == "0.5");
  CHECK(doc["rows"].size() == 3);
  fs::remove(path);

  CHECK(run_args({"evolve", "--config", "/nonexistent/file.cfg"}).code == 2);
}

TEST_CASE("evolve") {
  const auto c = parse_csv(run_args({"evolve", "--a3", "1.5", "--tau", "0.7", "--bloch", "0.6,0,0.8"}).out);
  CHECK(c.header == std::vector<std::string>{"nu", "b1", "b2", "b3", "Lambda1", "Lambda2", "Lambda3"});
  for (const auto& row : c.rows) CHECK(row[6] == 1.0);
  CHECK(c.rows[0][1] == 0.6);
  CHECK(c.rows[0][2] == 0.0);
  CHECK(c.rows[0][3] == 0.8);
  int sign_changes = 0;
  for (std::size_t k = 1; k < c.rows.size(); ++k) sign_changes += (c.rows[k][4] < 0) != (c.rows[k - 1][4] < 0);
  CHECK(sign_changes > 0);
}

TEST_CASE("cp-scan") {
  const auto r = run_args({"cp-scan", "--a1", "1.2", "--a2", "1.2", "--tau", "1"});
  REQUIRE(r.code == 0);
  const auto c = parse_csv(r.out);
  CHECK(c.rows[0] == std::vector<double>{0, 0, 0, 0, 1});
  for (const auto& row : c.rows) CHECK(std::abs(row[1] + row[2] + row[3] + row[4] - 1.0) <= 1e-12);
  CHECK(c.verdict.rfind("not-CP", 0) == 0);

  const auto j = nlohmann::json::parse(run_args({"cp-scan", "--a1", "1.2", "--a2", "1.2", "--format", "json"}).out);
  CHECK(j["verdict"]["cp"] == false);
  CHECK(j["verdict"]["witness"]["value"].get<double>() < -1e-10);

  const auto ok = nlohmann::json::parse(run_args({"cp-scan", "--a3", "5", "--format", "json"}).out);
  CHECK(ok["verdict"]["cp"] == true);
}

TEST_CASE("critical") {
  const auto c = parse_csv(run_args({"critical", "--direction", "1,1,0"}).out);
  CHECK(std::abs(c.rows[0][3] - 0.8) <= 0.05);
  const auto r = run_args({"critical", "--direction", "0,0,1"});
  CHECK(r.code == 0);
  CHECK(parse_csv(r.out).verdict == "CP-for-all");
  CHECK(run_args({"critical", "--direction", "0,0,0"}).code == 2);
  CHECK(run_args({"critical"}).code == 2);
}

TEST_CASE("mc-validate") {
  const std::vector<std::string> args{"mc-validate", "--a3", "1", "--trajectories", "4000", "--seed", "9"};
  const auto a = run_args(args);
  CHECK(a.code == 0);
  CHECK(a.out == run_args(args).out);
  const auto c = parse_csv(a.out);
  CHECK(c.header == std::vector<std::string>{"nu", "component", "Lambda", "analytic", "mc_mean", "mc_se", "z"});
  CHECK(c.rows.size() == 150);

  const auto single = run_args({"mc-validate", "--a3", "1", "--trajectories", "1", "--steps", "4"});
  CHECK(single.code == 0);
  for (const auto& row : parse_csv(single.out).rows) {
    CHECK(row[column(parse_csv(single.out), "mc_se")] == 0.0);
    if (row[0] == 0.0) CHECK(row[6] == 0.0);
  }
}

TEST_CASE("markov-compare") {
  const double tau = 0.1;
  const double a = std::sqrt(1.0 / (2.0 * tau));  // D = 1
  char a_text[32];
  std::snprintf(a_text, sizeof a_text, "%.17g", a);
  const auto c = parse_csv(run_args({"markov-compare", "--a3", a_text, "--tau", "0.1", "--steps", "50"}).out);
  const auto ig = column(c, "gamma");
  const auto id = column(c, "diff");
  // component -> t -> the three rungs, coarsest first
  std::map<double, std::map<double, std::vector<std::vector<double>>>> series;
  for (const auto& row : c.rows) {
    if (row[1] == 0.0) {
      CHECK(row[3] == 1.0);
      CHECK(row[5] == 1.0);
    }
    if (row[2] < 3) CHECK(row[ig] == doctest::Approx(4.0 * a * a * tau));  // 4 kappa^2 tau, same on every rung
    series[row[2]][row[1]].push_back(row);
  }
  std::array<double, 3> worst{};
  for (const auto& [component, by_t] : series) {
    std::vector<std::vector<std::vector<double>>> pts;
    for (const auto& [time, rungs] : by_t) {
      REQUIRE(rungs.size() == 3);
      pts.push_back(rungs);
    }
    auto signed_diff = [&](std::size_t k) { return pts[k][0][3] - pts[k][0][5]; };
    for (std::size_t k = 0; k < pts.size(); ++k) {
      for (std::size_t r = 0; r < 3; ++r) worst[r] = std::max(worst[r], pts[k][r][id]);
      if (component == 3 || pts[k][0][1] == 0.0) continue;
      CHECK(pts[k][2][id] < pts[k][1][id]);
      // The coarsest colored curve crosses exp(-gamma t), so its difference
      // passes through zero; compare only away from a sign change.
      const bool crossing = (k > 0 && signed_diff(k - 1) * signed_diff(k) <= 0) ||
                            (k + 1 < pts.size() && signed_diff(k + 1) * signed_diff(k) <= 0);
      if (!crossing) CHECK(pts[k][1][id] < pts[k][0][id]);
    }
  }
  CHECK(worst[1] < worst[0]);
  CHECK(worst[2] < worst[1]);
  CHECK(c.verdict.find(" monotone") != std::string::npos);
  CHECK(c.verdict.find("not monotone") == std::string::npos);
}

TEST_CASE("volterra-check") {
  const auto r = run_args({"volterra-check", "--a1", "1", "--a2", "0.3", "--a3", "0.05"});
  REQUIRE(r.code == 0);
  for (const auto& row : parse_csv(r.out).rows) CHECK(row[3] <= 1e-6);
  CHECK(run_args({"volterra-check", "--a1", "1", "--steps", "10001"}).code == 2);
}

TEST_CASE("output formats") {
  const auto r = run_args({"evolve", "--a1", "0.3", "--a2", "0.9", "--steps", "7"});
  CHECK(r.out.back() == '\n');
  // Every printed number round-trips to the value the library computes.
  for (const auto& row : parse_csv(r.out).rows)
    for (double v : row) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      CHECK(std::strtod(buf, nullptr) == v);
    }
  const auto j = nlohmann::json::parse(run_args({"evolve", "--a1", "0.3", "--steps", "7", "--format", "json"}).out);
  CHECK(j.is_object());
  CHECK(j.contains("meta"));
  CHECK(j["rows"].size() == 8);
  CHECK(j["rows"][0]["Lambda1"] == 1.0);
}

TEST_CASE("executable exit codes") {
  CHECK(run_binary("evolve --a3 1 --steps 3").code == 0);
  CHECK(run_binary("--help").code == 0);
  CHECK(run_binary("evolve --no-such-flag 1").code == 2);
  CHECK(run_binary("").code == 2);
  CHECK(run_binary("evolve --a1 -2").code == 2);
  CHECK(run_binary("mc-validate --a1 1 --a2 1 --a3 1 --trajectories 2000").code == 1);

  const fs::path out = fs::temp_directory_path() / "telegraph_cli_test_out.csv";
  CHECK(run_binary("evolve --a3 1 --steps 3 --out " + out.string()).code == 0);
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "nu,b1,b2,b3,Lambda1,Lambda2,Lambda3");
  fs::remove(out);
}
