#pragma once

// Command-line front end. Every command turns a RunConfig into a Table; the
// table renders as CSV or JSON. Kept as a library so tests can drive it
// without spawning processes.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace telegraph::cli {

/// Bad flags, bad config values or invalid model parameters. Exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { csv, json };

using ConfigMap = std::map<std::string, std::string>;

/// Flat key=value text. '#' starts a comment; blank lines are ignored.
ConfigMap parse_config(std::istream& in);
ConfigMap parse_config_file(const std::string& path);

struct RunConfig {
  std::array<double, 3> a{0.0, 0.0, 0.0};
  double tau = 1.0;
  std::optional<double> nu_max;
  std::optional<std::size_t> steps;
  std::size_t trajectories = 10000;
  std::uint64_t seed = 1;
  std::optional<std::array<double, 3>> direction;
  std::array<double, 3> bloch{0.57735026918962573, 0.57735026918962573, 0.57735026918962573};
  double t_max = 5.0;
  Format format = Format::csv;
  std::string out;  // empty: stdout
};

/// Keys: a1 a2 a3 tau nu-max steps trajectories seed direction bloch t-max
/// format out. Unknown keys and malformed values raise UsageError.
RunConfig config_from_map(const ConfigMap& values);

struct Table {
  std::string command;
  std::vector<std::pair<std::string, std::string>> meta;  // config echo, in order
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::optional<std::string> verdict;  // one-line human summary
  std::string verdict_json;            // same, as a JSON value; empty if none
  int exit_code = 0;
};

Table cmd_evolve(const RunConfig& cfg);
Table cmd_cp_scan(const RunConfig& cfg);
Table cmd_critical(const RunConfig& cfg);
Table cmd_mc_validate(const RunConfig& cfg);
Table cmd_markov_compare(const RunConfig& cfg);
Table cmd_volterra_check(const RunConfig& cfg);

void write_csv(std::ostream& os, const Table& t);
void write_json(std::ostream& os, const Table& t);

/// Full entry point: parses argv, runs the command, writes output.
/// Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace telegraph::cli
