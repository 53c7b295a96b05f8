#ifndef MVP_TOOLS_CLI_HPP
#define MVP_TOOLS_CLI_HPP

#include "mvp/vp_sim/simulation.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvp::cli {

/// Exit codes of the mvp tool.
enum ExitCode : int { kSuccess = 0, kFailed = 1, kIoError = 2 };

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& origin, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FreeStreamConfig {
  std::vector<double> times{0.0, 5.0, 10.0, 20.0, 40.0};
  std::size_t particles = 100000;
  double r_max = 60.0;
  std::size_t cells = 600;
};

struct InequalityConfig {
  std::string family = "standard";
  std::vector<double> times{1.0, 5.0, 10.0, 20.0, 40.0};
  std::vector<int> p{0, 2};
  double tolerance = 1e-4;
  int nodes = 8;
  int radii = 200;
};

struct RunConfig {
  std::string mode;
  SimConfig sim;
  FreeStreamConfig free_stream;
  InequalityConfig inequality;
  std::filesystem::path output_dir = ".";
};

/// Sectioned key = value text; unknown sections or keys are rejected.
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
/// Throws IoError if the file cannot be read.
RunConfig parse_config(const std::filesystem::path& path);
/// Throws ConfigError (line 0) on invalid values.
void validate(const RunConfig& cfg);

std::vector<std::string> modes();

/// Writes content to path through a temporary file and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// Runs cfg.mode, writing outputs under cfg.output_dir; returns an ExitCode.
int dispatch(const RunConfig& cfg, std::ostream& log);

}  // namespace mvp::cli

#endif
