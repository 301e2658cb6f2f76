#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtf/report.hpp"

namespace mtf {

enum class Command { solve, current, sweep, scales, landau_check };

Command parse_command(const std::string& name);
const char* to_string(Command command);

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// "lo:hi:logN=k": k log-spaced points from lo to hi inclusive.
struct SweepSpec {
  double lo = 1.0;
  double hi = 1.0;
  std::size_t count = 1;

  static SweepSpec parse(const std::string& text);
  static bool looks_like_sweep(const std::string& text);
  std::vector<double> values() const;
};

struct RunConfig {
  Command command = Command::solve;
  double Z = 1.0;
  std::optional<double> N;
  std::optional<double> lambda;
  // A number, or a sweep spec for the sweep command. Exactly one of B, beta.
  std::string B;
  std::string beta;
  std::size_t grid_n = 512;
  double rmax_ell = 50.0;
  double tol = 1e-7;
  double mix = 0.3;
  std::size_t max_iterations = SolverTolerances{}.max_iterations;
  std::string field_profile = "rigid";
  std::uint64_t seed = 1;
  std::size_t samples = 200000;
  // Confinement error inputs for the scales command.
  double delta = 0.5;
  double mu_exponent = 0.25;
  std::string out = ".";

  double electrons() const;
  // Field for a single point; throws for sweep specs.
  double field() const;
  // Field values of the sweep, ascending.
  std::vector<double> field_sweep() const;
  void validate() const;
  Json provenance() const;
};

// Throws ConfigError on bad flags. Returns nullopt after printing help.
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out);

// 0 on success, 1 on non-convergence, 2 on an invalid configuration.
int run(const RunConfig& config, std::ostream& log);

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mtf
