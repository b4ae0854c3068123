// cli.hpp - command-line front end: argument parsing, validation and the
// subcommand runners behind the mqdecay executable.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mqdecay/couplings.hpp"

namespace mqdecay::cli {

enum class Subcommand { Counts, Simulate, Model, Rates, Scaling, Fit };

/// Exit statuses returned by run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable that overrides the worker count when --workers is
/// not given.
inline constexpr const char* kWorkersEnv = "MQDECAY_WORKERS";

/// Usage problems: bad flags, conflicting options, unreadable inputs.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Subcommand subcommand = Subcommand::Counts;

  std::optional<int> n;
  std::vector<int> n_list;  // scaling
  std::vector<int> M;
  std::optional<int> f;
  std::optional<double> p;
  std::optional<double> M2;
  std::optional<double> alpha;

  // Time grid.
  std::optional<double> t_max;
  std::size_t steps = 200;

  // Coupling sources for simulate.
  std::string couplings_path;
  std::string geometry_path;
  std::string synth;  // "constant" | "random"
  std::optional<double> b;
  std::optional<double> magnitude;
  bool zero_mean = false;
  std::uint64_t seed = 0;
  Vec3 field_axis{0.0, 0.0, 1.0};
  double gamma = constants::kProtonGyromagneticRatio;
  UnitsConvention units = UnitsConvention::SI;

  // External-bath mode of simulate.
  std::string bath;  // "" | "uncorrelated" | "correlated"
  std::optional<double> gamma_alpha;

  // Oracle resources.
  std::size_t max_spins = 14;
  std::size_t workers = 0;

  // Fit.
  std::string input_path;
  std::string output_path;  // empty = stdout
  bool pool_m2 = false;
};

/// Parses argv with CLI11 (a --config file is accepted by every subcommand;
/// flags override file values) and validates the result. Throws UsageError.
/// Returns nullopt when help was printed.
std::optional<RunConfig> parse_args(int argc, const char* const* argv,
                                    std::ostream& out);

/// Normalizes and range-checks a config; throws UsageError.
RunConfig validate_config(RunConfig config);

/// Executes one subcommand, writing to config.output_path or `out`.
/// Library errors propagate as mqdecay::Error.
void execute(const RunConfig& config, std::ostream& out);

/// Full entry point: parse, validate, execute, map errors to exit codes.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace mqdecay::cli
