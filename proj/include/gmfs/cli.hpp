#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmfs/basis.hpp"
#include "gmfs/coeffs.hpp"
#include "gmfs/diagnostics.hpp"
#include "gmfs/expand.hpp"
#include "gmfs/oracle.hpp"
#include "gmfs/sde.hpp"
#include "gmfs/weight.hpp"

namespace gmfs::cli {

enum ExitCode : int {
    kOk = 0,
    kValidation = 2,
    kNumeric = 3,
    kUnknownCommand = 64,
    kMalformedConfig = 65,
};

/// Config document could not be read into a RunConfig (exit 65).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Config is well formed but outside what the convergence results cover (exit 2).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DiagOptions {
    int p = 5;
    std::string kinds = "abcdefgh";
    std::vector<int> trend_p{8, 16, 32, 64};
    std::vector<int> residual_p{8, 16, 32, 64, 128};
    int b_constants_p = 24;
};

struct SdeOptions {
    std::string model = "noncommutative";
    double lambda = 0.5;
    Scheme scheme = Scheme::Milstein;
    IntegralSource source;
    std::vector<int> steps{16, 32, 64, 128, 256, 512};
    int fine_steps = 1 << 14;
    int paths = 1000;
};

struct RunConfig {
    Interval interval{0.0, 1.0};
    BasisKind basis = BasisKind::Legendre;
    int k = 2;
    std::vector<int> p{8, 8};
    std::vector<WeightFn> weights = uniform_weights(2);
    NoiseIndexTuple index{1, 2};
    std::uint64_t seed = 1;
    int mc_samples = 1000;
    int grid_N = 4096;
    std::optional<std::string> output;
    bool allow_outside_guarantees = false;
    Execution exec = Execution::Parallel;

    Flavor flavor = Flavor::Ito;
    StratRule strat_rule = StratRule::Midpoint;
    ZetaRule zeta_rule = ZetaRule::LeftPoint;
    std::vector<int> p_list{1, 4, 16, 64};
    int realizations = 10;
    DiagOptions diag;
    SdeOptions sde;

    /// Config as given, echoed into every report.
    nlohmann::json source = nlohmann::json::object();
};

/// Throws ConfigError for missing or mistyped fields.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// Throws ValidationError naming the failed precondition. Preconditions of
/// the mean-square results are waived by allow_outside_guarantees.
void validate(const std::string& command, const RunConfig& cfg);

/// Runs a subcommand and writes its artifacts into `out`.
void run_command(const std::string& command, const RunConfig& cfg, const std::filesystem::path& out);

/// Output directory: the flag, then GMFS_OUTPUT_DIR, then the config, then "gmfs_out".
std::filesystem::path resolve_output(const std::optional<std::string>& flag, const RunConfig& cfg);

/// Entry point shared by the binary and the tests.
int main(int argc, char** argv);
int main(const std::vector<std::string>& args);

/// CSV number format: 17 significant digits.
std::string format_number(double v);

}  // namespace gmfs::cli
