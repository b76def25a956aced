// cli.hpp — command execution behind the quadlind binary: model ingestion,
// solver orchestration, parameter sweeps, verification runs, tabular output.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "quadlind/model.hpp"
#include "quadlind/types.hpp"

namespace quadlind::cli {

enum class Command { Spectrum, Steady, Evolve, XXCompare, Verify, Sweep, Bench };

struct SweepAxis {
    std::string parameter;  // one of J, h_z, Gamma_1, Gamma_L, nbar_1, nbar_L
    std::vector<double> values;
};

struct RunConfig {
    Command command = Command::Spectrum;
    std::optional<std::string> model_path;      // JSON model file
    std::optional<XXChainParams> xx_params;     // inline xx-chain model
    std::optional<std::string> out_path;
    std::string format = "json";                // json | csv
    std::optional<double> tol_override;         // scales Tolerances::hermitian/psd
    std::uint64_t seed = 1;
    int lmax_oracle = 5;
    std::vector<SweepAxis> sweep_axes;          // 1-2 axes, xx models only
    // evolve options
    std::string initial_state = "vacuum";       // vacuum | steady | diag:n1,n2,...
    double t_max = 10.0;
    int n_times = 21;
    // bench options
    std::vector<Index> bench_sizes = {128, 512};
};

// Exit status: 0 success, 1 validation error, 2 numerical failure.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

// Executes one command: prints a human-readable table plus a one-line JSON
// summary to `out`, writes the result file when out_path is set, and maps
// exceptions to exit codes.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses "L,J,h_z,Gamma_1,Gamma_L,nbar_1,nbar_L[,hbar]".
XXChainParams parse_xx_list(const std::string& csv);

// Parses "name=start:stop:count" or "name=v1,v2,v3".
SweepAxis parse_sweep_axis(const std::string& text);

}  // namespace quadlind::cli
