// main.cpp — command-line front end for the quadratic-Lindblad solver.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "quadlind/cli.hpp"

namespace {

void add_model_flags(CLI::App* cmd, std::string& model_path, std::string& xx_list) {
    cmd->add_option("--model", model_path, "JSON model file");
    cmd->add_option("--xx", xx_list,
                    "inline XX chain: L,J,h_z,Gamma_1,Gamma_L,nbar_1,nbar_L[,hbar]");
}

void add_output_flags(CLI::App* cmd, std::string& out_path, std::string& format,
                      double& tol, bool& tol_set) {
    cmd->add_option("--out", out_path, "result file path");
    cmd->add_option("--format", format, "output format: json|csv")->default_val("json");
    cmd->add_option_function<double>(
           "--tol", [&tol, &tol_set](double v) { tol = v; tol_set = true; },
           "override validation tolerances (hermiticity/PSD)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quadlind: quadratic fermionic Lindblad solver"};
    app.require_subcommand(1);

    std::string model_path, xx_list, out_path, format = "json";
    double tol = 0.0;
    bool tol_set = false;
    std::uint64_t seed = 1;
    int lmax_oracle = 5;
    std::string initial_state = "vacuum";
    double t_max = 10.0;
    int n_times = 21;
    std::vector<std::string> sweep_specs;
    std::vector<quadlind::Index> bench_sizes = {128, 512};

    auto* spectrum = app.add_subcommand("spectrum", "rapidities and the paired spectrum");
    add_model_flags(spectrum, model_path, xx_list);
    add_output_flags(spectrum, out_path, format, tol, tol_set);

    auto* steady = app.add_subcommand("steady", "steady-state occupations and currents");
    add_model_flags(steady, model_path, xx_list);
    add_output_flags(steady, out_path, format, tol, tol_set);

    auto* evolve = app.add_subcommand("evolve", "covariance time evolution");
    add_model_flags(evolve, model_path, xx_list);
    add_output_flags(evolve, out_path, format, tol, tol_set);
    evolve->add_option("--c0", initial_state, "initial state: vacuum|steady|diag:n1,...,nL")
        ->default_val("vacuum");
    evolve->add_option("--tmax", t_max, "final time")->default_val(10.0);
    evolve->add_option("--nt", n_times, "number of output times")->default_val(21);

    auto* xx_compare =
        app.add_subcommand("xx-compare", "closed-form vs numerical XX rapidities");
    xx_compare->add_option("--xx", xx_list,
                           "XX chain: L,J,h_z,Gamma_1,Gamma_L,nbar_1,nbar_L[,hbar]")
        ->required();
    add_output_flags(xx_compare, out_path, format, tol, tol_set);

    auto* verify = app.add_subcommand("verify", "cross-check the solver against the "
                                                "brute-force superoperator oracle");
    quadlind::Index verify_L = 2;
    verify->add_option("--L", verify_L, "number of sites for the random models")
        ->default_val(2);
    verify->add_option("--seed", seed, "random-model seed")->default_val(1);
    verify->add_option("--lmax-oracle", lmax_oracle, "largest L the oracle will build")
        ->default_val(5);
    add_output_flags(verify, out_path, format, tol, tol_set);

    auto* sweep = app.add_subcommand("sweep", "grid sweep over XX chain parameters");
    sweep->add_option("--xx", xx_list, "base XX chain parameters")->required();
    sweep->add_option("--sweep", sweep_specs,
                      "axis spec name=v1,v2,... or name=start:stop:count (max 2)");
    add_output_flags(sweep, out_path, format, tol, tol_set);

    auto* bench = app.add_subcommand("bench", "solver timing at chain sizes");
    bench->add_option("--sizes", bench_sizes, "chain sizes to time")
        ->delimiter(',');
    add_output_flags(bench, out_path, format, tol, tol_set);

    CLI11_PARSE(app, argc, argv);

    quadlind::cli::RunConfig cfg;
    try {
        if (spectrum->parsed()) cfg.command = quadlind::cli::Command::Spectrum;
        if (steady->parsed()) cfg.command = quadlind::cli::Command::Steady;
        if (evolve->parsed()) cfg.command = quadlind::cli::Command::Evolve;
        if (xx_compare->parsed()) cfg.command = quadlind::cli::Command::XXCompare;
        if (verify->parsed()) cfg.command = quadlind::cli::Command::Verify;
        if (sweep->parsed()) cfg.command = quadlind::cli::Command::Sweep;
        if (bench->parsed()) cfg.command = quadlind::cli::Command::Bench;

        if (!model_path.empty()) cfg.model_path = model_path;
        if (!xx_list.empty()) cfg.xx_params = quadlind::cli::parse_xx_list(xx_list);
        if (verify->parsed()) {
            quadlind::XXChainParams p;
            p.L = verify_L;
            cfg.xx_params = p;  // carries L only
        }
        if (!out_path.empty()) cfg.out_path = out_path;
        cfg.format = format;
        if (tol_set) cfg.tol_override = tol;
        cfg.seed = seed;
        cfg.lmax_oracle = lmax_oracle;
        cfg.initial_state = initial_state;
        cfg.t_max = t_max;
        cfg.n_times = n_times;
        cfg.bench_sizes = bench_sizes;
        for (const std::string& s : sweep_specs) {
            cfg.sweep_axes.push_back(quadlind::cli::parse_sweep_axis(s));
        }
    } catch (const quadlind::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return quadlind::cli::kExitValidation;
    }

    return quadlind::cli::run(cfg, std::cout, std::cerr);
}
