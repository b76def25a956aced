#include "quadlind/cli.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "quadlind/dynamics.hpp"
#include "quadlind/json_io.hpp"
#include "quadlind/oracle.hpp"
#include "quadlind/random_models.hpp"
#include "quadlind/spectral.hpp"
#include "quadlind/steadystate.hpp"
#include "quadlind/structure.hpp"
#include "quadlind/xx_analytic.hpp"

namespace quadlind::cli {

using nlohmann::json;

namespace {

// Shortest round-trip decimal form; CSV cells re-parse bitwise.
std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

json cplx(const Complex& z) { return json::array({z.real(), z.imag()}); }

json vec_json(const std::vector<Complex>& v) {
    json out = json::array();
    for (const Complex& z : v) out.push_back(cplx(z));
    return out;
}

json real_vec_json(const RealVector& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write output file: " + path);
    out << text;
}

double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(std::string("cannot parse ") + what + ": '" + s + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

Tolerances make_tolerances(const RunConfig& cfg) {
    Tolerances tol;
    if (cfg.tol_override) {
        tol.hermitian = *cfg.tol_override;
        tol.psd = *cfg.tol_override;
    }
    return tol;
}

Model load_model(const RunConfig& cfg) {
    if (cfg.model_path && cfg.xx_params) {
        throw ValidationError("give either --model or --xx, not both");
    }
    if (cfg.model_path) {
        return validate_model(load_model_file(*cfg.model_path), make_tolerances(cfg));
    }
    if (cfg.xx_params) {
        return validate_model(build_xx_chain(*cfg.xx_params), make_tolerances(cfg));
    }
    throw ValidationError("no model source: give --model <path> or --xx <params>");
}

// Greedy nearest-neighbour pairing; returns for each a-index the matched
// b-index.
std::vector<std::size_t> pair_multisets(const std::vector<Complex>& a,
                                        const std::vector<Complex>& b) {
    std::vector<bool> used(b.size(), false);
    std::vector<std::size_t> match(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bj = 0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(a[i] - b[j]);
            if (d < best) {
                best = d;
                bj = j;
            }
        }
        used[bj] = true;
        match[i] = bj;
    }
    return match;
}

void emit_summary(std::ostream& out, const json& summary) { out << summary.dump() << "\n"; }

void write_result(const RunConfig& cfg, const json& full, const std::string& csv) {
    if (!cfg.out_path) return;
    if (cfg.format == "json") {
        write_file(*cfg.out_path, full.dump(2) + "\n");
    } else if (cfg.format == "csv") {
        write_file(*cfg.out_path, csv);
    } else {
        throw ValidationError("unknown format '" + cfg.format + "' (expected json or csv)");
    }
}

// ----------------------------------------------------------------- spectrum

int run_spectrum(const RunConfig& cfg, std::ostream& out) {
    const Model m = load_model(cfg);
    const SpectralData sd = rapidities(build_P(m), make_tolerances(cfg));

    bool marginal = false;
    double gap = 0.0;
    try {
        gap = spectral_gap(sd);
    } catch (const NumericalError&) {
        marginal = true;
    }
    const double sum_res = summing_rule_residual(sd, m);

    out << "rapidities (L = " << m.size() << ")\n";
    out << std::setw(6) << "k" << std::setw(24) << "Re" << std::setw(24) << "Im" << "\n";
    for (Index i = 0; i < sd.rapidities.size(); ++i) {
        out << std::setw(6) << i << std::setw(24) << fmt(sd.rapidities[i].real())
            << std::setw(24) << fmt(sd.rapidities[i].imag()) << "\n";
    }
    out << "summing-rule residual: " << fmt(sum_res) << "\n";
    out << "condition estimate:    " << fmt(sd.condition_estimate) << "\n";
    if (marginal) {
        out << "gap: none (marginal spectrum)\n";
    } else {
        out << "gap: " << fmt(gap) << "\n";
    }

    std::vector<Complex> raps(sd.rapidities.data(),
                              sd.rapidities.data() + sd.rapidities.size());
    json full;
    full["command"] = "spectrum";
    full["L"] = m.size();
    full["hbar"] = m.hbar();
    full["rapidities"] = vec_json(raps);
    full["full_spectrum"] = vec_json(full_spectrum(sd));
    full["summing_rule_residual"] = sum_res;
    full["condition_estimate"] = sd.condition_estimate;
    full["marginal"] = marginal;
    if (marginal) {
        full["gap"] = nullptr;
    } else {
        full["gap"] = gap;
    }

    std::ostringstream csv;
    csv << "k,lambda_re,lambda_im\n";
    for (Index i = 0; i < sd.rapidities.size(); ++i) {
        csv << i << "," << fmt(sd.rapidities[i].real()) << ","
            << fmt(sd.rapidities[i].imag()) << "\n";
    }
    write_result(cfg, full, csv.str());

    json summary = {{"command", "spectrum"},
                    {"L", m.size()},
                    {"summing_rule_residual", sum_res},
                    {"condition_estimate", sd.condition_estimate},
                    {"marginal", marginal}};
    if (!marginal) summary["gap"] = gap;
    emit_summary(out, summary);
    return kExitOk;
}

// ------------------------------------------------------------------- steady

int run_steady(const RunConfig& cfg, std::ostream& out) {
    const Model m = load_model(cfg);
    const Tolerances tol = make_tolerances(cfg);
    const SpectralData sd = rapidities(build_P(m), tol);
    const SteadyStateData ss = steady_state(m, sd, tol);

    out << "steady state (L = " << m.size() << ")\n";
    out << std::setw(6) << "site" << std::setw(24) << "occupation" << std::setw(24)
        << "current_to_next" << "\n";
    for (Index i = 0; i < m.size(); ++i) {
        out << std::setw(6) << (i + 1) << std::setw(24) << fmt(ss.occupations[i]);
        if (i < ss.currents.size()) {
            out << std::setw(24) << fmt(ss.currents[i]);
        } else {
            out << std::setw(24) << "-";
        }
        out << "\n";
    }
    out << "lyapunov residual: " << fmt(ss.lyapunov_residual) << "\n";

    json full;
    full["command"] = "steady";
    full["L"] = m.size();
    full["occupations"] = real_vec_json(ss.occupations);
    full["currents"] = real_vec_json(ss.currents);
    full["lyapunov_residual"] = ss.lyapunov_residual;
    full["O"] = matrix_to_json(ss.O);
    full["Omega"] = matrix_to_json(ss.Omega);

    std::ostringstream csv;
    csv << "site,occupation,current_to_next\n";
    for (Index i = 0; i < m.size(); ++i) {
        csv << (i + 1) << "," << fmt(ss.occupations[i]) << ",";
        if (i < ss.currents.size()) csv << fmt(ss.currents[i]);
        csv << "\n";
    }
    write_result(cfg, full, csv.str());

    emit_summary(out, json{{"command", "steady"},
                           {"L", m.size()},
                           {"lyapunov_residual", ss.lyapunov_residual},
                           {"occupation_first", ss.occupations[0]},
                           {"occupation_last", ss.occupations[m.size() - 1]}});
    return kExitOk;
}

// ------------------------------------------------------------------- evolve

Matrix initial_covariance(const RunConfig& cfg, const Model& m, const SpectralData& sd,
                          const Tolerances& tol) {
    if (cfg.initial_state == "vacuum") return Matrix::Zero(m.size(), m.size());
    if (cfg.initial_state == "steady") return steady_state(m, sd, tol).O;
    if (cfg.initial_state.rfind("diag:", 0) == 0) {
        const auto parts = split(cfg.initial_state.substr(5), ',');
        if (static_cast<Index>(parts.size()) != m.size()) {
            throw ValidationError("diag: initial state needs exactly L fillings");
        }
        Matrix c = Matrix::Zero(m.size(), m.size());
        for (Index i = 0; i < m.size(); ++i) {
            c(i, i) = parse_double(parts[static_cast<std::size_t>(i)], "initial filling");
        }
        return c;
    }
    throw ValidationError("unknown initial state '" + cfg.initial_state +
                          "' (vacuum | steady | diag:n1,...,nL)");
}

int run_evolve(const RunConfig& cfg, std::ostream& out) {
    const Model m = load_model(cfg);
    const Tolerances tol = make_tolerances(cfg);
    const SpectralData sd = rapidities(build_P(m), tol);
    const Matrix C0 = initial_covariance(cfg, m, sd, tol);

    if (cfg.n_times < 2) throw ValidationError("evolve needs at least 2 time points");
    if (!(cfg.t_max > 0.0)) throw ValidationError("evolve needs t_max > 0");
    std::vector<double> times(static_cast<std::size_t>(cfg.n_times));
    for (int k = 0; k < cfg.n_times; ++k) {
        times[static_cast<std::size_t>(k)] = cfg.t_max * k / (cfg.n_times - 1);
    }

    const EvolutionResult r = evolve_covariance(m, C0, times, tol);

    out << "occupation trajectory (L = " << m.size() << ")\n";
    out << std::setw(20) << "t";
    for (Index i = 0; i < m.size(); ++i) {
        out << std::setw(20) << ("n_" + std::to_string(i + 1));
    }
    out << "\n";
    for (std::size_t k = 0; k < r.times.size(); ++k) {
        out << std::setw(20) << fmt(r.times[k]);
        for (Index i = 0; i < m.size(); ++i) {
            out << std::setw(20) << fmt(r.covariances[k](i, i).real());
        }
        out << "\n";
    }

    json full;
    full["command"] = "evolve";
    full["L"] = m.size();
    full["times"] = r.times;
    full["marginal"] = r.marginal;
    if (!r.marginal) full["gap"] = r.gap;
    json occs = json::array();
    for (const Matrix& c : r.covariances) {
        occs.push_back(real_vec_json(c.diagonal().real()));
    }
    full["occupations"] = occs;

    std::ostringstream csv;
    csv << "t";
    for (Index i = 0; i < m.size(); ++i) csv << ",n_" << (i + 1);
    csv << "\n";
    for (std::size_t k = 0; k < r.times.size(); ++k) {
        csv << fmt(r.times[k]);
        for (Index i = 0; i < m.size(); ++i) {
            csv << "," << fmt(r.covariances[k](i, i).real());
        }
        csv << "\n";
    }
    write_result(cfg, full, csv.str());

    json summary{{"command", "evolve"},
                 {"L", m.size()},
                 {"t_max", cfg.t_max},
                 {"marginal", r.marginal}};
    if (!r.marginal) summary["gap"] = r.gap;
    emit_summary(out, summary);
    return kExitOk;
}

// --------------------------------------------------------------- xx-compare

int run_xx_compare(const RunConfig& cfg, std::ostream& out) {
    if (!cfg.xx_params) throw ValidationError("xx-compare needs --xx parameters");
    const XXChainParams p = *cfg.xx_params;
    const AnalyticSpectrum an = analytic_rapidities(p);
    const Model m = validate_model(build_xx_chain(p), make_tolerances(cfg));
    const SpectralData sd = rapidities(build_P(m));
    std::vector<Complex> numeric(sd.rapidities.data(),
                                 sd.rapidities.data() + sd.rapidities.size());

    const auto pairing = pair_multisets(an.lambdas, numeric);
    double max_dev = 0.0;
    for (std::size_t i = 0; i < an.lambdas.size(); ++i) {
        max_dev = std::max(max_dev, std::abs(an.lambdas[i] - numeric[pairing[i]]));
    }

    out << "closed form vs numerics (L = " << p.L << ", kappa = " << fmt(an.kappa) << ")\n";
    out << std::setw(6) << "k" << std::setw(24) << "analytic_re" << std::setw(24)
        << "analytic_im" << std::setw(24) << "numeric_re" << std::setw(24) << "numeric_im"
        << std::setw(14) << "abs_err" << "\n";
    for (std::size_t i = 0; i < an.lambdas.size(); ++i) {
        const Complex a = an.lambdas[i];
        const Complex b = numeric[pairing[i]];
        out << std::setw(6) << (i + 1) << std::setw(24) << fmt(a.real()) << std::setw(24)
            << fmt(a.imag()) << std::setw(24) << fmt(b.real()) << std::setw(24)
            << fmt(b.imag()) << std::setw(14) << fmt(std::abs(a - b)) << "\n";
    }
    out << "max deviation: " << fmt(max_dev) << "\n";

    json full;
    full["command"] = "xx-compare";
    full["params"] = xx_params_to_json(p);
    full["kappa"] = an.kappa;
    full["condition_satisfied"] = an.condition_satisfied;
    full["analytic"] = vec_json(an.lambdas);
    full["numeric"] = vec_json(numeric);
    full["max_deviation"] = max_dev;

    std::ostringstream csv;
    csv << "k,analytic_re,analytic_im,numeric_re,numeric_im,abs_err\n";
    for (std::size_t i = 0; i < an.lambdas.size(); ++i) {
        const Complex a = an.lambdas[i];
        const Complex b = numeric[pairing[i]];
        csv << (i + 1) << "," << fmt(a.real()) << "," << fmt(a.imag()) << ","
            << fmt(b.real()) << "," << fmt(b.imag()) << "," << fmt(std::abs(a - b)) << "\n";
    }
    write_result(cfg, full, csv.str());

    emit_summary(out, json{{"command", "xx-compare"},
                           {"L", p.L},
                           {"kappa", an.kappa},
                           {"max_deviation", max_dev}});
    return kExitOk;
}

// ------------------------------------------------------------------- verify

struct Check {
    std::string name;
    double residual = 0.0;
    double threshold = 0.0;
    bool pass() const { return residual <= threshold; }
};

int run_verify(const RunConfig& cfg, std::ostream& out) {
    const Index L = cfg.xx_params ? cfg.xx_params->L : 2;
    const int trials = 5;
    const Tolerances tol = make_tolerances(cfg);

    std::vector<Check> checks = {
        {"M symmetry", 0.0, 1e-12},
        {"pairing eig(M) = {lam} u {-conj lam}", 0.0, 1e-10},
        {"summing rule", 0.0, 1e-10},
        {"lyapunov residual", 0.0, 1e-10},
        {"O vs ED oracle", 0.0, 1e-8},
        {"even-spectrum containment", 0.0, 1e-8},
        {"sector decoupling", 0.0, 1e-12},
        {"trace preservation", 0.0, 1e-10},
        {"trajectory vs ED oracle", 0.0, 1e-6},
    };
    const bool with_oracle = L <= cfg.lmax_oracle;

    for (int trial = 0; trial < trials; ++trial) {
        const std::uint64_t seed = cfg.seed * 1000 + static_cast<std::uint64_t>(trial);
        const Model m = validate_model(random_model(L, seed), tol);
        const StructureMatrices sm = build_structure(m);
        const SpectralData sd = rapidities(sm.P, tol);
        const SteadyStateData ss = steady_state(m, sd, tol);

        checks[0].residual = std::max(checks[0].residual, check_M_symmetry(sm.M));

        Eigen::ComplexEigenSolver<Matrix> es(sm.M, false);
        std::vector<Complex> eig_m(es.eigenvalues().data(),
                                   es.eigenvalues().data() + es.eigenvalues().size());
        checks[1].residual =
            std::max(checks[1].residual, match_multisets(full_spectrum(sd), eig_m));

        checks[2].residual = std::max(checks[2].residual, summing_rule_residual(sd, m));
        checks[3].residual = std::max(checks[3].residual, ss.lyapunov_residual);

        if (with_oracle) {
            const SuperOperator s = build_liouvillian_superoperator(m, cfg.lmax_oracle);
            const EdSteadyState ed = ed_steady_state(s, tol);
            checks[4].residual =
                std::max(checks[4].residual, max_abs(Matrix(ss.O - ed.O_ed)));

            Eigen::ComplexEigenSolver<Matrix> les(s.matrix, false);
            std::vector<Complex> led(les.eigenvalues().data(),
                                     les.eigenvalues().data() + les.eigenvalues().size());
            const auto predicted = predicted_even_spectrum(sd);
            const auto pairing = pair_multisets(predicted, led);
            double dev = 0.0;
            for (std::size_t i = 0; i < predicted.size(); ++i) {
                dev = std::max(dev, std::abs(predicted[i] - led[pairing[i]]));
            }
            checks[5].residual = std::max(checks[5].residual, dev);

            checks[6].residual = std::max(checks[6].residual, sector_coupling_residual(s));

            const Index d = Index{1} << L;
            const Vector id_vec = operator_to_vec(Matrix::Identity(d, d));
            checks[7].residual = std::max(
                checks[7].residual, (id_vec.adjoint() * s.matrix).cwiseAbs().maxCoeff());

            const double gap = spectral_gap(sd);
            std::mt19937_64 rng(seed + 17);
            const Matrix C0 = random_covariance(L, rng);
            std::vector<double> times;
            for (int k = 0; k <= 8; ++k) times.push_back(10.0 / gap * k / 8.0);
            const EvolutionResult r = evolve_covariance(m, C0, times, tol);
            const auto oracle = ed_evolve(s, gaussian_density_matrix(C0), times);
            double terr = 0.0;
            for (std::size_t k = 0; k < times.size(); ++k) {
                terr = std::max(terr, max_abs(Matrix(r.covariances[k] - oracle[k])));
            }
            checks[8].residual = std::max(checks[8].residual, terr);
        }
    }

    bool all_pass = true;
    out << "verification: L = " << L << ", seed = " << cfg.seed << ", " << trials
        << " random models\n";
    json jchecks = json::array();
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const Check& c = checks[i];
        const bool skipped = !with_oracle && i >= 4;
        out << "  [" << (skipped ? "skip" : (c.pass() ? "ok" : "FAIL")) << "] " << std::left
            << std::setw(40) << c.name << std::right << " residual " << fmt(c.residual)
            << " vs " << fmt(c.threshold) << "\n";
        if (!skipped) {
            all_pass = all_pass && c.pass();
            jchecks.push_back({{"name", c.name},
                               {"residual", c.residual},
                               {"threshold", c.threshold},
                               {"pass", c.pass()}});
        }
    }

    json full{{"command", "verify"}, {"L", L},         {"seed", cfg.seed},
              {"trials", trials},    {"checks", jchecks}, {"all_pass", all_pass}};
    std::ostringstream csv;
    csv << "check,residual,threshold,pass\n";
    for (const auto& c : jchecks) {
        csv << c["name"].get<std::string>() << "," << fmt(c["residual"].get<double>()) << ","
            << fmt(c["threshold"].get<double>()) << "," << (c["pass"].get<bool>() ? 1 : 0)
            << "\n";
    }
    write_result(cfg, full, csv.str());
    emit_summary(out, json{{"command", "verify"}, {"L", L}, {"all_pass", all_pass}});
    return all_pass ? kExitOk : kExitNumerical;
}

// -------------------------------------------------------------------- sweep

int sweep_threads(std::size_t grid_size) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("QUADLIND_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v >= 1) n = static_cast<unsigned>(v);
        } catch (const std::exception&) {
            throw ValidationError(std::string("bad QUADLIND_THREADS value: ") + env);
        }
    }
    return static_cast<int>(std::min<std::size_t>(n, std::max<std::size_t>(grid_size, 1)));
}

void set_param(XXChainParams& p, const std::string& name, double v) {
    if (name == "J") {
        p.J = v;
    } else if (name == "h_z") {
        p.h_z = v;
    } else if (name == "Gamma_1") {
        p.Gamma_1 = v;
    } else if (name == "Gamma_L") {
        p.Gamma_L = v;
    } else if (name == "nbar_1") {
        p.nbar_1 = v;
    } else if (name == "nbar_L") {
        p.nbar_L = v;
    } else {
        throw ValidationError("unknown sweep parameter '" + name +
                              "' (J, h_z, Gamma_1, Gamma_L, nbar_1, nbar_L)");
    }
}

json sweep_point(const RunConfig& cfg, const XXChainParams& p) {
    json row;
    row["status"] = "ok";
    try {
        const Tolerances tol = make_tolerances(cfg);
        const Model m = validate_model(build_xx_chain(p), tol);
        const SpectralData sd = rapidities(build_P(m), tol);
        row["re_min"] = sd.rapidities.real().minCoeff();
        row["re_max"] = sd.rapidities.real().maxCoeff();
        row["im_max"] = sd.rapidities.imag().cwiseAbs().maxCoeff();
        row["gap"] = spectral_gap(sd);
        const SteadyStateData ss = steady_state(m, sd, tol);
        row["occ_first"] = ss.occupations[0];
        row["occ_last"] = ss.occupations[ss.occupations.size() - 1];
        row["current"] = ss.currents.size() > 0 ? ss.currents.mean() : 0.0;
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (char& c : msg) {
            if (c == ',' || c == '\n') c = ';';
        }
        row["status"] = msg;
    }
    return row;
}

int run_sweep(const RunConfig& cfg, std::ostream& out) {
    if (!cfg.xx_params) throw ValidationError("sweep needs a --xx base model");
    if (cfg.sweep_axes.empty() || cfg.sweep_axes.size() > 2) {
        throw ValidationError("sweep needs 1 or 2 --sweep axes");
    }
    for (const SweepAxis& ax : cfg.sweep_axes) {
        if (ax.values.empty()) {
            throw ValidationError("sweep axis '" + ax.parameter + "' is empty");
        }
        XXChainParams probe = *cfg.xx_params;
        set_param(probe, ax.parameter, ax.values[0]);  // validates the name
    }

    // Full grid in deterministic row order (first axis outer).
    struct Point {
        std::size_t index;
        XXChainParams params;
        std::vector<double> axis_values;
    };
    std::vector<Point> grid;
    const SweepAxis& ax0 = cfg.sweep_axes[0];
    if (cfg.sweep_axes.size() == 1) {
        for (std::size_t i = 0; i < ax0.values.size(); ++i) {
            XXChainParams p = *cfg.xx_params;
            set_param(p, ax0.parameter, ax0.values[i]);
            grid.push_back({grid.size(), p, {ax0.values[i]}});
        }
    } else {
        const SweepAxis& ax1 = cfg.sweep_axes[1];
        for (std::size_t i = 0; i < ax0.values.size(); ++i) {
            for (std::size_t j = 0; j < ax1.values.size(); ++j) {
                XXChainParams p = *cfg.xx_params;
                set_param(p, ax0.parameter, ax0.values[i]);
                set_param(p, ax1.parameter, ax1.values[j]);
                grid.push_back({grid.size(), p, {ax0.values[i], ax1.values[j]}});
            }
        }
    }

    // Resume from the completed-row manifest when present.
    const std::string manifest_path =
        cfg.out_path ? *cfg.out_path + ".manifest" : "sweep.manifest";
    std::vector<json> rows(grid.size());
    std::vector<bool> done(grid.size(), false);
    {
        std::ifstream in(manifest_path);
        std::string line;
        while (in && std::getline(in, line)) {
            if (line.empty()) continue;
            try {
                const json entry = json::parse(line);
                const auto idx = entry.at("index").get<std::size_t>();
                if (idx < grid.size()) {
                    rows[idx] = entry.at("row");
                    done[idx] = true;
                }
            } catch (const json::exception&) {
                // ignore torn trailing writes from an interrupted run
            }
        }
    }

    std::ofstream manifest(manifest_path, std::ios::app);
    std::mutex mu;
    std::atomic<std::size_t> cursor{0};
    const int n_workers = sweep_threads(grid.size());
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(n_workers));
    for (int w = 0; w < n_workers; ++w) {
        workers.emplace_back([&]() {
            for (;;) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= grid.size()) return;
                if (done[i]) continue;
                json row = sweep_point(cfg, grid[i].params);
                std::lock_guard<std::mutex> lock(mu);
                rows[i] = row;
                done[i] = true;
                manifest << json{{"index", i}, {"row", row}}.dump() << "\n";
                manifest.flush();
            }
        });
    }
    for (std::thread& t : workers) t.join();

    // Assemble the table in index order.
    std::vector<std::string> axis_names;
    axis_names.reserve(cfg.sweep_axes.size());
    for (const SweepAxis& ax : cfg.sweep_axes) axis_names.push_back(ax.parameter);
    const std::vector<std::string> value_cols = {"gap",       "re_min",   "re_max",
                                                 "im_max",    "occ_first", "occ_last",
                                                 "current"};

    std::ostringstream csv;
    csv << "index";
    for (const auto& n : axis_names) csv << "," << n;
    for (const auto& c : value_cols) csv << "," << c;
    csv << ",status\n";
    json jrows = json::array();
    std::size_t n_failed = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const json& row = rows[i];
        const bool ok = row.value("status", std::string("missing")) == "ok";
        if (!ok) ++n_failed;
        csv << i;
        for (double v : grid[i].axis_values) csv << "," << fmt(v);
        for (const auto& c : value_cols) {
            csv << ",";
            if (ok) csv << fmt(row.at(c).get<double>());
        }
        csv << "," << row.value("status", std::string("missing")) << "\n";

        json jrow = row;
        jrow["index"] = i;
        for (std::size_t a = 0; a < axis_names.size(); ++a) {
            jrow[axis_names[a]] = grid[i].axis_values[a];
        }
        jrows.push_back(std::move(jrow));
    }

    out << "sweep over";
    for (const auto& n : axis_names) out << " " << n;
    out << ": " << grid.size() << " points, " << n_failed << " failed\n";
    out << csv.str();

    json full{{"command", "sweep"},
              {"rows", jrows},
              {"n_points", grid.size()},
              {"n_failed", n_failed}};
    write_result(cfg, full, csv.str());
    emit_summary(out, json{{"command", "sweep"},
                           {"n_points", grid.size()},
                           {"n_failed", n_failed},
                           {"manifest", manifest_path}});
    return kExitOk;
}

// -------------------------------------------------------------------- bench

int run_bench(const RunConfig& cfg, std::ostream& out) {
    json sizes = json::array();
    std::vector<double> secs;
    for (Index L : cfg.bench_sizes) {
        XXChainParams p;
        p.L = L;
        p.J = 1.0;
        p.h_z = 0.3;
        p.Gamma_1 = 2.0;
        p.Gamma_L = 0.5;
        p.nbar_1 = 0.9;
        p.nbar_L = 0.1;
        const Model m = validate_model(build_xx_chain(p));
        const auto t0 = std::chrono::steady_clock::now();
        const SpectralData sd = rapidities(build_P(m));
        const SteadyStateData ss = steady_state(m, sd);
        const auto t1 = std::chrono::steady_clock::now();
        const double dt = std::chrono::duration<double>(t1 - t0).count();
        secs.push_back(dt);
        out << "L = " << std::setw(6) << L << "  solve " << fmt(dt) << " s  (gap "
            << fmt(2.0 * -sd.rapidities.real().maxCoeff()) << ", lyapunov residual "
            << fmt(ss.lyapunov_residual) << ")\n";
        sizes.push_back({{"L", L}, {"seconds", dt}});
    }
    json full{{"command", "bench"}, {"runs", sizes}};
    if (secs.size() >= 2) {
        const double ratio = secs.back() / secs.front();
        const double l_ratio = static_cast<double>(cfg.bench_sizes.back()) /
                               static_cast<double>(cfg.bench_sizes.front());
        full["time_ratio"] = ratio;
        full["cubic_ratio"] = l_ratio * l_ratio * l_ratio;
        out << "time ratio " << fmt(ratio) << " vs cubic "
            << fmt(l_ratio * l_ratio * l_ratio) << "\n";
    }
    write_result(cfg, full, "");
    emit_summary(out, full);
    return kExitOk;
}

}  // namespace

XXChainParams parse_xx_list(const std::string& csv) {
    const auto parts = split(csv, ',');
    if (parts.size() != 7 && parts.size() != 8) {
        throw ValidationError(
            "--xx expects L,J,h_z,Gamma_1,Gamma_L,nbar_1,nbar_L[,hbar], got " +
            std::to_string(parts.size()) + " fields");
    }
    XXChainParams p;
    const double L = parse_double(parts[0], "L");
    if (L < 1.0 || L != std::floor(L)) {
        throw ValidationError("--xx: L must be a positive integer");
    }
    p.L = static_cast<Index>(L);
    p.J = parse_double(parts[1], "J");
    p.h_z = parse_double(parts[2], "h_z");
    p.Gamma_1 = parse_double(parts[3], "Gamma_1");
    p.Gamma_L = parse_double(parts[4], "Gamma_L");
    p.nbar_1 = parse_double(parts[5], "nbar_1");
    p.nbar_L = parse_double(parts[6], "nbar_L");
    if (parts.size() == 8) p.hbar = parse_double(parts[7], "hbar");
    check_xx_params(p);
    return p;
}

SweepAxis parse_sweep_axis(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ValidationError("--sweep expects name=v1,v2,... or name=start:stop:count");
    }
    SweepAxis ax;
    ax.parameter = text.substr(0, eq);
    const std::string rhs = text.substr(eq + 1);
    if (rhs.find(':') != std::string::npos) {
        const auto parts = split(rhs, ':');
        if (parts.size() != 3) throw ValidationError("--sweep range needs start:stop:count");
        const double start = parse_double(parts[0], "sweep start");
        const double stop = parse_double(parts[1], "sweep stop");
        const double count_d = parse_double(parts[2], "sweep count");
        const int count = static_cast<int>(count_d);
        if (count < 1 || count_d != std::floor(count_d)) {
            throw ValidationError("--sweep count must be a positive integer");
        }
        for (int k = 0; k < count; ++k) {
            ax.values.push_back(count == 1 ? start
                                           : start + (stop - start) * k / (count - 1));
        }
    } else {
        for (const std::string& v : split(rhs, ',')) {
            ax.values.push_back(parse_double(v, "sweep value"));
        }
    }
    return ax;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        switch (cfg.command) {
            case Command::Spectrum:
                return run_spectrum(cfg, out);
            case Command::Steady:
                return run_steady(cfg, out);
            case Command::Evolve:
                return run_evolve(cfg, out);
            case Command::XXCompare:
                return run_xx_compare(cfg, out);
            case Command::Verify:
                return run_verify(cfg, out);
            case Command::Sweep:
                return run_sweep(cfg, out);
            case Command::Bench:
                return run_bench(cfg, out);
        }
        err << "error: unknown command\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace quadlind::cli
