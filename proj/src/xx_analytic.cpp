#include "quadlind/xx_analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "quadlind/spectral.hpp"
#include "quadlind/structure.hpp"

namespace quadlind {

bool check_condition(const XXChainParams& p) {
    const double lhs = p.J * p.J;
    const double rhs = p.hbar * p.hbar * p.Gamma_1 * p.Gamma_L;
    return std::abs(lhs - rhs) <= 1e-12 * std::max(lhs, rhs);
}

AnalyticSpectrum analytic_rapidities(const XXChainParams& p) {
    check_xx_params(p);
    if (!check_condition(p)) {
        std::ostringstream msg;
        msg << "closed form inapplicable: J^2 = " << p.J * p.J
            << " != hbar^2 Gamma_1 Gamma_L = " << p.hbar * p.hbar * p.Gamma_1 * p.Gamma_L;
        throw ValidationError(msg.str());
    }
    if (p.Gamma_1 <= 0.0) {
        throw ValidationError("closed form inapplicable: Gamma_1 must be positive");
    }

    AnalyticSpectrum out;
    out.condition_satisfied = true;
    out.kappa = (p.J / (p.hbar * p.Gamma_1)) * (p.J / (p.hbar * p.Gamma_1));
    const double q = 2.0 * std::sqrt(out.kappa) / (out.kappa + 1.0);

    const Index L = p.L;
    out.alphas.reserve(static_cast<std::size_t>(L - 1));
    out.betas.reserve(static_cast<std::size_t>(L - 1));
    out.lambdas.reserve(static_cast<std::size_t>(L));

    Complex sum{0.0, 0.0};
    for (Index k = 1; k < L; ++k) {
        const double a = static_cast<double>(k) * std::numbers::pi / static_cast<double>(L);
        const double s = q * std::sin(a);
        if (s >= 1.0 - 1e-12) {
            std::ostringstream msg;
            msg << "divergent-beta edge case at k = " << k
                << " (kappa = " << out.kappa << ", q sin(a) = " << s
                << "); closed form breaks down, use the numerical pipeline";
            throw NumericalError(msg.str());
        }
        const double b = std::log((1.0 + s) / (1.0 - s)) / (2.0 * static_cast<double>(L));
        const Complex lam =
            Complex(-p.J * std::sin(a) * std::sinh(b),
                    -(p.h_z + p.J * std::cos(a) * std::cosh(b))) /
            p.hbar;
        out.alphas.push_back(a);
        out.betas.push_back(b);
        out.lambdas.push_back(lam);
        sum += lam;
    }
    // Trace completion: sum of all L eigenvalues equals tr(P).
    const Complex trace_P(-0.5 * (p.Gamma_1 + p.Gamma_L),
                          -static_cast<double>(L) * p.h_z / p.hbar);
    out.lambdas.push_back(trace_P - sum);
    return out;
}

double match_multisets(std::vector<Complex> a, std::vector<Complex> b) {
    if (a.size() != b.size()) {
        throw ValidationError("match_multisets: size mismatch");
    }
    const auto lex = [](const Complex& x, const Complex& y) {
        if (x.imag() != y.imag()) return x.imag() < y.imag();
        return x.real() < y.real();
    };
    std::sort(a.begin(), a.end(), lex);
    std::sort(b.begin(), b.end(), lex);

    std::vector<bool> used(b.size(), false);
    double worst = 0.0;
    for (const Complex& x : a) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = b.size();
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(x - b[j]);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        used[best_j] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

double compare_analytic_numeric(const XXChainParams& p) {
    const AnalyticSpectrum an = analytic_rapidities(p);
    const Model model = validate_model(build_xx_chain(p));
    const SpectralData sd = rapidities(build_P(model));
    std::vector<Complex> numeric(sd.rapidities.data(), sd.rapidities.data() + sd.rapidities.size());
    return match_multisets(an.lambdas, numeric);
}

}  // namespace quadlind
