// xx_analytic.hpp — closed-form rapidities of the boundary-driven XX chain.
//
// When J^2 = hbar^2 Gamma_1 Gamma_L the damping matrix P is a bordered
// tridiagonal Toeplitz matrix and L-1 of its eigenvalues have the closed
// form
//   hbar lam_k = -J sin(a_k) sinh(b_k) - i (h_z + J cos(a_k) cosh(b_k)),
//   a_k = k pi / L,
//   b_k = (1 / 2L) ln[(1 + q sin a_k) / (1 - q sin a_k)],
//   q = 2 sqrt(kappa) / (kappa + 1),  kappa = (J / (hbar Gamma_1))^2,
// for k = 1 .. L-1. The remaining eigenvalue is completed through the trace
// identity tr(P) = -i L h_z / hbar - (Gamma_1 + Gamma_L)/2.

#pragma once

#include <vector>

#include "quadlind/model.hpp"
#include "quadlind/types.hpp"

namespace quadlind {

struct AnalyticSpectrum {
    double kappa = 0.0;
    std::vector<double> alphas;    // k pi / L, k = 1 .. L-1
    std::vector<double> betas;
    std::vector<Complex> lambdas;  // L values; last one trace-completed
    bool condition_satisfied = false;
};

// True iff |J^2 - hbar^2 Gamma_1 Gamma_L| <= 1e-12 max(J^2, hbar^2 G1 GL).
bool check_condition(const XXChainParams& p);

// Throws ValidationError("closed form inapplicable") when the condition
// fails, NumericalError("divergent-beta edge case") at kappa = 1 with even
// L (k = L/2 makes the log argument blow up).
AnalyticSpectrum analytic_rapidities(const XXChainParams& p);

// Builds the model, runs the numerical spectral pipeline, matches the two
// multisets (greedy nearest-neighbor) and returns the max deviation.
double compare_analytic_numeric(const XXChainParams& p);

// Greedy nearest-neighbor multiset match; returns the max pair distance.
// Shared by the analytic/numeric comparison and the verification suites.
double match_multisets(std::vector<Complex> a, std::vector<Complex> b);

}  // namespace quadlind
