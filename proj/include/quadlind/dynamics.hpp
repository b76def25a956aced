// dynamics.hpp — closed-form time evolution of the two-point correlation
// matrix C_ij(t) = <adag_i a_j>(t) and relaxation-rate analysis.
//
// The covariance obeys dC/dt = 2(conj(P) C + C P^T + Lp^T); in the
// eigenbasis of P the flow decouples into scalar modes with rates
// 2(conj(lam_i) + lam_j), so propagation is exact (no time stepping).
// The fixed point is the steady-state observable matrix O.

#pragma once

#include <vector>

#include "quadlind/model.hpp"
#include "quadlind/spectral.hpp"
#include "quadlind/types.hpp"

namespace quadlind {

struct EvolutionResult {
    std::vector<double> times;
    std::vector<Matrix> covariances;  // Hermitian, spectrum in [0, 1]
    // Liouvillian gap 2 min(-Re lam); deviations C(t) - O decay with the
    // pair rates -2 Re(lam_i + conj(lam_j)), the slowest of which is twice
    // this value. Zero when the model is marginal.
    double gap = 0.0;
    bool marginal = false;
};

// Exact propagation of C0 through the quadratic flow. C(0) == C0 bitwise.
// Marginal models evolve fine at finite times; `marginal` is set and gap 0.
EvolutionResult evolve_covariance(const Model& model, const Matrix& C0,
                                  std::vector<double> times, const Tolerances& tol = {});

// Slowest Liouvillian decay rate, 2 min_i(-Re lam_i). Throws NumericalError
// ("no gap / marginal") when some rapidity has a vanishing real part.
double spectral_gap(const SpectralData& sd);

}  // namespace quadlind
