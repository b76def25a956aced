// steadystate.hpp — steady-state correlation matrix via the Lyapunov
// equation P Omega + Omega P^dag = Lp, and derived observables.

#pragma once

#include "quadlind/model.hpp"
#include "quadlind/spectral.hpp"
#include "quadlind/types.hpp"

namespace quadlind {

struct SteadyStateData {
    Matrix Omega;             // L x L, solves P Omega + Omega P^dag = Lp
    Matrix Q;                 // Hermitian, Q = W_P^-1 Omega W_P^-dag
    Matrix O;                 // observable matrix O_ij = <adag_i a_j> = -Omega^T
    RealVector occupations;   // Re diag(O)
    RealVector currents;      // bond currents, length L-1; empty for non-chain h
    double lyapunov_residual = 0.0;
};

// Spectral-route solve: Q_ij = (W^-1 Lp W^-dag)_ij / (lam_i + conj(lam_j)),
// Omega = W Q W^dag, with Q re-Hermitized. Falls back to the Schur route
// when cond(W_P) exceeds tol.condition_limit. Throws NumericalError naming
// the offending pair when some |lam_i + conj(lam_j)| is below the marginal
// threshold (non-unique or marginal steady state).
Matrix solve_lyapunov(const Matrix& P, const Matrix& lambda_plus, const SpectralData& sd,
                      const Tolerances& tol = {});

// Independent Bartels-Stewart route: complex Schur form of P, then a
// two-sided triangular back-substitution. Used as the fallback and as the
// second algebraic route in tests.
Matrix solve_lyapunov_schur(const Matrix& P, const Matrix& lambda_plus,
                            const Tolerances& tol = {});

// O = -Omega^T, checked Hermitian with spectrum inside [-1e-8, 1 + 1e-8].
Matrix observables(const Matrix& Omega);

// Continuity-equation bond currents j_l = (2/hbar) Im(h_{l,l+1} O_{l,l+1}),
// defined for tridiagonal (chain) h only.
RealVector particle_current(const Matrix& O, const Model& model);

// Convenience bundle: Lyapunov solve + observables (+ currents when h is a
// chain).
SteadyStateData steady_state(const Model& model, const SpectralData& sd,
                             const Tolerances& tol = {});

}  // namespace quadlind
