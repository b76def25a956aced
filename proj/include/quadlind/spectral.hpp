// spectral.hpp — rapidities of the damping matrix P, the paired 2L-mode
// spectrum of M, and the diagonalizing transformation W1.

#pragma once

#include <utility>
#include <vector>

#include "quadlind/model.hpp"
#include "quadlind/types.hpp"

namespace quadlind {

struct SpectralData {
    // Eigenvalues of P sorted by (Im, then Re) ascending; units 1/time.
    Vector rapidities;
    // Right eigenvectors as columns, unit 2-norm, first significant
    // component rotated to be real positive.
    Matrix W_P;
    // Cached inverse of W_P (reused by the steady-state solver).
    Matrix W_P_inv;
    // 1-norm condition estimate ||W_P||_1 * ||W_P^-1||_1.
    double condition_estimate = 0.0;
    // Pairs (i, j), i <= j, with lam_i + conj(lam_j) ~ 0. A nonempty list
    // signals a marginal (dark-mode) problem; the steady state may be
    // non-unique.
    std::vector<std::pair<int, int>> degenerate_pairs;
    // Diagnostics: max Re(lam) (stability demands <= 0 up to roundoff) and
    // the eigenpair residual max|P W - W diag(lam)|.
    double max_real_part = 0.0;
    double eig_residual = 0.0;
};

// Transformation diagonalizing M, assembled from W_P and the Hermitian
// matrix Q of the steady-state solve:
//   W1 = [[W_P, C], [-W_P, D]],  C = W_P Q,  D = -C - (W_P^dag)^-1,
//   W1^-1 = [[-D^dag, C^dag], [-W_P^dag, -W_P^dag]].
// W1^-1 M W1 = diag(rapidities, -conj(rapidities)).
struct W1Assembly {
    Matrix Q;
    Matrix C_mat;
    Matrix D_mat;
    Matrix W1;
    Matrix W1_inv;
};

// Dense non-Hermitian eigendecomposition of P with deterministic ordering
// and gauge. Throws NumericalError if the QR iteration fails to converge;
// near-defective P is flagged through condition_estimate, not fatal.
SpectralData rapidities(const Matrix& P, const Tolerances& tol = {});

// The 2L eigenvalues of M: (lam_1..lam_L, -conj(lam_1)..-conj(lam_L)).
std::vector<Complex> full_spectrum(const SpectralData& sd);

// |sum_i 2 Re(lam_i) + tr(Lp + Lm^T)|. Vanishes identically because
// tr(P + P^dag) = -tr(Lp + Lm^T).
double summing_rule_residual(const SpectralData& sd, const Model& model);

// Throws NumericalError("eigenbasis ill-conditioned") when W_P cannot be
// inverted reliably.
W1Assembly assemble_W1(const SpectralData& sd, const Matrix& Q, const Tolerances& tol = {});

// W = -log(W1) through the eigendecomposition of W1 (principal branch).
// exp(-W) reproduces W1; verified internally with an independent Pade
// exponential to 1e-8. Throws NumericalError for (near-)singular or
// near-defective W1.
Matrix similarity_log(const Matrix& W1, const Tolerances& tol = {});

}  // namespace quadlind
