// oracle.hpp — brute-force exact-diagonalization reference.
//
// Builds the full Liouvillian as a dense 4^L x 4^L matrix acting on
// column-stacked density matrices (vec(A rho B) = kron(B^T, A) vec(rho)),
// with fermion operators realized by Jordan-Wigner strings (site 1 is
// string-free). Everything here is ground truth for the L x L reduction
// and is only meant for small L.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quadlind/model.hpp"
#include "quadlind/spectral.hpp"
#include "quadlind/types.hpp"

namespace quadlind {

struct SuperOperator {
    Index L = 0;
    Index dim = 0;  // 4^L
    Matrix matrix;
    std::string basis_convention;
};

struct EdSteadyState {
    Matrix rho_ss;  // 2^L x 2^L, Hermitian, PSD, unit trace
    Matrix O_ed;    // O_ij = tr(rho_ss adag_i a_j)
};

Matrix kron(const Matrix& a, const Matrix& b);

// Site lowering operators a_1 .. a_L as 2^L x 2^L matrices.
std::vector<Matrix> jw_lowering_operators(Index L);

// Refuses L > l_max with a memory estimate.
SuperOperator build_liouvillian_superoperator(const Model& model, int l_max = 5);

// Dense null-vector extraction. Throws NumericalError("non-unique steady
// state") when more than one eigenvalue has a vanishing real part.
EdSteadyState ed_steady_state(const SuperOperator& superop, const Tolerances& tol = {});

// Two-point matrix of an explicit density matrix: O_ij = tr(rho adag_i a_j).
Matrix two_point_matrix(const Matrix& rho, Index L);

// Even-sector Liouvillian eigenvalues predicted from the rapidities:
// { sum_i (2 lam_i nu_i + 2 conj(lam_i) nu'_i) : nu, nu' in {0,1}^L,
//   sum_i (nu_i + nu'_i) even }, a multiset of 4^L / 2 values.
std::vector<Complex> predicted_even_spectrum(const SpectralData& sd);

// Propagates rho0 with cached step propagators exp(L dt) and returns the
// two-point matrix O(t) at each requested time (times must be ascending).
std::vector<Matrix> ed_evolve(const SuperOperator& superop, const Matrix& rho0,
                              const std::vector<double>& times);

// Gaussian (quadratic-state) density matrix with prescribed two-point
// matrix C0; inverse of two_point_matrix for Gaussian states.
Matrix gaussian_density_matrix(const Matrix& C0);

// Max |L_ab| between basis states of opposite (n + n') parity. The even and
// odd sectors are decoupled, so this vanishes to roundoff.
double sector_coupling_residual(const SuperOperator& superop);

// Column-stacking helpers.
Vector operator_to_vec(const Matrix& a);
Matrix vec_to_operator(const Vector& v);

}  // namespace quadlind
