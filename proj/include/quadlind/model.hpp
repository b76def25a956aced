// model.hpp — quadratic Lindblad problem data (h, Lambda+, Lambda-) with
// validation, and the boundary-driven XX chain builder.

#pragma once

#include <string>

#include "quadlind/types.hpp"

namespace quadlind {

// Raw problem data before validation.
struct ModelSpec {
    Index L = 0;
    double hbar = 1.0;
    Matrix h;             // L x L Hermitian, energy units
    Matrix lambda_plus;   // L x L Hermitian PSD, gain rates
    Matrix lambda_minus;  // L x L Hermitian PSD, loss rates
};

// Boundary-driven XX chain parameters (spin chain after the fermion mapping).
// Gamma = Lambda- + Lambda+ is the total boundary rate, nbar = Lambda+/Gamma
// the bath filling.
struct XXChainParams {
    Index L = 0;
    double J = 0.0;
    double h_z = 0.0;
    double Gamma_1 = 0.0;
    double Gamma_L = 0.0;
    double nbar_1 = 0.0;
    double nbar_L = 0.0;
    double hbar = 1.0;
};

// Immutable certified model. Construct through validate_model(); all
// invariants (square matrices, Hermiticity, PSD rates, L >= 1, hbar > 0)
// hold for the lifetime of the object. Safe to share across threads.
class Model {
  public:
    Index size() const { return spec_.L; }
    double hbar() const { return spec_.hbar; }
    const Matrix& h() const { return spec_.h; }
    const Matrix& lambda_plus() const { return spec_.lambda_plus; }
    const Matrix& lambda_minus() const { return spec_.lambda_minus; }
    const Tolerances& tolerances() const { return tol_; }

    // True when h is tridiagonal (chain topology); bond currents are only
    // defined in that case.
    bool is_chain() const;

  private:
    friend Model validate_model(ModelSpec spec, const Tolerances& tol);
    Model(ModelSpec spec, const Tolerances& tol) : spec_(std::move(spec)), tol_(tol) {}

    ModelSpec spec_;
    Tolerances tol_;
};

// Certifies a raw spec. Throws ValidationError naming the offending matrix
// and the measured violation.
Model validate_model(ModelSpec spec, const Tolerances& tol = {});

// Tridiagonal h (diagonal 2*h_z, off-diagonals J) with boundary-only
// diagonal dissipation: Lambda+_11 = nbar_1*Gamma_1, Lambda-_11 =
// (1-nbar_1)*Gamma_1, same at site L, zero elsewhere.
ModelSpec build_xx_chain(const XXChainParams& p);

// Parameter-level checks shared by build_xx_chain and the CLI.
void check_xx_params(const XXChainParams& p);

}  // namespace quadlind
