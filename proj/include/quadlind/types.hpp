// types.hpp — shared scalar/matrix aliases, tolerances, and error categories

#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace quadlind {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

// Numerical knobs. Defaults assume double precision with dense O(L^3) kernels.
struct Tolerances {
    double hermitian = 1e-10;      // Hermiticity violation, relative to max-norm
    double psd = 1e-10;            // allowed negative-eigenvalue excursion
    double gap_factor = 1e-12;     // |lam_i + conj(lam_j)| below this x max|lam| is marginal
    double condition_limit = 1e8;  // eigenbasis conditioning above this is low-confidence
};

// Rejected input: bad dimensions, non-Hermitian h, negative rates, ...
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Numerically meaningless request: marginal steady state, ill-conditioned
// eigenbasis, non-converged solver, ...
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Max absolute entry. Scale-free residual norm used for all checks.
inline double max_abs(const Matrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline double hermiticity_residual(const Matrix& a) {
    return max_abs(a - a.adjoint());
}

// Max column sum of absolute values (matrix 1-norm).
inline double one_norm(const Matrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace quadlind
