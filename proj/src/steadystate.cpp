#include "quadlind/steadystate.hpp"

#include <cmath>
#include <sstream>

#include "quadlind/structure.hpp"

namespace quadlind {

namespace {

double lyapunov_residual(const Matrix& P, const Matrix& Omega, const Matrix& Lp) {
    return max_abs(Matrix(P * Omega + Omega * P.adjoint() - Lp));
}

Matrix solve_spectral_route(const Matrix& Lp, const SpectralData& sd, const Tolerances& tol) {
    const Index L = sd.rapidities.size();
    const Matrix R = sd.W_P_inv * Lp * sd.W_P_inv.adjoint();
    const double lam_scale = std::max(1.0, sd.rapidities.cwiseAbs().maxCoeff());
    Matrix Q(L, L);
    for (Index i = 0; i < L; ++i) {
        for (Index j = 0; j < L; ++j) {
            const Complex denom = sd.rapidities[i] + std::conj(sd.rapidities[j]);
            if (std::abs(denom) <= tol.gap_factor * lam_scale) {
                std::ostringstream msg;
                msg << "non-unique or marginal steady state: |lam_" << i << " + conj(lam_" << j
                    << ")| = " << std::abs(denom) << " (lam_" << i << " = " << sd.rapidities[i]
                    << ", lam_" << j << " = " << sd.rapidities[j] << ")";
                throw NumericalError(msg.str());
            }
            Q(i, j) = R(i, j) / denom;
        }
    }
    Q = 0.5 * (Q + Q.adjoint()).eval();  // Q is Hermitian; suppress roundoff drift
    return sd.W_P * Q * sd.W_P.adjoint();
}

}  // namespace

Matrix solve_lyapunov_schur(const Matrix& P, const Matrix& lambda_plus, const Tolerances& tol) {
    const Index n = P.rows();
    Eigen::ComplexSchur<Matrix> schur(P, /*computeU=*/true);
    if (schur.info() != Eigen::Success) {
        throw NumericalError("solve_lyapunov_schur: Schur decomposition did not converge");
    }
    const Matrix& T = schur.matrixT();
    const Matrix& U = schur.matrixU();
    const Matrix B = U.adjoint() * lambda_plus * U;

    const double lam_scale = std::max(1.0, T.diagonal().cwiseAbs().maxCoeff());
    // T Y + Y T^dag = B with T upper triangular: both loops descending makes
    // every referenced entry already known.
    Matrix Y = Matrix::Zero(n, n);
    for (Index i = n - 1; i >= 0; --i) {
        for (Index j = n - 1; j >= 0; --j) {
            Complex s = B(i, j);
            for (Index k = i + 1; k < n; ++k) s -= T(i, k) * Y(k, j);
            for (Index k = j + 1; k < n; ++k) s -= Y(i, k) * std::conj(T(j, k));
            const Complex denom = T(i, i) + std::conj(T(j, j));
            if (std::abs(denom) <= tol.gap_factor * lam_scale) {
                std::ostringstream msg;
                msg << "non-unique or marginal steady state (Schur route): |T_" << i << i
                    << " + conj(T_" << j << j << ")| = " << std::abs(denom);
                throw NumericalError(msg.str());
            }
            Y(i, j) = s / denom;
        }
    }
    return U * Y * U.adjoint();
}

Matrix solve_lyapunov(const Matrix& P, const Matrix& lambda_plus, const SpectralData& sd,
                      const Tolerances& tol) {
    if (P.rows() != P.cols() || lambda_plus.rows() != P.rows() ||
        lambda_plus.cols() != P.cols()) {
        throw ValidationError("solve_lyapunov: P and Lambda+ must be square of equal size");
    }
    const double thresh = 1e-10 * std::max(1.0, max_abs(lambda_plus));

    if (sd.condition_estimate <= tol.condition_limit) {
        Matrix Omega = solve_spectral_route(lambda_plus, sd, tol);
        if (lyapunov_residual(P, Omega, lambda_plus) <= thresh) return Omega;
        // Eigenbasis looked fine but the residual is bad: retry via Schur.
    }
    Matrix Omega = solve_lyapunov_schur(P, lambda_plus, tol);
    const double res = lyapunov_residual(P, Omega, lambda_plus);
    if (res > thresh) {
        std::ostringstream msg;
        msg << "solve_lyapunov: residual " << res << " exceeds " << thresh
            << " on both solver routes";
        throw NumericalError(msg.str());
    }
    return Omega;
}

Matrix observables(const Matrix& Omega) {
    Matrix O = -Omega.transpose();
    const double scale = std::max(1.0, max_abs(O));
    if (hermiticity_residual(O) > 1e-10 * scale) {
        std::ostringstream msg;
        msg << "observables: O is not Hermitian (residual " << hermiticity_residual(O) << ")";
        throw NumericalError(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (O + O.adjoint()), Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo < -1e-8 || hi > 1.0 + 1e-8) {
        std::ostringstream msg;
        msg << "observables: occupation spectrum [" << lo << ", " << hi
            << "] outside [0, 1]; model/solver inconsistency";
        throw NumericalError(msg.str());
    }
    return O;
}

RealVector particle_current(const Matrix& O, const Model& model) {
    if (!model.is_chain()) {
        throw ValidationError("current undefined for non-chain model (h is not tridiagonal)");
    }
    const Index L = model.size();
    RealVector j(L - 1 > 0 ? L - 1 : 0);
    for (Index l = 0; l + 1 < L; ++l) {
        j[l] = 2.0 / model.hbar() * std::imag(model.h()(l, l + 1) * O(l, l + 1));
    }
    return j;
}

SteadyStateData steady_state(const Model& model, const SpectralData& sd, const Tolerances& tol) {
    SteadyStateData out;
    const Matrix P = build_P(model);
    out.Omega = solve_lyapunov(P, model.lambda_plus(), sd, tol);
    out.Q = sd.W_P_inv * out.Omega * sd.W_P_inv.adjoint();
    out.Q = 0.5 * (out.Q + out.Q.adjoint()).eval();
    out.O = observables(out.Omega);
    out.occupations = out.O.diagonal().real();
    out.lyapunov_residual = lyapunov_residual(P, out.Omega, model.lambda_plus());
    if (model.is_chain() && model.size() > 1) out.currents = particle_current(out.O, model);
    return out;
}

}  // namespace quadlind
