#include "quadlind/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "quadlind/structure.hpp"

namespace quadlind {

namespace {

// (exp(g t) - 1) / g, stable near g = 0.
Complex phi1(const Complex& g, double t) {
    const Complex gt = g * t;
    if (std::abs(gt) < 1e-8) {
        return t * (1.0 + gt / 2.0 + gt * gt / 6.0);
    }
    return (std::exp(gt) - 1.0) / g;
}

}  // namespace

double spectral_gap(const SpectralData& sd) {
    const double lam_scale = std::max(1.0, sd.rapidities.cwiseAbs().maxCoeff());
    const double max_re = sd.rapidities.real().maxCoeff();
    if (max_re >= -1e-12 * lam_scale) {
        std::ostringstream msg;
        msg << "no gap / marginal: max Re(lam) = " << max_re;
        throw NumericalError(msg.str());
    }
    return 2.0 * (-max_re);
}

EvolutionResult evolve_covariance(const Model& model, const Matrix& C0,
                                  std::vector<double> times, const Tolerances& tol) {
    const Index L = model.size();
    if (C0.rows() != L || C0.cols() != L) {
        throw ValidationError("evolve_covariance: C0 must be L x L");
    }
    const double c_scale = std::max(1.0, max_abs(C0));
    if (hermiticity_residual(C0) > 1e-8 * c_scale) {
        throw ValidationError("evolve_covariance: C0 is not Hermitian");
    }
    {
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (C0 + C0.adjoint()),
                                                 Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-8 || es.eigenvalues().maxCoeff() > 1.0 + 1e-8) {
            throw ValidationError("evolve_covariance: C0 spectrum outside [0, 1]");
        }
    }
    for (double t : times) {
        if (t < 0.0) throw ValidationError("evolve_covariance: times must be nonnegative");
    }

    const Matrix P = build_P(model);
    const SpectralData sd = rapidities(P, tol);
    const Matrix Wbar = sd.W_P.conjugate();
    const Matrix Wbar_inv = sd.W_P_inv.conjugate();
    const Matrix Wt = sd.W_P.transpose();
    const Matrix Wt_inv = sd.W_P_inv.transpose();

    // Mode coordinates: X = Wbar^-1 C W^-T, dX_ij/dt = g_ij X_ij + 2 F_ij,
    // g_ij = 2(conj(lam_i) + lam_j).
    const Matrix X0 = Wbar_inv * C0 * Wt_inv;
    const Matrix F = Wbar_inv * model.lambda_plus().transpose() * Wt_inv;

    EvolutionResult out;
    out.times = std::move(times);
    out.covariances.reserve(out.times.size());

    const double lam_scale = std::max(1.0, sd.rapidities.cwiseAbs().maxCoeff());
    out.marginal = sd.rapidities.real().maxCoeff() >= -1e-12 * lam_scale;
    out.gap = out.marginal ? 0.0 : 2.0 * (-sd.rapidities.real().maxCoeff());

    Matrix X(L, L);
    for (double t : out.times) {
        if (t == 0.0) {
            out.covariances.push_back(C0);
            continue;
        }
        for (Index i = 0; i < L; ++i) {
            for (Index j = 0; j < L; ++j) {
                const Complex g = 2.0 * (std::conj(sd.rapidities[i]) + sd.rapidities[j]);
                X(i, j) = std::exp(g * t) * X0(i, j) + 2.0 * F(i, j) * phi1(g, t);
            }
        }
        Matrix C = Wbar * X * Wt;
        C = 0.5 * (C + C.adjoint()).eval();
        out.covariances.push_back(std::move(C));
    }
    return out;
}

}  // namespace quadlind
