#include "quadlind/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace quadlind {

namespace {

// Deterministic gauge: unit 2-norm, first component with |w_i| >= 1e-6
// rotated real positive.
void fix_gauge(Matrix& W) {
    for (Index c = 0; c < W.cols(); ++c) {
        const double nrm = W.col(c).norm();
        if (nrm > 0.0) W.col(c) /= nrm;
        for (Index r = 0; r < W.rows(); ++r) {
            const double a = std::abs(W(r, c));
            if (a >= 1e-6) {
                W.col(c) *= std::conj(W(r, c)) / a;
                break;
            }
        }
    }
}

}  // namespace

SpectralData rapidities(const Matrix& P, const Tolerances& tol) {
    if (P.rows() != P.cols() || P.rows() < 1) {
        throw ValidationError("rapidities: P must be square and non-empty");
    }
    const Index L = P.rows();

    Eigen::ComplexEigenSolver<Matrix> es(P, /*computeEigenvectors=*/true);
    if (es.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "rapidities: QR iteration did not converge for L = " << L
            << " (info = " << static_cast<int>(es.info()) << ")";
        throw NumericalError(msg.str());
    }

    // Sort by (Im, Re) ascending for reproducible output.
    std::vector<Index> order(static_cast<std::size_t>(L));
    std::iota(order.begin(), order.end(), Index{0});
    const Vector raw = es.eigenvalues();
    std::sort(order.begin(), order.end(), [&raw](Index a, Index b) {
        if (raw[a].imag() != raw[b].imag()) return raw[a].imag() < raw[b].imag();
        return raw[a].real() < raw[b].real();
    });

    SpectralData sd;
    sd.rapidities.resize(L);
    sd.W_P.resize(L, L);
    for (Index k = 0; k < L; ++k) {
        sd.rapidities[k] = raw[order[static_cast<std::size_t>(k)]];
        sd.W_P.col(k) = es.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    }
    fix_gauge(sd.W_P);

    sd.W_P_inv = sd.W_P.partialPivLu().solve(Matrix::Identity(L, L));
    sd.condition_estimate = one_norm(sd.W_P) * one_norm(sd.W_P_inv);
    sd.eig_residual = max_abs(Matrix(P * sd.W_P - sd.W_P * sd.rapidities.asDiagonal()));
    sd.max_real_part = sd.rapidities.real().maxCoeff();

    const double lam_scale = std::max(1.0, sd.rapidities.cwiseAbs().maxCoeff());
    for (int i = 0; i < L; ++i) {
        for (int j = i; j < L; ++j) {
            const Complex s = sd.rapidities[i] + std::conj(sd.rapidities[j]);
            if (std::abs(s) <= tol.gap_factor * lam_scale) sd.degenerate_pairs.emplace_back(i, j);
        }
    }
    return sd;
}

std::vector<Complex> full_spectrum(const SpectralData& sd) {
    const Index L = sd.rapidities.size();
    std::vector<Complex> spec(static_cast<std::size_t>(2 * L));
    for (Index i = 0; i < L; ++i) {
        spec[static_cast<std::size_t>(i)] = sd.rapidities[i];
        spec[static_cast<std::size_t>(L + i)] = -std::conj(sd.rapidities[i]);
    }
    return spec;
}

double summing_rule_residual(const SpectralData& sd, const Model& model) {
    const double sum_2re = 2.0 * sd.rapidities.real().sum();
    const double tr = (model.lambda_plus() + model.lambda_minus().transpose()).real().trace();
    return std::abs(sum_2re + tr);
}

W1Assembly assemble_W1(const SpectralData& sd, const Matrix& Q, const Tolerances& tol) {
    const Index L = sd.rapidities.size();
    if (Q.rows() != L || Q.cols() != L) throw ValidationError("assemble_W1: Q must be L x L");
    if (sd.condition_estimate > tol.condition_limit) {
        std::ostringstream msg;
        msg << "eigenbasis ill-conditioned: cond(W_P) ~ " << sd.condition_estimate << " > "
            << tol.condition_limit;
        throw NumericalError(msg.str());
    }

    W1Assembly w;
    w.Q = Q;
    w.C_mat = sd.W_P * Q;
    const Matrix wp_dag_inv = sd.W_P_inv.adjoint();  // (W_P^dag)^-1
    w.D_mat = -w.C_mat - wp_dag_inv;

    w.W1.resize(2 * L, 2 * L);
    w.W1.topLeftCorner(L, L) = sd.W_P;
    w.W1.topRightCorner(L, L) = w.C_mat;
    w.W1.bottomLeftCorner(L, L) = -sd.W_P;
    w.W1.bottomRightCorner(L, L) = w.D_mat;

    w.W1_inv.resize(2 * L, 2 * L);
    w.W1_inv.topLeftCorner(L, L) = -w.D_mat.adjoint();
    w.W1_inv.topRightCorner(L, L) = w.C_mat.adjoint();
    w.W1_inv.bottomLeftCorner(L, L) = -sd.W_P.adjoint();
    w.W1_inv.bottomRightCorner(L, L) = -sd.W_P.adjoint();

    const double res = max_abs(Matrix(w.W1_inv * w.W1 - Matrix::Identity(2 * L, 2 * L)));
    if (res > 1e-9 * std::max(1.0, one_norm(w.W1))) {
        std::ostringstream msg;
        msg << "assemble_W1: block inverse residual " << res << " (eigenbasis too ill-conditioned)";
        throw NumericalError(msg.str());
    }
    return w;
}

Matrix similarity_log(const Matrix& W1, const Tolerances& tol) {
    if (W1.rows() != W1.cols() || W1.rows() < 1) {
        throw ValidationError("similarity_log: W1 must be square and non-empty");
    }
    const Index n = W1.rows();
    Eigen::ComplexEigenSolver<Matrix> es(W1, true);
    if (es.info() != Eigen::Success) {
        throw NumericalError("similarity_log: eigendecomposition of W1 did not converge");
    }
    const double scale = std::max(1.0, max_abs(W1));
    Vector logs(n);
    for (Index i = 0; i < n; ++i) {
        const Complex mu = es.eigenvalues()[i];
        if (std::abs(mu) <= 1e-14 * scale) {
            throw NumericalError("similarity_log: W1 is (near-)singular, log undefined");
        }
        // Principal branch; arg = pi on the negative real axis.
        logs[i] = std::log(mu);
    }
    const Matrix V = es.eigenvectors();
    Eigen::PartialPivLU<Matrix> lu(V);
    const Matrix W = -(V * logs.asDiagonal() * lu.solve(Matrix::Identity(n, n)));

    // Round-trip check with an independent (Pade) exponential; catches
    // near-defective W1 where the eigenvector basis is unusable.
    const Matrix back = (-W).exp();
    const double res = max_abs(Matrix(back - W1));
    if (res > 1e-8 * scale) {
        std::ostringstream msg;
        msg << "similarity_log: exp(-W) fails to reproduce W1 (residual " << res
            << "); W1 is too close to defective";
        throw NumericalError(msg.str());
    }
    (void)tol;
    return W;
}

}  // namespace quadlind
