#include "quadlind/model.hpp"

#include <cmath>
#include <sstream>

namespace quadlind {

namespace {

void require_square(const Matrix& m, Index L, const char* name) {
    if (m.rows() != L || m.cols() != L) {
        std::ostringstream msg;
        msg << name << " must be " << L << "x" << L << ", got " << m.rows() << "x" << m.cols();
        throw ValidationError(msg.str());
    }
}

void require_hermitian(const Matrix& m, double tol, const char* name) {
    const double scale = std::max(1.0, max_abs(m));
    const double res = hermiticity_residual(m);
    if (res > tol * scale) {
        std::ostringstream msg;
        msg << name << " not Hermitian: max |A - A^dag| = " << res << " (tolerance " << tol * scale
            << ")";
        throw ValidationError(msg.str());
    }
}

void require_psd(const Matrix& m, double tol, const char* name) {
    const double scale = std::max(1.0, max_abs(m));
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw ValidationError(std::string(name) + ": eigenvalue check failed to converge");
    }
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -tol * scale) {
        std::ostringstream msg;
        msg << name << " not PSD: min eigenvalue = " << min_eig << " (tolerance " << -tol * scale
            << ")";
        throw ValidationError(msg.str());
    }
}

}  // namespace

bool Model::is_chain() const {
    const Index L = spec_.L;
    const double thresh = tol_.hermitian * std::max(1.0, max_abs(spec_.h));
    for (Index i = 0; i < L; ++i) {
        for (Index j = 0; j < L; ++j) {
            if (std::abs(i - j) >= 2 && std::abs(spec_.h(i, j)) > thresh) return false;
        }
    }
    return true;
}

Model validate_model(ModelSpec spec, const Tolerances& tol) {
    if (spec.L < 1) throw ValidationError("L must be >= 1");
    if (!(spec.hbar > 0.0)) throw ValidationError("hbar must be positive");
    require_square(spec.h, spec.L, "h");
    require_square(spec.lambda_plus, spec.L, "Lambda+");
    require_square(spec.lambda_minus, spec.L, "Lambda-");
    require_hermitian(spec.h, tol.hermitian, "h");
    require_hermitian(spec.lambda_plus, tol.hermitian, "Lambda+");
    require_hermitian(spec.lambda_minus, tol.hermitian, "Lambda-");
    require_psd(spec.lambda_plus, tol.psd, "Lambda+");
    require_psd(spec.lambda_minus, tol.psd, "Lambda-");
    return Model(std::move(spec), tol);
}

void check_xx_params(const XXChainParams& p) {
    if (p.L < 1) throw ValidationError("xx chain: L must be >= 1");
    if (!(p.hbar > 0.0)) throw ValidationError("xx chain: hbar must be positive");
    if (p.Gamma_1 < 0.0 || p.Gamma_L < 0.0) {
        throw ValidationError("xx chain: boundary rates Gamma_1, Gamma_L must be >= 0");
    }
    if (p.nbar_1 < 0.0 || p.nbar_1 > 1.0 || p.nbar_L < 0.0 || p.nbar_L > 1.0) {
        throw ValidationError("xx chain: bath fillings nbar_1, nbar_L must lie in [0, 1]");
    }
}

ModelSpec build_xx_chain(const XXChainParams& p) {
    check_xx_params(p);
    ModelSpec spec;
    spec.L = p.L;
    spec.hbar = p.hbar;
    spec.h = Matrix::Zero(p.L, p.L);
    for (Index i = 0; i < p.L; ++i) spec.h(i, i) = 2.0 * p.h_z;
    for (Index i = 0; i + 1 < p.L; ++i) {
        spec.h(i, i + 1) = p.J;
        spec.h(i + 1, i) = p.J;
    }
    spec.lambda_plus = Matrix::Zero(p.L, p.L);
    spec.lambda_minus = Matrix::Zero(p.L, p.L);
    // At L = 1 both baths act on the single site; rates add.
    spec.lambda_plus(0, 0) += p.nbar_1 * p.Gamma_1;
    spec.lambda_minus(0, 0) += (1.0 - p.nbar_1) * p.Gamma_1;
    spec.lambda_plus(p.L - 1, p.L - 1) += p.nbar_L * p.Gamma_L;
    spec.lambda_minus(p.L - 1, p.L - 1) += (1.0 - p.nbar_L) * p.Gamma_L;
    return spec;
}

}  // namespace quadlind
