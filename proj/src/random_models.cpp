#include "quadlind/random_models.hpp"

namespace quadlind {

Matrix random_complex(Index rows, Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) m(i, j) = Complex(dist(rng), dist(rng));
    }
    return m;
}

Matrix random_hermitian(Index L, std::mt19937_64& rng) {
    const Matrix a = random_complex(L, L, rng);
    return 0.5 * (a + a.adjoint());
}

Matrix random_psd(Index L, std::mt19937_64& rng) {
    const Matrix b = random_complex(L, L, rng);
    return (b * b.adjoint()) / static_cast<double>(L);
}

Matrix random_unitary(Index L, std::mt19937_64& rng) {
    const Matrix a = random_complex(L, L, rng);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    // Fix the phase ambiguity so the result is reproducible.
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index k = 0; k < L; ++k) {
        const Complex d = r(k, k);
        if (d != 0.0) q.col(k) *= d / std::abs(d);
    }
    return q;
}

Matrix random_covariance(Index L, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> fill(0.05, 0.95);
    const Matrix v = random_unitary(L, rng);
    RealVector n(L);
    for (Index k = 0; k < L; ++k) n[k] = fill(rng);
    Matrix c = v * n.asDiagonal() * v.adjoint();
    return 0.5 * (c + c.adjoint()).eval();
}

ModelSpec random_model(Index L, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ModelSpec spec;
    spec.L = L;
    spec.hbar = 1.0;
    spec.h = random_hermitian(L, rng);
    spec.lambda_plus = random_psd(L, rng);
    spec.lambda_minus = random_psd(L, rng);
    return spec;
}

}  // namespace quadlind
