#include "quadlind/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace quadlind {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

std::vector<Matrix> jw_lowering_operators(Index L) {
    Matrix sm(2, 2), sz(2, 2), id2 = Matrix::Identity(2, 2);
    sm << 0, 1, 0, 0;  // |0><1| in the (|0>, |1>) occupation basis
    sz << 1, 0, 0, -1;
    std::vector<Matrix> ops;
    ops.reserve(static_cast<std::size_t>(L));
    for (Index j = 0; j < L; ++j) {
        Matrix op = Matrix::Identity(1, 1);
        for (Index k = 0; k < L; ++k) {
            if (k < j) {
                op = kron(op, sz);
            } else if (k == j) {
                op = kron(op, sm);
            } else {
                op = kron(op, id2);
            }
        }
        ops.push_back(std::move(op));
    }
    return ops;
}

Vector operator_to_vec(const Matrix& a) {
    return Eigen::Map<const Vector>(a.data(), a.size());  // column-major = column stacking
}

Matrix vec_to_operator(const Vector& v) {
    const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (d * d != v.size()) throw ValidationError("vec_to_operator: length is not a square");
    return Eigen::Map<const Matrix>(v.data(), d, d);
}

SuperOperator build_liouvillian_superoperator(const Model& model, int l_max) {
    const Index L = model.size();
    if (L > l_max) {
        const double bytes = std::pow(4.0, 2 * static_cast<double>(L)) * 16.0;
        std::ostringstream msg;
        msg << "superoperator refused: L = " << L << " > l_max = " << l_max << " (would need ~"
            << bytes / (1024.0 * 1024.0 * 1024.0) << " GiB)";
        throw ValidationError(msg.str());
    }
    const Index d = Index{1} << L;
    const Index D = d * d;
    const Matrix id = Matrix::Identity(d, d);
    const std::vector<Matrix> a = jw_lowering_operators(L);

    Matrix H = Matrix::Zero(d, d);
    for (Index m = 0; m < L; ++m) {
        for (Index n = 0; n < L; ++n) {
            const Complex c = model.h()(m, n);
            if (c != 0.0) H += c * (a[m].adjoint() * a[n]);
        }
    }

    SuperOperator s;
    s.L = L;
    s.dim = D;
    s.basis_convention =
        "column-stacking: vec(A rho B) = kron(B^T, A) vec(rho); Jordan-Wigner site 1 string-free";
    s.matrix = -kI / model.hbar() * (kron(id, H) - kron(H.transpose(), id));

    for (Index m = 0; m < L; ++m) {
        for (Index n = 0; n < L; ++n) {
            const Complex lp = model.lambda_plus()(m, n);
            if (lp != 0.0) {
                // lp (2 adag_m rho a_n - a_n adag_m rho - rho a_n adag_m)
                const Matrix an_adm = a[n] * a[m].adjoint();
                s.matrix += lp * (2.0 * kron(a[n].transpose(), a[m].adjoint()) -
                                  kron(id, an_adm) - kron(an_adm.transpose(), id));
            }
            const Complex lm = model.lambda_minus()(m, n);
            if (lm != 0.0) {
                // lm (2 a_m rho adag_n - adag_n a_m rho - rho adag_n a_m)
                const Matrix adn_am = a[n].adjoint() * a[m];
                s.matrix += lm * (2.0 * kron(a[n].conjugate(), a[m]) - kron(id, adn_am) -
                                  kron(adn_am.transpose(), id));
            }
        }
    }
    return s;
}

Matrix two_point_matrix(const Matrix& rho, Index L) {
    const std::vector<Matrix> a = jw_lowering_operators(L);
    Matrix O(L, L);
    for (Index i = 0; i < L; ++i) {
        for (Index j = 0; j < L; ++j) {
            O(i, j) = (rho * a[i].adjoint() * a[j]).trace();
        }
    }
    return O;
}

EdSteadyState ed_steady_state(const SuperOperator& superop, const Tolerances& tol) {
    Eigen::ComplexEigenSolver<Matrix> es(superop.matrix, true);
    if (es.info() != Eigen::Success) {
        throw NumericalError("ed_steady_state: eigendecomposition did not converge");
    }
    const Vector& evs = es.eigenvalues();
    const double scale = std::max(1.0, evs.cwiseAbs().maxCoeff());

    Index zero_idx = -1;
    double zero_abs = std::numeric_limits<double>::infinity();
    Index near_zero_re = 0;
    for (Index k = 0; k < evs.size(); ++k) {
        if (std::abs(evs[k].real()) <= tol.gap_factor * scale * 1e2) ++near_zero_re;
        if (std::abs(evs[k]) < zero_abs) {
            zero_abs = std::abs(evs[k]);
            zero_idx = k;
        }
    }
    if (zero_abs > 1e-8 * scale) {
        std::ostringstream msg;
        msg << "ed_steady_state: no eigenvalue near zero (closest |lam| = " << zero_abs << ")";
        throw NumericalError(msg.str());
    }
    if (near_zero_re != 1) {
        std::ostringstream msg;
        msg << "non-unique steady state: " << near_zero_re
            << " eigenvalues with vanishing real part";
        throw NumericalError(msg.str());
    }

    Matrix rho = vec_to_operator(es.eigenvectors().col(zero_idx));
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const Complex tr = rho.trace();
    if (std::abs(tr) < 1e-12 * max_abs(rho)) {
        throw NumericalError("ed_steady_state: null vector is traceless, cannot normalize");
    }
    rho /= tr;

    EdSteadyState out;
    out.O_ed = two_point_matrix(rho, superop.L);
    out.rho_ss = std::move(rho);
    return out;
}

std::vector<Complex> predicted_even_spectrum(const SpectralData& sd) {
    const Index L = sd.rapidities.size();
    const std::uint64_t n_masks = std::uint64_t{1} << L;

    std::vector<Complex> subset(n_masks, Complex{0.0, 0.0});
    for (std::uint64_t m = 1; m < n_masks; ++m) {
        const int low = std::countr_zero(m);
        subset[m] = subset[m & (m - 1)] + sd.rapidities[low];
    }

    std::vector<Complex> out;
    out.reserve(n_masks * n_masks / 2);
    for (std::uint64_t nu = 0; nu < n_masks; ++nu) {
        for (std::uint64_t nup = 0; nup < n_masks; ++nup) {
            if ((std::popcount(nu) + std::popcount(nup)) % 2 != 0) continue;
            out.push_back(2.0 * subset[nu] + 2.0 * std::conj(subset[nup]));
        }
    }
    return out;
}

std::vector<Matrix> ed_evolve(const SuperOperator& superop, const Matrix& rho0,
                              const std::vector<double>& times) {
    if (superop.L > 4) {
        throw ValidationError("ed_evolve: trajectory work is capped at L = 4 (got L = " +
                              std::to_string(superop.L) + ")");
    }
    const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(superop.dim))));
    if (rho0.rows() != d || rho0.cols() != d) {
        throw ValidationError("ed_evolve: rho0 dimension does not match the superoperator");
    }
    if (hermiticity_residual(rho0) > 1e-10 * std::max(1.0, max_abs(rho0)) ||
        std::abs(rho0.trace() - 1.0) > 1e-10) {
        throw ValidationError("ed_evolve: rho0 must be Hermitian with unit trace");
    }
    if (!std::is_sorted(times.begin(), times.end())) {
        throw ValidationError("ed_evolve: times must be ascending");
    }

    std::vector<Matrix> out;
    out.reserve(times.size());
    Vector v = operator_to_vec(rho0);
    double t_cur = 0.0;
    Matrix cached_prop;
    double cached_dt = -1.0;
    for (double t : times) {
        if (t < 0.0) throw ValidationError("ed_evolve: times must be nonnegative");
        const double dt = t - t_cur;
        if (dt > 0.0) {
            if (std::abs(dt - cached_dt) > 1e-15 * std::max(1.0, dt)) {
                cached_prop = Matrix(superop.matrix * dt).exp();
                cached_dt = dt;
            }
            v = cached_prop * v;
            t_cur = t;
        }
        out.push_back(two_point_matrix(vec_to_operator(v), superop.L));
    }
    return out;
}

Matrix gaussian_density_matrix(const Matrix& C0) {
    const Index L = C0.rows();
    if (C0.cols() != L) throw ValidationError("gaussian_density_matrix: C0 must be square");
    if (hermiticity_residual(C0) > 1e-8 * std::max(1.0, max_abs(C0))) {
        throw ValidationError("gaussian_density_matrix: C0 must be Hermitian");
    }
    // <adag_i a_j> = conj(V diag(n) V^dag)_ij for a product state in the
    // rotated modes d = V^dag a, so diagonalize C0^T.
    Eigen::SelfAdjointEigenSolver<Matrix> es(C0.transpose());
    if (es.info() != Eigen::Success) {
        throw NumericalError("gaussian_density_matrix: eigendecomposition failed");
    }
    RealVector n = es.eigenvalues();
    for (Index k = 0; k < L; ++k) {
        if (n[k] < -1e-8 || n[k] > 1.0 + 1e-8) {
            throw ValidationError("gaussian_density_matrix: C0 spectrum outside [0, 1]");
        }
        n[k] = std::clamp(n[k], 0.0, 1.0);
    }
    const Matrix& V = es.eigenvectors();
    const std::vector<Matrix> a = jw_lowering_operators(L);
    const Index d = Index{1} << L;

    Matrix rho = Matrix::Identity(d, d);
    for (Index k = 0; k < L; ++k) {
        Matrix dk_dag = Matrix::Zero(d, d);
        for (Index j = 0; j < L; ++j) dk_dag += V(j, k) * a[j].adjoint();
        const Matrix Nk = dk_dag * dk_dag.adjoint();
        rho = rho * ((1.0 - n[k]) * Matrix::Identity(d, d) + (2.0 * n[k] - 1.0) * Nk);
    }
    return rho;
}

double sector_coupling_residual(const SuperOperator& superop) {
    const auto d = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(superop.dim))));
    std::vector<int> grade(static_cast<std::size_t>(superop.dim));
    for (Index col = 0; col < d; ++col) {
        for (Index row = 0; row < d; ++row) {
            const auto n_row = std::popcount(static_cast<std::uint64_t>(row));
            const auto n_col = std::popcount(static_cast<std::uint64_t>(col));
            grade[static_cast<std::size_t>(row + d * col)] = (n_row + n_col) & 1;
        }
    }
    double worst = 0.0;
    for (Index i = 0; i < superop.dim; ++i) {
        for (Index j = 0; j < superop.dim; ++j) {
            if (grade[static_cast<std::size_t>(i)] != grade[static_cast<std::size_t>(j)]) {
                worst = std::max(worst, std::abs(superop.matrix(i, j)));
            }
        }
    }
    return worst;
}

}  // namespace quadlind
