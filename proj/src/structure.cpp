#include "quadlind/structure.hpp"

#include <sstream>

namespace quadlind {

Matrix build_K(const Model& model) {
    return 0.5 * (-kI * model.h() / model.hbar() + model.lambda_plus() -
                  model.lambda_minus().transpose());
}

Matrix build_M(const Model& model) {
    const Index L = model.size();
    const Matrix K = build_K(model);
    Matrix M(2 * L, 2 * L);
    M.topLeftCorner(L, L) = K;
    M.topRightCorner(L, L) = model.lambda_plus();
    M.bottomLeftCorner(L, L) = model.lambda_minus().transpose();
    M.bottomRightCorner(L, L) = -K.adjoint();
    return M;
}

Matrix build_P(const Model& model) {
    Matrix P = 0.5 * (-kI * model.h() / model.hbar() - model.lambda_plus() -
                      model.lambda_minus().transpose());
    // P + P^dag = -(Lp + Lm^T) holds by construction; a large residual here
    // means the inputs were mutated after validation.
    const Matrix sum = model.lambda_plus() + model.lambda_minus().transpose();
    const double res = max_abs(Matrix(P + P.adjoint() + sum));
    const double scale = std::max(1.0, max_abs(sum));
    if (res > 1e-12 * scale) {
        std::ostringstream msg;
        msg << "P + P^dag + Lp + Lm^T residual " << res << " exceeds " << 1e-12 * scale;
        throw NumericalError(msg.str());
    }
    return P;
}

StructureMatrices build_structure(const Model& model) {
    return StructureMatrices{build_K(model), build_M(model), build_P(model)};
}

PauliBlocks pauli_blocks(Index L) {
    const Matrix id = Matrix::Identity(L, L);
    PauliBlocks b;
    b.X = Matrix::Zero(2 * L, 2 * L);
    b.X.topRightCorner(L, L) = id;
    b.X.bottomLeftCorner(L, L) = id;
    b.Y = Matrix::Zero(2 * L, 2 * L);
    b.Y.topRightCorner(L, L) = -kI * id;
    b.Y.bottomLeftCorner(L, L) = kI * id;
    b.Z = Matrix::Zero(2 * L, 2 * L);
    b.Z.topLeftCorner(L, L) = id;
    b.Z.bottomRightCorner(L, L) = -id;
    return b;
}

double check_M_symmetry(const Matrix& M) {
    if (M.rows() != M.cols() || M.rows() % 2 != 0) {
        throw ValidationError("check_M_symmetry: M must be square with even dimension");
    }
    const PauliBlocks b = pauli_blocks(M.rows() / 2);
    return max_abs(Matrix(b.Y * M * b.Y + M.adjoint()));
}

}  // namespace quadlind
