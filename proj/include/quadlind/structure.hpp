// structure.hpp — derived matrices of the quadratic Lindblad problem.
//
// K = (-i h/hbar + Lp - Lm^T)/2 is the drift block, M the 2Lx2L doubled
// matrix [[K, Lp], [Lm^T, -K^dag]], and P = K - Lp the L x L damping matrix
// whose eigenvalues are the rapidities. P satisfies P + P^dag = -(Lp + Lm^T).

#pragma once

#include "quadlind/model.hpp"
#include "quadlind/types.hpp"

namespace quadlind {

struct StructureMatrices {
    Matrix K;  // L x L
    Matrix M;  // 2L x 2L
    Matrix P;  // L x L
};

// Block analogues of the Pauli matrices: X = [[0,1],[1,0]], Y = -i[[0,1],[-1,0]],
// Z = [[1,0],[0,-1]] with identity blocks of size L. X^2 = Y^2 = Z^2 = 1,
// Z X = -X Z = i Y.
struct PauliBlocks {
    Matrix X;
    Matrix Y;
    Matrix Z;
};

Matrix build_K(const Model& model);
Matrix build_M(const Model& model);
Matrix build_P(const Model& model);
StructureMatrices build_structure(const Model& model);

PauliBlocks pauli_blocks(Index L);

// Residual of the block symmetry Y M Y = -M^dag, in max-norm. Zero (to
// roundoff) for every validated model.
double check_M_symmetry(const Matrix& M);

}  // namespace quadlind
