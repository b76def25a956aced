// random_models.hpp — seeded random problem instances for verification runs.

#pragma once

#include <cstdint>
#include <random>

#include "quadlind/model.hpp"
#include "quadlind/types.hpp"

namespace quadlind {

Matrix random_complex(Index rows, Index cols, std::mt19937_64& rng);

// (A + A^dag)/2 with standard-normal entries; exactly Hermitian in floating
// point.
Matrix random_hermitian(Index L, std::mt19937_64& rng);

// B B^dag / L; exactly Hermitian, PSD, entries O(1).
Matrix random_psd(Index L, std::mt19937_64& rng);

// Haar-ish unitary from the QR factorization of a Gaussian matrix.
Matrix random_unitary(Index L, std::mt19937_64& rng);

// Hermitian matrix with eigenvalues uniform in [0.05, 0.95]; a valid
// fermionic covariance bounded away from the edges.
Matrix random_covariance(Index L, std::mt19937_64& rng);

// Full random model: Hermitian h, PSD Lambda+/-. With both dissipators
// generically full-rank the steady state is unique.
ModelSpec random_model(Index L, std::uint64_t seed);

}  // namespace quadlind
