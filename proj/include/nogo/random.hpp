#pragma once

#include <cstdint>
#include <random>

#include "nogo/linalg.hpp"

namespace nogo {

using Rng = std::mt19937_64;

/// Engine for (seed, stream). Distinct streams of one seed are independent
/// enough for the sampling done here and let callers partition work.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Complex Gaussian vector normalized to unit length (Haar on the sphere).
ComplexVector random_ket(std::size_t dim, Rng& rng);

/// Matrix of i.i.d. standard complex Gaussian entries.
ComplexMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng);

/// Random Hermitian matrix (GUE-like), not normalized.
ComplexMatrix random_hermitian(std::size_t dim, Rng& rng);

/// Haar-distributed unitary via QR of a Ginibre matrix with phase fix.
ComplexMatrix random_unitary(std::size_t dim, Rng& rng);

} // namespace nogo
