#pragma once

#include "klss/types.hpp"

#include <cstdint>

namespace klss {

enum class RandomKind { Ginibre, Hermitian, Psd, PartialIsometry };

RandomKind parse_random_kind(const std::string& name);

/// Deterministic random matrix: the generator state depends only on
/// (kind, rows, cols, seed). Ginibre entries have unit second moment;
/// hermitian output equals its adjoint bitwise; psd is G G*/cols;
/// partial_isometry is the unitary polar factor of a Ginibre draw.
Matrix random_matrix(RandomKind kind, int rows, int cols, std::uint64_t seed);

Matrix random_matrix(const std::string& kind, int rows, int cols, std::uint64_t seed);

/// Square root of a PSD Hermitian matrix, eigenvalues clipped at 0.
Matrix psd_sqrt(const Matrix& a);

} // namespace klss
