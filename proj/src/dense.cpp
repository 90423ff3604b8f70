#include "klss/dense.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <random>

namespace klss {

RandomKind parse_random_kind(const std::string& name) {
    if (name == "ginibre") return RandomKind::Ginibre;
    if (name == "hermitian") return RandomKind::Hermitian;
    if (name == "psd") return RandomKind::Psd;
    if (name == "partial_isometry") return RandomKind::PartialIsometry;
    throw std::invalid_argument("unknown random matrix kind: " + name);
}

namespace {

std::uint64_t mix(std::uint64_t z) {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

Matrix ginibre(int rows, int cols, std::uint64_t seed, int kind_tag) {
    std::uint64_t s = mix(seed ^ mix((std::uint64_t(rows) << 40) ^ (std::uint64_t(cols) << 8) ^
                                     std::uint64_t(kind_tag)));
    std::mt19937_64 gen(s);
    std::normal_distribution<double> n01(0.0, 1.0);
    Matrix m(rows, cols);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = cxd(n01(gen), n01(gen)) * inv_sqrt2;
    return m;
}

} // namespace

Matrix random_matrix(RandomKind kind, int rows, int cols, std::uint64_t seed) {
    require(rows >= 1 && cols >= 1, "random_matrix: dimensions must be >= 1");
    switch (kind) {
        case RandomKind::Ginibre:
            return ginibre(rows, cols, seed, 0);
        case RandomKind::Hermitian: {
            require(rows == cols, "random_matrix: hermitian requires rows == cols");
            Matrix g = ginibre(rows, cols, seed, 1);
            return 0.5 * (g + Matrix(g.adjoint()));
        }
        case RandomKind::Psd: {
            require(rows == cols, "random_matrix: psd requires rows == cols");
            Matrix g = ginibre(rows, cols, seed, 2);
            return Matrix(g * g.adjoint()) / double(cols);
        }
        case RandomKind::PartialIsometry: {
            Matrix g = ginibre(rows, cols, seed, 3);
            Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
            return svd.matrixU() * svd.matrixV().adjoint();
        }
    }
    throw std::invalid_argument("random_matrix: bad kind");
}

Matrix random_matrix(const std::string& kind, int rows, int cols, std::uint64_t seed) {
    return random_matrix(parse_random_kind(kind), rows, cols, seed);
}

Matrix psd_sqrt(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    RealVector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace klss
