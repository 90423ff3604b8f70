// Test-only oracles: independent computation routes the implementation is
// checked against. Nothing here may call the code path it verifies.
#pragma once

#include "klss/lattice.hpp"
#include "klss/rotor.hpp"
#include "klss/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace oracle {

using klss::cxd;
using klss::Matrix;
using klss::Vector;

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Operator op acting on one site of the product space, everything else
/// identity.
inline Matrix embed(const Matrix& op, int site, int n_sites) {
    Matrix out = Matrix::Identity(1, 1);
    for (int s = 0; s < n_sites; ++s)
        out = kron(out, s == site ? op : Matrix(Matrix::Identity(op.rows(), op.cols())));
    return out;
}

/// |c| built from the eigendecomposition of c*c (independent of the SVD
/// route used by the library). Eigenvalues in the rounding noise of a
/// rank-deficient c*c would blow up under the square root, so they are
/// clipped relative to the largest one.
inline Matrix modulus_via_eigen(const Matrix& c) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(c.adjoint() * c));
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    double cut = ev.size() ? 1e-13 * ev.maxCoeff() : 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = ev(i) > cut ? std::sqrt(ev(i)) : 0.0;
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

/// Dense H(b) assembled literally from |a_x - a_y|^2 + (sin_x - sin_y)^2
/// with a_x = cos_x - b_x, via explicit Kronecker embeddings.
inline Matrix dense_rotor_hamiltonian(const klss::RotorModel& model, const klss::LatticeSpec& lat,
                                      const klss::PerturbField& b) {
    const klss::SiteOperators ops = klss::site_operators(model.cutoff, model.inertia);
    const int L = lat.volume();
    const int p = model.per_site_dim();
    std::int64_t dim = 1;
    for (int i = 0; i < L; ++i) dim *= p;
    Matrix h = Matrix::Zero(dim, dim);
    Matrix kin = ops.kinetic.cast<cxd>().asDiagonal();
    for (int x = 0; x < L; ++x) h += embed(kin, x, L);
    Matrix id = Matrix::Identity(dim, dim);
    for (const klss::Bond& bond : lat.bonds) {
        Matrix ax = embed(ops.cos_op, bond.a, L) - b.values[bond.a] * id;
        Matrix ay = embed(ops.cos_op, bond.b, L) - b.values[bond.b] * id;
        Matrix da = ax - ay;
        Matrix ds = embed(ops.sin_op, bond.a, L) - embed(ops.sin_op, bond.b, L);
        h += (model.coupling / 2.0) * (da.adjoint() * da + ds * ds);
    }
    return h;
}

/// Dense s_k^x as an explicit matrix.
inline Matrix dense_spin_fourier(const klss::RotorModel& model, const klss::LatticeSpec& lat,
                                 const klss::Momentum& k, bool sin_axis = false) {
    const klss::SiteOperators ops = klss::site_operators(model.cutoff, model.inertia);
    const int L = lat.volume();
    auto kv = lat.kvec(k);
    std::int64_t dim = 1;
    for (int i = 0; i < L; ++i) dim *= model.per_site_dim();
    Matrix out = Matrix::Zero(dim, dim);
    for (int s = 0; s < L; ++s) {
        double phase = 0.0;
        for (int i = 0; i < lat.d; ++i) phase += kv[i] * lat.sites[s][i];
        out += std::exp(cxd(0.0, phase)) / std::sqrt(double(L)) *
               embed(sin_axis ? ops.sin_op : ops.cos_op, s, L);
    }
    return out;
}

} // namespace oracle
