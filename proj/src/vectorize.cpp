#include "klss/vectorize.hpp"

#include <cmath>

namespace klss {

VecState vec_gamma(const Matrix& c) {
    require_finite(c, "c");
    VecState v;
    v.dim_l = int(c.cols());
    v.dim_r = int(c.rows());
    v.data.resize(v.dim_l * v.dim_r);
    for (int g = 0; g < v.dim_l; ++g)
        for (int r = 0; r < v.dim_r; ++r) v.data(g * v.dim_r + r) = c(r, g);
    return v;
}

Matrix unvec(const VecState& v) {
    require(v.data.size() == Eigen::Index(v.dim_l) * v.dim_r, "unvec: size mismatch");
    Matrix c(v.dim_r, v.dim_l);
    for (int g = 0; g < v.dim_l; ++g)
        for (int r = 0; r < v.dim_r; ++r) c(r, g) = v.data(g * v.dim_r + r);
    return c;
}

VecState vec_omega(const Matrix& d) {
    // d: R -> L is dimL x dimR; component (gamma, rho) of the state is d(gamma, rho).
    require_finite(d, "d");
    VecState v;
    v.dim_l = int(d.rows());
    v.dim_r = int(d.cols());
    v.data.resize(v.dim_l * v.dim_r);
    for (int g = 0; g < v.dim_l; ++g)
        for (int r = 0; r < v.dim_r; ++r) v.data(g * v.dim_r + r) = d(g, r);
    return v;
}

Vector kron_apply(const Matrix& a, const Matrix& b, const VecState& v) {
    require(a.rows() == v.dim_l && a.cols() == v.dim_l, "kron_apply: A acts on L");
    require(b.rows() == v.dim_r && b.cols() == v.dim_r, "kron_apply: B acts on R");
    // (A (x) B) vec(c) with our layout is vec(B c A^T)
    Matrix c = unvec(v);
    Matrix out = b * c * a.transpose();
    return vec_gamma(out).data;
}

cxd sandwich(const VecState& v, const Matrix& a, const Matrix& b, const VecState& w) {
    require(v.dim_l == w.dim_l && v.dim_r == w.dim_r, "sandwich: shape mismatch");
    return v.data.dot(kron_apply(a, b, w)); // Eigen dot conjugates the left factor
}

ExpectationIdentity expectation_identity(const Matrix& c, const Matrix& a, const Matrix& b) {
    require(a.rows() == a.cols() && a.rows() == c.cols(), "expectation_identity: A on L");
    require(b.rows() == b.cols() && b.rows() == c.rows(), "expectation_identity: B on R");
    ExpectationIdentity out;
    VecState g = vec_gamma(c);
    out.vec_form = sandwich(g, a, b, g);
    out.trace_form = (c.adjoint() * b * c * conj_j(Matrix(a.adjoint()))).trace();
    out.mismatch = std::abs(out.vec_form - out.trace_form) /
                   (1.0 + std::abs(out.vec_form) + std::abs(out.trace_form));
    return out;
}

void check_pairing(const PairingU& u) {
    require(u.matrix.rows() == u.matrix.cols(), "pairing U must be square");
    double dev = (u.matrix.adjoint() * u.matrix - Matrix::Identity(u.matrix.cols(), u.matrix.cols()))
                     .cwiseAbs()
                     .maxCoeff();
    if (dev > 1e3 * kTolIdentity)
        throw std::invalid_argument("pairing U is not unitary (deviation " + std::to_string(dev) + ")");
}

IneqReport rp_expectation_bound(const Matrix& c, const Matrix& a, const Matrix& b,
                                const PairingU& u) {
    require(c.rows() == c.cols(), "rp_expectation_bound: needs dim L == dim R");
    require(a.rows() == c.cols() && a.cols() == c.cols(), "rp_expectation_bound: A on L");
    require(b.rows() == c.rows() && b.cols() == c.rows(), "rp_expectation_bound: B on R");
    check_pairing(u);
    const Matrix& um = u.matrix;

    PolarParts p = polar_decompose(c);
    VecState g = vec_gamma(c);
    VecState gl = vec_gamma(Matrix(um * p.mod_l));  // Gamma~(U|c|)
    VecState gr = vec_gamma(Matrix(p.mod_r * um));  // Gamma~(|c*|U)

    // J_Omega = U J_Gamma U*, hence U* J_Omega B J_Omega U = conj_j(U* B U).
    Matrix a_transport = um * conj_j(a) * um.adjoint();
    Matrix b_transport = conj_j(Matrix(um.adjoint() * b * um));

    cxd lhs_val = sandwich(g, a, b, g);
    cxd term_a = sandwich(gl, a, a_transport, gl);
    cxd term_b = sandwich(gr, b_transport, b, gr);

    IneqReport rep;
    rep.lhs = 2.0 * std::abs(lhs_val);
    rep.rhs = term_a.real() + term_b.real();
    rep.slack = rep.rhs - rep.lhs;
    return rep;
}

double identity_residuals(const Matrix& c, const Matrix& a, const Matrix& b, const PairingU& u,
                          const RealVector& t_diag) {
    check_pairing(u);
    const Matrix& um = u.matrix;
    const int nl = int(c.cols());
    const int nr = int(c.rows());
    require(um.rows() == nr && um.cols() == nl, "identity_residuals: U shape");
    require(t_diag.size() == nl, "identity_residuals: T acts on L");

    double res = 0.0;
    // residuals are relative to the magnitude of the compared quantities
    auto note = [&res](cxd lhs, cxd rhs) {
        res = std::max(res, std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs)));
    };

    VecState g = vec_gamma(c);
    Matrix il = Matrix::Identity(nl, nl);
    Matrix ir = Matrix::Identity(nr, nr);

    // unitarity of the vectorization: (G(a)|G(b)) = Tr a* b and norm preservation
    note(g.data.squaredNorm(), c.squaredNorm());
    note((unvec(g) - c).cwiseAbs().maxCoeff(), 0.0);

    // cross-basis identity G(c) = Omega~(J c* J)
    VecState o = vec_omega(conj_j(Matrix(c.adjoint())));
    note((g.data - o.data).cwiseAbs().maxCoeff(), 0.0);

    PolarParts p = polar_decompose(c);
    VecState gl = vec_gamma(Matrix(um * p.mod_l));
    VecState gr = vec_gamma(Matrix(p.mod_r * um));

    // modulus substitutions and conjugation transports
    note(sandwich(g, il, b, g), sandwich(gr, il, b, gr));
    note(sandwich(g, a, ir, g), sandwich(gl, a, ir, gl));
    Matrix a_star_transport = um * conj_j(Matrix(a.adjoint())) * um.adjoint();
    note(sandwich(g, a, ir, g), sandwich(gl, il, a_star_transport, gl));
    Matrix b_star_transport = conj_j(Matrix(um.adjoint() * b.adjoint() * um));
    note(sandwich(g, il, b, g), sandwich(gr, b_star_transport, ir, gr));

    // diagonal self-adjoint specialization
    Matrix t = t_diag.cast<cxd>().asDiagonal();
    cxd left = sandwich(g, t, ir, g);
    note(left, sandwich(gl, t, ir, gl));
    note(left, sandwich(gl, il, Matrix(um * t * um.adjoint()), gl));

    // trace transport under conjugation
    note(conj_j(a).trace(), std::conj(a.trace()));
    return res;
}

} // namespace klss
