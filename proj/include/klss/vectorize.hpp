#pragma once

#include "klss/schatten.hpp"
#include "klss/types.hpp"

namespace klss {

constexpr double kTolIdentity = 1e-12;

/// Element of L tensor R in the fixed left-factor-major layout:
/// index = gamma * dimR + rho for psi_gamma (x) phi_rho.
struct VecState {
    Vector data;
    int dim_l = 0;
    int dim_r = 0;
};

/// Gamma-vectorization of c: L -> R (matrix dimR x dimL) against the
/// standard coordinate bases: Gamma~(c) = sum_gamma psi_gamma (x) c psi_gamma.
VecState vec_gamma(const Matrix& c);

/// Inverse of vec_gamma (exact).
Matrix unvec(const VecState& v);

/// Omega-vectorization of d: R -> L, Omega~(d) = sum_w d phi_w (x) phi_w.
VecState vec_omega(const Matrix& d);

/// Action of A (x) B on the flattened state.
Vector kron_apply(const Matrix& a, const Matrix& b, const VecState& v);

/// (v | (A (x) B) w) in the tensor inner product.
cxd sandwich(const VecState& v, const Matrix& a, const Matrix& b, const VecState& w);

/// In the coordinate basis the conjugation J acts entrywise, so J X J is the
/// entrywise conjugate of X.
inline Matrix conj_j(const Matrix& x) { return x.conjugate(); }

struct ExpectationIdentity {
    cxd vec_form;   // (Gamma~(c) | (A (x) B) Gamma~(c))
    cxd trace_form; // Tr_L(c* B c J A* J)
    double mismatch = 0.0; // relative to the magnitude of the two forms
};

/// Both routes to the expectation value; they must agree to kTolIdentity.
ExpectationIdentity expectation_identity(const Matrix& c, const Matrix& a, const Matrix& b);

/// Unitary pairing U: L -> R identifying the two coordinate bases.
struct PairingU {
    Matrix matrix; // dimR x dimL
};

/// Validates unitarity of U to kTolIdentity; throws on contract violation.
void check_pairing(const PairingU& u);

/// The vectorized inequality: 2|(G(c)|(A(x)B)G(c))| bounded by the two
/// modulus-substituted expectation values built from U.
IneqReport rp_expectation_bound(const Matrix& c, const Matrix& a, const Matrix& b,
                                const PairingU& u);

/// Max relative residual over the cross-basis and modulus-substitution
/// identities (vectorization unitarity, both conjugation transport forms,
/// diagonal unbounded-operator specialization) for one (c, A, B, U, T)
/// instance. Used by the property suites.
double identity_residuals(const Matrix& c, const Matrix& a, const Matrix& b, const PairingU& u,
                          const RealVector& t_diag);

} // namespace klss
