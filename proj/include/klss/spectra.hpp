#pragma once

#include "klss/rotor.hpp"

#include <optional>

namespace klss {

constexpr double kTolObservable = 1e-8; // absolute, on normalized quantities
constexpr double kTolChi = 1e-6;        // relative, spectral sum vs linear solve
constexpr double kDegeneracyScale = 1e-8;
constexpr std::int64_t kDenseSolveLimit = 2000;

struct GroundState {
    double energy = 0.0;
    Vector vector;
    double gap = 0.0;      // E1 - E0
    double residual = 0.0; // ||H psi - E0 psi||
};

/// Lowest eigenpair: dense solve up to kDenseSolveLimit, Lanczos with full
/// reorthogonalization above (deterministic start from `seed`).
GroundState ground_state(const SparseHamiltonian& h, std::uint64_t seed = 1);

/// Lowest eigenvalue only (cheaper dense path, same iterative path).
double ground_energy(const SparseHamiltonian& h, std::uint64_t seed = 1);

/// Full spectrum for oracle use on dense-solvable instances.
struct DenseSpectrum {
    RealVector values;
    Matrix vectors;
};
DenseSpectrum dense_spectrum(const SparseHamiltonian& h);

enum class SpinAxis { X, Y }; // cos or sin component

/// s_k^alpha = |Lambda|^{-1/2} sum_x op_x e^{i k x} applied through one-site
/// actions; `adjoint` flips the phase sign (the per-site ops are Hermitian).
Vector spin_fourier_apply(const LatticeSpec& lat, const RotorModel& model, const Vector& psi,
                          const Momentum& k, bool adjoint, SpinAxis axis = SpinAxis::X);

struct MomentumReport {
    Momentum k;
    std::vector<double> kvec;
    double g = 0.0;        // spectral (n>0) symmetrized form, Eq-independent of phase
    double g_def = 0.0;    // <s s*> = ||s* psi0||^2, the definition form
    double n0_weight = 0.0;           // |<psi0| s psi0>|^2
    double chi = 0.0;                 // restricted linear solve (primary)
    std::optional<double> chi_spectral; // full eigenbasis oracle, when available
    double dcomm = 0.0;               // (1/2)<[[s,H],s*]> by nested sparse commutators
    double dcomm_sin2 = 0.0;          // (1/(2 I |L|)) sum_y <sin^2_y>
    double g_bound = 0.0;             // 1/(2 sqrt(I J E(k))), inf at k=0 or J=0
    double chi_bound = 0.0;           // 1/(J E(k))
    double d_bound = 0.0;             // 1/(4I)
    double schwarz_slack = 0.0;       // chi*dcomm - g^2
    double chi_slack = 0.0;           // chi_bound - chi
    double g_slack = 0.0;             // g_bound - g
    double d_slack = 0.0;             // d_bound - dcomm
    bool degenerate = false;          // gap below threshold: checks flagged, not asserted
};

/// Per-momentum observables. chi solves (H - E0) z = P v in the orthogonal
/// complement of psi0 with conjugate gradients; `spectrum`, when given,
/// additionally evaluates the spectral sums as a cross-check.
MomentumReport momentum_observables(const GroundState& gs, const SparseHamiltonian& h,
                                    const RotorModel& model, const LatticeSpec& lat,
                                    const Momentum& k,
                                    const DenseSpectrum* spectrum = nullptr);

struct SumRule {
    double sum_g = 0.0;         // sum_k of the x/y-averaged <s s*>; Parseval-exact
    double rhs_truncated = 0.0; // (1/2) sum_x <cos^2 + sin^2>_x
    double ideal_rhs = 0.0;     // |Lambda|/2
};

SumRule sum_rule(const GroundState& gs, const RotorModel& model, const LatticeSpec& lat);

struct SymmetryReport {
    double max_mean_residual = 0.0; // max_{k,alpha} |<s_k^alpha>|
    double max_xy_residual = 0.0;   // max_k |g_k^x - g_k^y|
    bool degenerate = false;        // identities not guaranteed; flagged only
};

SymmetryReport symmetry_report(const GroundState& gs, const SparseHamiltonian& h,
                               const RotorModel& model, const LatticeSpec& lat);

/// Solves (H - E0) z = rhs restricted to the complement of psi0.
/// Throws NumericalError when the restricted operator is near singular.
Vector solve_restricted(const SparseHamiltonian& h, const GroundState& gs, const Vector& rhs,
                        double rel_tol = 1e-11);

namespace detail {
/// The iterative path regardless of dimension; exposed so the cross-check
/// suites can compare it against the dense oracle on small instances.
GroundState lanczos_ground_state(const SparseHamiltonian& h, std::uint64_t seed);
}

} // namespace klss
