#pragma once

#include "klss/spectra.hpp"

namespace klss {

constexpr double kTolCurvature = 1e-6;
constexpr double kTolMatch = 1e-6;  // relative, fd vs perturbation assembly
constexpr double kTolEnergy = 1e-9; // scaled by (1 + |E0|)

struct CurvatureReport {
    double fd_second = 0.0;       // centered 5-point stencil at step h
    double fd_second_half = 0.0;  // Richardson companion at h/2
    double pt_second = 0.0;       // 2 [ sum_{n>0} |<n|H'|0>|^2/(E0-En) + C(b) ]
    double c_of_b = 0.0;
    double step = 0.0;
    bool stencil_consistent = true;
};

/// d^2 E0(lambda b)/dlambda^2 at 0, computed two independent ways: finite
/// differences of ground energies, and the second order perturbation
/// assembly with the restricted linear solve.
CurvatureReport curvature_check(const RotorModel& model, const LatticeSpec& lat,
                                const PerturbField& b);

struct RpSlacks {
    double monotone_slack = 0.0; // E0(b) - E0(0)
    double bond_slack = 0.0;     // 2 E0(b) - E0(b_L) - E0(b_R)
    std::int64_t non_zero_bonds = 0;
    std::int64_t non_zero_bonds_l = 0;
    std::int64_t non_zero_bonds_r = 0;
};

/// The two reflection-positivity energy inequalities; all ground energies
/// solved at matched tolerance.
RpSlacks rp_inequalities(const RotorModel& model, const LatticeSpec& lat, const PerturbField& b);

struct ProbeReport {
    Momentum k;
    double c_direct = 0.0;  // (J/2) sum |b_x - b_y|^2 for the plane wave
    double j_epsilon = 0.0; // J E(k)
    double assembled_shift_dev = 0.0; // max |H(b) - H(0) - H'(b) - C(b) Id| entrywise
    double chi = 0.0;
    double g = 0.0;
    double chi_slack = 0.0; // 1/(J E(k)) - chi
    double g_slack = 0.0;   // 1/(2 sqrt(I J E(k))) - g
};

/// The plane-wave field b_x = |Lambda|^{-1/2} e^{ikx}: checks the analytic
/// C(b) = J E(k) against the direct bond sum and the assembled coefficients,
/// then evaluates the susceptibility and correlation bounds.
ProbeReport plane_wave_probe(const RotorModel& model, const LatticeSpec& lat, const Momentum& k);

/// Plane-wave field for a grid momentum.
PerturbField plane_wave_field(const LatticeSpec& lat, const Momentum& k, bool imaginary = false);

} // namespace klss
