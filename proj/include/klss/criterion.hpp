#pragma once

#include "klss/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace klss {

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool diverged = false;
    bool tol_achieved = false;
    std::vector<std::pair<std::int64_t, double>> refinement_trace; // (cells per axis, value)
};

/// (2 pi)^-d integral of E(k)^{-1/2} over [-pi,pi]^d on shifted midpoint
/// grids (no node hits k = 0), doubling the grid until successive values
/// differ by at most tol. d = 1 is log-divergent: four successive dyadic
/// refinements each growing by more than tol flag divergence.
IntegralResult integral_Id(int d, double tol, std::int64_t max_cells_per_axis = 1 << 16);

/// (1/|Lambda|) sum over nonzero Brillouin modes of E(k)^{-1/2} for the
/// hypercube of edge 2N.
double finite_mode_sum(int d, int half_edge);

/// Single-thread reference of the folded midpoint sum at a fixed grid;
/// the parallel path must reproduce it bitwise.
double bz_quadrature_serial(int d, std::int64_t cells_per_axis);
double bz_quadrature(int d, std::int64_t cells_per_axis);

struct LroVerdict {
    bool criterion_holds = false;
    double lower_bound_c = 0.0; // (sqrt(IJ) - S) / (2 sqrt(IJ)), > 0 iff holds
    double mode_sum = 0.0;      // S: finite sum or the d-dimensional integral
    bool used_integral = false;
};

/// sqrt(I J) > S decides the long-range-order criterion; half_edge empty
/// means the thermodynamic limit (the integral).
LroVerdict lro_verdict(double inertia, double coupling, int d, std::optional<int> half_edge,
                       double tol = 1e-5);

} // namespace klss
