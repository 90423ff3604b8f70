#include "klss/criterion.hpp"
#include "klss/lattice.hpp"

#include <cmath>
#include <numbers>

namespace klss {

namespace {

// One outer-axis slab of the folded midpoint grid. The integrand is even in
// every k_i, so the sum runs over (0,pi)^d and the normalization becomes
// pi^-d. Summation inside a slab is sequential; slabs combine in index
// order, which keeps the parallel result identical to the serial one.
double slab_sum(int d, std::int64_t n, std::int64_t outer, const std::vector<double>& one) {
    if (d == 1) return 1.0 / std::sqrt(one[outer]);
    double total = 0.0;
    if (d == 2) {
        const double base = one[outer];
        for (std::int64_t j = 0; j < n; ++j) total += 1.0 / std::sqrt(base + one[j]);
        return total;
    }
    // generic d >= 3: odometer over the middle axes, vectorized innermost loop
    std::vector<std::int64_t> idx(d - 2, 0);
    while (true) {
        double base = one[outer];
        for (int i = 0; i < d - 2; ++i) base += one[idx[i]];
        double inner = 0.0;
        for (std::int64_t j = 0; j < n; ++j) inner += 1.0 / std::sqrt(base + one[j]);
        total += inner;
        int ax = d - 3;
        while (ax >= 0 && ++idx[ax] == n) idx[ax--] = 0;
        if (ax < 0) break;
    }
    return total;
}

std::vector<double> one_minus_cos_midpoints(std::int64_t n) {
    std::vector<double> one(n);
    const double h = std::numbers::pi / double(n);
    for (std::int64_t i = 0; i < n; ++i) one[i] = 1.0 - std::cos((double(i) + 0.5) * h);
    return one;
}

double combine(int d, std::int64_t n, const std::vector<double>& slabs) {
    double total = 0.0;
    for (double s : slabs) total += s;
    // cell volume h^d over the (2 pi)^d normalization, folded by 2^d symmetry
    return total / std::pow(double(n), d);
}

} // namespace

double bz_quadrature_serial(int d, std::int64_t n) {
    require(d >= 1, "bz_quadrature: d >= 1");
    auto one = one_minus_cos_midpoints(n);
    std::vector<double> slabs(n);
    for (std::int64_t o = 0; o < n; ++o) slabs[o] = slab_sum(d, n, o, one);
    return combine(d, n, slabs);
}

double bz_quadrature(int d, std::int64_t n) {
    require(d >= 1, "bz_quadrature: d >= 1");
    auto one = one_minus_cos_midpoints(n);
    std::vector<double> slabs(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t o = 0; o < n; ++o) slabs[o] = slab_sum(d, n, o, one);
    return combine(d, n, slabs);
}

IntegralResult integral_Id(int d, double tol, std::int64_t max_cells_per_axis) {
    require(d >= 1, "integral_Id: d >= 1");
    require(tol > 0.0, "integral_Id: tol > 0");

    IntegralResult out;
    double prev = 0.0;
    int growing_steps = 0;
    for (std::int64_t n = 16; n <= max_cells_per_axis; n *= 2) {
        double v = bz_quadrature(d, n);
        out.refinement_trace.emplace_back(n, v);
        out.value = v;
        if (out.refinement_trace.size() > 1) {
            double inc = v - prev;
            out.error_estimate = std::abs(inc);
            if (inc > tol)
                ++growing_steps;
            else
                growing_steps = 0;
            if (d == 1 && growing_steps >= 4) {
                out.diverged = true;
                return out;
            }
            if (std::abs(inc) <= tol) {
                out.tol_achieved = true;
                return out;
            }
        }
        prev = v;
    }
    if (!out.tol_achieved && !out.diverged)
        throw NumericalError("integral_Id: tol " + std::to_string(tol) +
                             " not reached by " + std::to_string(max_cells_per_axis) +
                             " cells per axis; best value " + std::to_string(out.value));
    return out;
}

double finite_mode_sum(int d, int half_edge) {
    require(d >= 1 && half_edge >= 1, "finite_mode_sum: bad arguments");
    LatticeSpec lat = build_lattice(d, half_edge);
    double total = 0.0;
    for (const Momentum& k : lat.momentum_grid()) {
        if (k.is_zero()) continue;
        total += 1.0 / std::sqrt(dispersion(lat, k));
    }
    return total / double(lat.volume());
}

LroVerdict lro_verdict(double inertia, double coupling, int d, std::optional<int> half_edge,
                       double tol) {
    require(inertia > 0.0 && coupling > 0.0, "lro_verdict: I, J > 0");
    LroVerdict v;
    if (half_edge) {
        v.mode_sum = finite_mode_sum(d, *half_edge);
    } else {
        v.used_integral = true;
        IntegralResult integral = integral_Id(d, tol);
        if (integral.diverged) {
            v.mode_sum = std::numeric_limits<double>::infinity();
            v.criterion_holds = false;
            v.lower_bound_c = -std::numeric_limits<double>::infinity();
            return v;
        }
        v.mode_sum = integral.value;
    }
    double sij = std::sqrt(inertia * coupling);
    v.criterion_holds = sij > v.mode_sum;
    v.lower_bound_c = (sij - v.mode_sum) / (2.0 * sij);
    return v;
}

} // namespace klss
