#pragma once

#include "klss/types.hpp"

#include <span>
#include <vector>

namespace klss {

struct Bond {
    int a = 0;    // site index
    int b = 0;    // neighbor a + e_axis under periodic wrap
    int axis = 0;
};

/// Momentum on the Brillouin grid, k_j = pi m_j / N with m_j in (-N, N].
struct Momentum {
    std::vector<int> m;

    bool is_zero() const {
        for (int v : m)
            if (v != 0) return false;
        return true;
    }
};

/// Hypercube of edge 2N with coordinates -N+1..N per axis, periodic wrap,
/// and the reflection plane x_1 = 1/2.
struct LatticeSpec {
    int d = 0;
    int half_edge = 0; // N
    std::vector<std::vector<int>> sites; // lexicographic order
    std::vector<Bond> bonds;             // one ordered bond per site per axis
    std::vector<int> mirror;             // site index -> reflected site index
    std::vector<int> left_mask;          // 1 if x_1 <= 0 (Lambda_L)
    bool doubled_bonds = false;          // 2N == 2: both bonds of a pair coincide

    int volume() const { return int(sites.size()); }
    int edge() const { return 2 * half_edge; }
    int site_index(std::span<const int> coords) const;

    std::vector<Momentum> momentum_grid() const;
    std::vector<double> kvec(const Momentum& k) const;
    bool on_grid(const Momentum& k) const;
};

LatticeSpec build_lattice(int d, int half_edge);

/// E(k) = d - sum_i cos k_i; zero only at k = 0.
double dispersion(std::span<const double> k);
double dispersion(const LatticeSpec& lat, const Momentum& k);

} // namespace klss
