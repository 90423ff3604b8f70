#include "klss/lattice.hpp"

#include <cmath>
#include <numbers>

namespace klss {

int LatticeSpec::site_index(std::span<const int> coords) const {
    require(int(coords.size()) == d, "site_index: wrong dimension");
    int idx = 0;
    for (int i = 0; i < d; ++i) {
        int c = coords[i];
        require(c >= -half_edge + 1 && c <= half_edge, "site_index: coordinate out of range");
        idx = idx * edge() + (c + half_edge - 1);
    }
    return idx;
}

std::vector<Momentum> LatticeSpec::momentum_grid() const {
    // same enumeration as the sites: m_j in (-N, N]
    std::vector<Momentum> grid;
    grid.reserve(sites.size());
    for (const auto& s : sites) grid.push_back(Momentum{s});
    return grid;
}

std::vector<double> LatticeSpec::kvec(const Momentum& k) const {
    require(on_grid(k), "momentum not on the lattice Brillouin grid");
    std::vector<double> out(d);
    for (int i = 0; i < d; ++i) out[i] = std::numbers::pi * k.m[i] / half_edge;
    return out;
}

bool LatticeSpec::on_grid(const Momentum& k) const {
    if (int(k.m.size()) != d) return false;
    for (int v : k.m)
        if (v <= -half_edge || v > half_edge) return false;
    return true;
}

LatticeSpec build_lattice(int d, int half_edge) {
    require(d >= 1, "build_lattice: d >= 1");
    require(half_edge >= 1, "build_lattice: N >= 1");
    LatticeSpec lat;
    lat.d = d;
    lat.half_edge = half_edge;
    lat.doubled_bonds = (half_edge == 1);

    const int edge = 2 * half_edge;
    int vol = 1;
    for (int i = 0; i < d; ++i) vol *= edge;
    lat.sites.reserve(vol);
    std::vector<int> c(d, -half_edge + 1);
    for (int s = 0; s < vol; ++s) {
        lat.sites.push_back(c);
        for (int i = d - 1; i >= 0; --i) {
            if (++c[i] <= half_edge) break;
            c[i] = -half_edge + 1;
        }
    }

    // one bond per site per axis; x_i = N wraps to x_i = -N+1
    lat.bonds.reserve(std::size_t(d) * vol);
    for (int s = 0; s < vol; ++s) {
        for (int ax = 0; ax < d; ++ax) {
            std::vector<int> n = lat.sites[s];
            n[ax] = (n[ax] == half_edge) ? -half_edge + 1 : n[ax] + 1;
            lat.bonds.push_back(Bond{s, lat.site_index(n), ax});
        }
    }

    lat.mirror.resize(vol);
    lat.left_mask.resize(vol);
    for (int s = 0; s < vol; ++s) {
        std::vector<int> m = lat.sites[s];
        m[0] = 1 - m[0]; // reflection across x_1 = 1/2
        lat.mirror[s] = lat.site_index(m);
        lat.left_mask[s] = lat.sites[s][0] <= 0 ? 1 : 0;
    }
    return lat;
}

double dispersion(std::span<const double> k) {
    double e = double(k.size());
    for (double ki : k) e -= std::cos(ki);
    return e;
}

double dispersion(const LatticeSpec& lat, const Momentum& k) {
    auto kv = lat.kvec(k);
    return dispersion(kv);
}

} // namespace klss
