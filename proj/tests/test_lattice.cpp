#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "klss/lattice.hpp"

#include <set>

using namespace klss;

TEST_CASE("chain with wrap: d=1, N=2") {
    LatticeSpec lat = build_lattice(1, 2);
    CHECK(lat.volume() == 4);
    CHECK(lat.bonds.size() == 4);
    std::vector<int> coords;
    for (const auto& s : lat.sites) coords.push_back(s[0]);
    CHECK(coords == std::vector<int>{-1, 0, 1, 2});
    // x = N wraps to x = -N+1
    const Bond& wrap = lat.bonds.back();
    CHECK(lat.sites[wrap.a][0] == 2);
    CHECK(lat.sites[wrap.b][0] == -1);
}

TEST_CASE("site and bond counts: d=2, N=2") {
    LatticeSpec lat = build_lattice(2, 2);
    CHECK(lat.volume() == 16);
    CHECK(lat.bonds.size() == 32);
    CHECK_FALSE(lat.doubled_bonds);
}

// brute-force neighbor oracle: every unordered pair at wrap distance 1
TEST_CASE("minimal lattice d=2, N=1 carries doubled bonds") {
    LatticeSpec lat = build_lattice(2, 1);
    CHECK(lat.volume() == 4);
    CHECK(lat.bonds.size() == 8);
    CHECK(lat.doubled_bonds);

    auto wrap_dist = [&](int a, int b) {
        int edge = lat.edge();
        int total = 0;
        for (int i = 0; i < lat.d; ++i) {
            int diff = std::abs(lat.sites[a][i] - lat.sites[b][i]) % edge;
            total += std::min(diff, edge - diff);
        }
        return total;
    };
    std::multiset<std::pair<int, int>> enumerated;
    for (const Bond& b : lat.bonds)
        enumerated.insert({std::min(b.a, b.b), std::max(b.a, b.b)});
    std::multiset<std::pair<int, int>> oracle;
    for (int a = 0; a < lat.volume(); ++a)
        for (int b = a + 1; b < lat.volume(); ++b)
            if (wrap_dist(a, b) == 1) {
                // each adjacent pair is reached twice on the 2-site torus
                oracle.insert({a, b});
                oracle.insert({a, b});
            }
    CHECK(enumerated == oracle);
}

TEST_CASE("bond set closed under reflection") {
    LatticeSpec lat = build_lattice(2, 2);
    std::set<std::pair<int, int>> pairs;
    for (const Bond& b : lat.bonds) pairs.insert({std::min(b.a, b.b), std::max(b.a, b.b)});
    for (const Bond& b : lat.bonds) {
        int ma = lat.mirror[b.a], mb = lat.mirror[b.b];
        CHECK(pairs.count({std::min(ma, mb), std::max(ma, mb)}) == 1);
    }
}

TEST_CASE("reflection is an involution pairing the halves") {
    for (int d : {1, 2}) {
        LatticeSpec lat = build_lattice(d, 2);
        int left = 0;
        for (int s = 0; s < lat.volume(); ++s) {
            CHECK(lat.mirror[lat.mirror[s]] == s);
            CHECK(lat.left_mask[s] != lat.left_mask[lat.mirror[s]]);
            left += lat.left_mask[s];
        }
        CHECK(2 * left == lat.volume());
    }
}

TEST_CASE("Brillouin grid matches the site enumeration") {
    LatticeSpec lat = build_lattice(2, 2);
    auto grid = lat.momentum_grid();
    CHECK(int(grid.size()) == lat.volume());
    int zeros = 0;
    for (const auto& k : grid) {
        CHECK(lat.on_grid(k));
        if (k.is_zero()) ++zeros;
    }
    CHECK(zeros == 1);
    CHECK_FALSE(lat.on_grid(Momentum{{-2, 0}})); // m = -N excluded
    CHECK(lat.on_grid(Momentum{{2, 0}}));
}

TEST_CASE("dispersion values") {
    CHECK(dispersion(std::vector<double>{0.0, 0.0}) == 0.0);
    LatticeSpec lat2 = build_lattice(2, 2);
    CHECK(dispersion(lat2, Momentum{{2, 2}}) == doctest::Approx(4.0).epsilon(1e-15));
    LatticeSpec lat3 = build_lattice(3, 2);
    CHECK(dispersion(lat3, Momentum{{2, 0, 0}}) == doctest::Approx(2.0).epsilon(1e-15));
}
