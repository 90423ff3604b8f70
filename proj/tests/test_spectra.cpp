#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "klss/spectra.hpp"
#include "oracles.hpp"

using namespace klss;

namespace {

struct Pipeline {
    RotorModel model;
    LatticeSpec lat;
    SparseHamiltonian h;
    GroundState gs;

    Pipeline(int d, int half_edge, int cutoff, double inertia, double coupling,
             PerturbField b = {})
        : model{inertia, coupling, cutoff}, lat(build_lattice(d, half_edge)) {
        if (b.values.empty()) b = PerturbField::zero(lat.volume());
        h = assemble_hamiltonian(model, lat, b);
        gs = ground_state(h);
    }
};

} // namespace

TEST_CASE("free rotors: exact closed forms") {
    for (double inertia : {1.0, 2.0}) {
        Pipeline p(1, 2, 2, inertia, 0.0);
        CHECK(std::abs(p.gs.energy) < 1e-12);
        CHECK(p.gs.gap == doctest::Approx(1.0 / (2.0 * inertia)).epsilon(1e-12));
        CHECK(p.gs.residual < 1e-12);

        for (const Momentum& k : p.lat.momentum_grid()) {
            Vector sv = spin_fourier_apply(p.lat, p.model, p.gs.vector, k, false);
            CHECK(sv.squaredNorm() == doctest::Approx(0.5).epsilon(1e-12));
            MomentumReport m = momentum_observables(p.gs, p.h, p.model, p.lat, k);
            CHECK(m.g == doctest::Approx(0.5).epsilon(1e-9));
            CHECK(m.chi == doctest::Approx(inertia).epsilon(1e-9));
            CHECK(m.dcomm == doctest::Approx(1.0 / (4.0 * inertia)).epsilon(1e-9));
            CHECK(m.g * m.g == doctest::Approx(m.chi * m.dcomm).epsilon(1e-9));
            CHECK(m.dcomm_sin2 == doctest::Approx(m.dcomm).epsilon(1e-9));
        }
        SumRule sr = sum_rule(p.gs, p.model, p.lat);
        CHECK(sr.sum_g == doctest::Approx(sr.ideal_rhs).epsilon(1e-12));

        SymmetryReport sym = symmetry_report(p.gs, p.h, p.model, p.lat);
        CHECK(sym.max_mean_residual < 1e-12);
        CHECK(sym.max_xy_residual < 1e-12);
    }
}

TEST_CASE("spin fourier operator basics") {
    Pipeline p(1, 2, 1, 1.0, 1.0);
    Momentum k0{{0}};

    SUBCASE("k=0 is Hermitian so both applications agree bitwise") {
        Vector psi = Vector::Random(p.h.dim);
        Vector a = spin_fourier_apply(p.lat, p.model, psi, k0, false);
        Vector b = spin_fourier_apply(p.lat, p.model, psi, k0, true);
        CHECK((a.array() == b.array()).all());
    }
    SUBCASE("linearity") {
        Vector x = Vector::Random(p.h.dim), y = Vector::Random(p.h.dim);
        cxd al(0.3, -1.1), be(-0.8, 0.2);
        Momentum k{{1}};
        Vector lhs = spin_fourier_apply(p.lat, p.model, Vector(al * x + be * y), k, false);
        Vector rhs = al * spin_fourier_apply(p.lat, p.model, x, k, false) +
                     be * spin_fourier_apply(p.lat, p.model, y, k, false);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-11);
    }
    SUBCASE("off-grid momentum is rejected") {
        Vector psi = Vector::Random(p.h.dim);
        CHECK_THROWS_AS(spin_fourier_apply(p.lat, p.model, psi, Momentum{{-2}}, false),
                        std::invalid_argument);
        CHECK_THROWS_AS(spin_fourier_apply(p.lat, p.model, psi, Momentum{{1, 1}}, false),
                        std::invalid_argument);
    }
    SUBCASE("matches the dense embedding oracle") {
        Momentum k{{1}};
        Matrix sk = oracle::dense_spin_fourier(p.model, p.lat, k);
        Vector psi = Vector::Random(p.h.dim);
        Vector fast = spin_fourier_apply(p.lat, p.model, psi, k, false);
        CHECK((fast - sk * psi).cwiseAbs().maxCoeff() < 1e-13);
        Vector adj = spin_fourier_apply(p.lat, p.model, psi, k, true);
        CHECK((adj - sk.adjoint() * psi).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("iterative solver matches the dense oracle") {
    Pipeline p(1, 2, 2, 1.0, 1.0); // dim 625, dense path
    GroundState it = detail::lanczos_ground_state(p.h, 3);
    CHECK(std::abs(it.energy - p.gs.energy) < 1e-9);
    CHECK(it.gap == doctest::Approx(p.gs.gap).epsilon(1e-6));
    CHECK(std::abs(std::abs(it.vector.dot(p.gs.vector)) - 1.0) < 1e-8);
}

TEST_CASE("interacting pipeline at M=2") {
    Pipeline p(1, 2, 2, 1.0, 1.0);
    DenseSpectrum sp = dense_spectrum(p.h);

    SUBCASE("chi cross-check and bound chain per momentum") {
        for (const Momentum& k : p.lat.momentum_grid()) {
            MomentumReport m = momentum_observables(p.gs, p.h, p.model, p.lat, k, &sp);
            REQUIRE(m.chi_spectral.has_value());
            CHECK(std::abs(*m.chi_spectral - m.chi) <= kTolChi * (1.0 + std::abs(m.chi)));
            CHECK(m.schwarz_slack >= -kTolObservable);
            CHECK(m.d_slack >= -kTolObservable);
            CHECK(m.n0_weight < 1e-20);
            if (!k.is_zero()) {
                CHECK(m.chi_slack >= -kTolObservable);
                CHECK(m.g_slack >= -kTolObservable);
            } else {
                CHECK(std::isinf(m.chi_bound));
            }
        }
    }
    SUBCASE("dcomm against the dense nested-commutator oracle") {
        Matrix sk = oracle::dense_spin_fourier(p.model, p.lat, Momentum{{1}});
        Matrix hd = p.h.dense();
        Matrix comm = (sk * hd - hd * sk) * sk.adjoint() - sk.adjoint() * (sk * hd - hd * sk);
        double d_oracle = 0.5 * (p.gs.vector.dot(comm * p.gs.vector)).real();
        MomentumReport m = momentum_observables(p.gs, p.h, p.model, p.lat, Momentum{{1}});
        CHECK(m.dcomm == doctest::Approx(d_oracle).epsilon(1e-10));
    }
    SUBCASE("sum rule is the exact truncated identity") {
        SumRule sr = sum_rule(p.gs, p.model, p.lat);
        CHECK(std::abs(sr.sum_g - sr.rhs_truncated) < 1e-10);
        CHECK(sr.ideal_rhs == 2.0);
        CHECK(sr.sum_g < sr.ideal_rhs); // truncation deficit is positive
    }
    SUBCASE("symmetry residuals vanish at truncation") {
        SymmetryReport sym = symmetry_report(p.gs, p.h, p.model, p.lat);
        CHECK(sym.max_mean_residual <= 1e-10);
        CHECK(sym.max_xy_residual <= 1e-10);
        CHECK_FALSE(sym.degenerate);
    }
    SUBCASE("reports are invariant under a global phase of the ground state") {
        GroundState phased = p.gs;
        phased.vector *= std::polar(1.0, 0.7331);
        Momentum k{{1}};
        MomentumReport a = momentum_observables(p.gs, p.h, p.model, p.lat, k);
        MomentumReport b = momentum_observables(phased, p.h, p.model, p.lat, k);
        CHECK(a.g == doctest::Approx(b.g).epsilon(1e-12));
        CHECK(a.chi == doctest::Approx(b.chi).epsilon(1e-9));
        CHECK(a.dcomm == doctest::Approx(b.dcomm).epsilon(1e-12));
    }
}

TEST_CASE("truncation trends in the cutoff") {
    // the sum-rule deficit and the gap between the double commutator and its
    // untruncated sin^2 reduction are both band-edge effects: they must
    // shrink fast as M grows
    double prev_deficit = 1e9, prev_sin2 = 1e9;
    for (int cutoff : {1, 2, 3, 4}) {
        Pipeline p(1, 2, cutoff, 1.0, 1.0);
        SumRule sr = sum_rule(p.gs, p.model, p.lat);
        double deficit = sr.ideal_rhs - sr.sum_g;
        CHECK(deficit > 0.0);
        CHECK(deficit < prev_deficit);
        prev_deficit = deficit;

        if (cutoff <= 3) {
            MomentumReport m = momentum_observables(p.gs, p.h, p.model, p.lat, Momentum{{1}});
            double sin2_dev = std::abs(m.dcomm - m.dcomm_sin2);
            CHECK(sin2_dev < prev_sin2);
            prev_sin2 = sin2_dev;
        }
    }
    CHECK(prev_sin2 < 3e-3);
}

TEST_CASE("symmetry-broken negative control") {
    // a real cos-coupled field breaks the rotation symmetry O(1) but the
    // Schwarz chain needs no symmetry at all
    LatticeSpec lat = build_lattice(1, 2);
    PerturbField b = PerturbField::zero(lat.volume());
    b.values[0] = 1.3;
    b.values[1] = -0.4;
    b.values[2] = 0.8;
    Pipeline p(1, 2, 2, 1.0, 1.0, b);

    SymmetryReport sym = symmetry_report(p.gs, p.h, p.model, p.lat);
    CHECK(sym.max_mean_residual > 0.01);
    CHECK(sym.max_xy_residual > 0.01);

    double max_n0 = 0.0;
    for (const Momentum& k : p.lat.momentum_grid()) {
        MomentumReport m = momentum_observables(p.gs, p.h, p.model, p.lat, k);
        CHECK(m.schwarz_slack >= -kTolObservable);
        max_n0 = std::max(max_n0, m.n0_weight);
    }
    // the n=0 term reappears at some momentum: the definition and spectral
    // forms separate once the mean spin is nonzero
    CHECK(max_n0 > 1e-4);
}

TEST_CASE("restricted solve diagnostics") {
    Pipeline p(1, 2, 1, 1.0, 1.0);
    GroundState fake = p.gs;
    fake.gap = 0.0; // simulate a degenerate report
    CHECK_THROWS_AS(solve_restricted(p.h, fake, Vector(Vector::Random(p.h.dim))), NumericalError);
}
