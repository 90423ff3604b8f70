#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "klss/rotor.hpp"
#include "oracles.hpp"

#include <random>
#include <sstream>

using namespace klss;

namespace {

PerturbField random_field(const LatticeSpec& lat, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    PerturbField b = PerturbField::zero(lat.volume());
    for (cxd& v : b.values) v = cxd(n01(gen), n01(gen));
    return b;
}

} // namespace

TEST_CASE("site operators at M=1") {
    SiteOperators ops = site_operators(1, 1.0);
    CHECK(ops.kinetic(0) == 0.5);
    CHECK(ops.kinetic(1) == 0.0);
    CHECK(ops.kinetic(2) == 0.5);
    CHECK(ops.cos_op(0, 1) == cxd(0.5));
    CHECK(ops.cos_op(1, 0) == cxd(0.5));
    CHECK(ops.cos_op(0, 0) == cxd(0.0));
    CHECK((ops.cos_op - ops.cos_op.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((ops.sin_op - ops.sin_op.adjoint()).cwiseAbs().maxCoeff() == 0.0);

    // band-matrix product oracle: cos^2 + sin^2 loses half the weight at the edges
    Matrix c2s2 = ops.cos_op * ops.cos_op + ops.sin_op * ops.sin_op;
    Matrix expect = Matrix::Zero(3, 3);
    expect(0, 0) = 0.5;
    expect(1, 1) = 1.0;
    expect(2, 2) = 0.5;
    CHECK((c2s2 - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("J=0 Hamiltonian is diagonal with kinetic entries") {
    RotorModel model{2.0, 0.0, 1};
    LatticeSpec lat = build_lattice(1, 2);
    SparseHamiltonian h = assemble_hamiltonian(model, lat, PerturbField::zero(lat.volume()));
    ProductSpace space(lat.volume(), model.per_site_dim());
    for (std::int64_t r = 0; r < h.dim; ++r) {
        for (std::int64_t k = h.row_ptr[r]; k < h.row_ptr[r + 1]; ++k) {
            if (h.col[k] != r) {
                CHECK(h.val[k] == cxd(0.0));
                continue;
            }
            double expect = 0.0;
            for (int s = 0; s < lat.volume(); ++s) {
                double n = space.digit(r, s) - model.cutoff;
                expect += n * n / (2.0 * model.inertia);
            }
            CHECK(h.val[k].real() == doctest::Approx(expect).epsilon(1e-15));
        }
    }
}

TEST_CASE("constant field reproduces the unperturbed sparse data bitwise") {
    RotorModel model{1.0, 1.0, 1};
    LatticeSpec lat = build_lattice(1, 2);
    PerturbField b = PerturbField::zero(lat.volume());
    for (cxd& v : b.values) v = cxd(0.37, -2.11);
    SparseHamiltonian hb = assemble_hamiltonian(model, lat, b);
    SparseHamiltonian h0 = assemble_hamiltonian(model, lat, PerturbField::zero(lat.volume()));
    CHECK(hb.same_data(h0));
}

TEST_CASE("sparse assembly against the dense Kronecker oracle") {
    SUBCASE("unperturbed, dyadic couplings: exact agreement") {
        RotorModel model{1.0, 1.0, 1};
        LatticeSpec lat = build_lattice(1, 2);
        SparseHamiltonian h = assemble_hamiltonian(model, lat, PerturbField::zero(lat.volume()));
        Matrix dense = oracle::dense_rotor_hamiltonian(model, lat, PerturbField::zero(lat.volume()));
        CHECK((h.dense() - dense).cwiseAbs().maxCoeff() == 0.0);
        CHECK(h.constant_offset == model.coupling * double(lat.bonds.size()));
    }
    SUBCASE("complex field, generic couplings") {
        RotorModel model{0.7, 1.3, 2};
        LatticeSpec lat = build_lattice(1, 2);
        PerturbField b = random_field(lat, 5);
        SparseHamiltonian h = assemble_hamiltonian(model, lat, b);
        Matrix dense = oracle::dense_rotor_hamiltonian(model, lat, b);
        CHECK((h.dense() - dense).cwiseAbs().maxCoeff() < 1e-13 * dense.cwiseAbs().maxCoeff());
        CHECK(h.stored_hermitian());
    }
    SUBCASE("two dimensions") {
        RotorModel model{1.0, 0.8, 1};
        LatticeSpec lat = build_lattice(2, 1);
        PerturbField b = random_field(lat, 6);
        SparseHamiltonian h = assemble_hamiltonian(model, lat, b);
        Matrix dense = oracle::dense_rotor_hamiltonian(model, lat, b);
        CHECK((h.dense() - dense).cwiseAbs().maxCoeff() < 1e-13 * dense.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("stored entries are conjugate-symmetric bitwise") {
    RotorModel model{0.9, 1.7, 2};
    LatticeSpec lat = build_lattice(1, 2);
    SparseHamiltonian h = assemble_hamiltonian(model, lat, random_field(lat, 9));
    CHECK(h.stored_hermitian());
}

TEST_CASE("quadratic structure in the field strength") {
    RotorModel model{1.0, 1.0, 2};
    LatticeSpec lat = build_lattice(1, 2);
    PerturbField b = random_field(lat, 11);
    PerturbField b2 = b;
    for (cxd& v : b2.values) v *= 2.0;

    SparseHamiltonian h0 = assemble_hamiltonian(model, lat, PerturbField::zero(lat.volume()));
    SparseHamiltonian h1 = assemble_hamiltonian(model, lat, b);
    SparseHamiltonian h2 = assemble_hamiltonian(model, lat, b2);
    SparseHamiltonian hp = assemble_hprime(model, lat, b);
    double c = c_of_b(model, lat, b);

    // H(lambda b) = H(0) + lambda H'(b) + lambda^2 C(b) at lambda = 1 and 2
    Vector probe = Vector::Random(h0.dim).normalized();
    Vector r1 = h1.apply(probe) - h0.apply(probe) - hp.apply(probe) - c * probe;
    Vector r2 = h2.apply(probe) - h0.apply(probe) - 2.0 * hp.apply(probe) - 4.0 * c * probe;
    double scale = h1.norm_estimate();
    CHECK(r1.cwiseAbs().maxCoeff() < 1e-13 * scale);
    CHECK(r2.cwiseAbs().maxCoeff() < 1e-13 * scale);
}

TEST_CASE("every stored entry conserves total angular momentum") {
    // the rotation R_theta acts diagonally with phase exp(-i theta sum_x n_x);
    // invariance of the sparse data is exactly this selection rule
    RotorModel model{1.0, 1.0, 2};
    LatticeSpec lat = build_lattice(1, 2);
    SparseHamiltonian h = assemble_hamiltonian(model, lat, PerturbField::zero(lat.volume()));
    ProductSpace space(lat.volume(), model.per_site_dim());
    auto total_n = [&](std::int64_t state) {
        int t = 0;
        for (int s = 0; s < lat.volume(); ++s) t += space.digit(state, s) - model.cutoff;
        return t;
    };
    for (std::int64_t r = 0; r < h.dim; ++r)
        for (std::int64_t k = h.row_ptr[r]; k < h.row_ptr[r + 1]; ++k)
            if (h.val[k] != cxd(0.0)) CHECK(total_n(r) == total_n(h.col[k]));
}

TEST_CASE("field reflection") {
    LatticeSpec lat = build_lattice(1, 2);

    SUBCASE("mirror-symmetric fields are fixed points") {
        PerturbField b = random_field(lat, 21);
        for (int s = 0; s < lat.volume(); ++s)
            if (!lat.left_mask[s]) b.values[s] = b.values[lat.mirror[s]];
        ReflectedFields r = reflect_field(b, lat);
        CHECK(r.b_l.values == b.values);
        CHECK(r.b_r.values == b.values);
    }
    SUBCASE("left field restricted to the left half is b itself") {
        PerturbField b = random_field(lat, 22);
        ReflectedFields r = reflect_field(b, lat);
        for (int s = 0; s < lat.volume(); ++s) {
            if (lat.left_mask[s]) CHECK(r.b_l.values[s] == b.values[s]);
            if (!lat.left_mask[s]) CHECK(r.b_r.values[s] == b.values[s]);
            CHECK(r.b_l.values[s] == r.b_l.values[lat.mirror[s]]);
        }
    }
    SUBCASE("non-zero bond counts drop when the plane crosses a non-zero bond") {
        // brute-force count oracle over the stored bond list
        auto count = [&](const PerturbField& f) {
            std::int64_t n = 0;
            for (const Bond& bond : lat.bonds)
                if (f.values[bond.a] != f.values[bond.b]) ++n;
            return n;
        };
        for (std::uint64_t s = 0; s < 20; ++s) {
            PerturbField b = random_field(lat, 100 + s);
            ReflectedFields r = reflect_field(b, lat);
            CHECK(r.non_zero_bonds == count(b));
            CHECK(r.non_zero_bonds_l == count(r.b_l));
            CHECK(r.non_zero_bonds_r == count(r.b_r));
            bool crossing = false;
            for (const Bond& bond : lat.bonds)
                if (lat.left_mask[bond.a] != lat.left_mask[bond.b] &&
                    b.values[bond.a] != b.values[bond.b])
                    crossing = true;
            if (crossing)
                CHECK(r.non_zero_bonds_l + r.non_zero_bonds_r <= 2 * r.non_zero_bonds - 1);
        }
    }
}

TEST_CASE("field size mismatch is rejected") {
    RotorModel model{1.0, 1.0, 1};
    LatticeSpec lat = build_lattice(1, 2);
    PerturbField wrong = PerturbField::zero(lat.volume() + 1);
    CHECK_THROWS_AS(assemble_hamiltonian(model, lat, wrong), std::invalid_argument);
    CHECK_THROWS_AS(reflect_field(wrong, lat), std::invalid_argument);
}

TEST_CASE("coordinate export round trip") {
    RotorModel model{1.0, 1.0, 1};
    LatticeSpec lat = build_lattice(1, 1);
    SparseHamiltonian h = assemble_hamiltonian(model, lat, PerturbField::zero(lat.volume()));
    std::ostringstream os;
    export_coordinate(h, os);
    std::istringstream is(os.str());
    Matrix parsed = Matrix::Zero(h.dim, h.dim);
    std::int64_t r, c;
    double re, im;
    while (is >> r >> c >> re >> im) parsed(r, c) += cxd(re, im);
    CHECK((parsed - h.dense()).cwiseAbs().maxCoeff() == 0.0);
}
