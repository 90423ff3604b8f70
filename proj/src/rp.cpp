#include "klss/rp.hpp"

#include <cmath>

namespace klss {

namespace {

PerturbField scaled(const PerturbField& b, double lambda) {
    PerturbField out = b;
    for (cxd& v : out.values) v *= lambda;
    return out;
}

} // namespace

CurvatureReport curvature_check(const RotorModel& model, const LatticeSpec& lat,
                                const PerturbField& b) {
    CurvatureReport rep;
    rep.c_of_b = c_of_b(model, lat, b);

    // Normalize the effective step so the quadratic term stays O(1e-6):
    // larger C(b) means larger curvature and the same relative stencil error.
    const double h = 1e-3 / std::max(1.0, std::sqrt(rep.c_of_b));
    rep.step = h;

    auto energy_at = [&](double lambda) {
        return ground_energy(assemble_hamiltonian(model, lat, scaled(b, lambda)));
    };
    const double e0 = energy_at(0.0);
    auto stencil = [&](double s) {
        double em2 = energy_at(-2.0 * s), em1 = energy_at(-s);
        double ep1 = energy_at(s), ep2 = energy_at(2.0 * s);
        // grouped so that five equal energies cancel to exactly zero
        return ((16.0 * (em1 + ep1) - (em2 + ep2)) - 30.0 * e0) / (12.0 * s * s);
    };
    rep.fd_second = stencil(h);
    rep.fd_second_half = stencil(h / 2.0);
    rep.stencil_consistent =
        std::abs(rep.fd_second - rep.fd_second_half) <= 1e2 * kTolMatch * (1.0 + std::abs(rep.fd_second));

    SparseHamiltonian h0 = assemble_hamiltonian(model, lat, PerturbField::zero(lat.volume()));
    GroundState gs = ground_state(h0);
    SparseHamiltonian hp = assemble_hprime(model, lat, b);
    Vector v = hp.apply(gs.vector);
    v -= gs.vector.dot(v) * gs.vector;
    Vector z = solve_restricted(h0, gs, v);
    double delta2 = -v.dot(z).real(); // sum_{n>0} |<n|H'|0>|^2 / (E0 - E_n)
    rep.pt_second = 2.0 * (delta2 + rep.c_of_b);
    return rep;
}

RpSlacks rp_inequalities(const RotorModel& model, const LatticeSpec& lat, const PerturbField& b) {
    ReflectedFields refl = reflect_field(b, lat);
    RpSlacks out;
    out.non_zero_bonds = refl.non_zero_bonds;
    out.non_zero_bonds_l = refl.non_zero_bonds_l;
    out.non_zero_bonds_r = refl.non_zero_bonds_r;

    double e_b = 0.0, e_l = 0.0, e_r = 0.0, e_0 = 0.0;
#pragma omp parallel sections
    {
#pragma omp section
        e_b = ground_energy(assemble_hamiltonian(model, lat, b));
#pragma omp section
        e_l = ground_energy(assemble_hamiltonian(model, lat, refl.b_l));
#pragma omp section
        e_r = ground_energy(assemble_hamiltonian(model, lat, refl.b_r));
#pragma omp section
        e_0 = ground_energy(assemble_hamiltonian(model, lat, PerturbField::zero(lat.volume())));
    }
    out.monotone_slack = e_b - e_0;
    out.bond_slack = 2.0 * e_b - e_l - e_r;
    return out;
}

PerturbField plane_wave_field(const LatticeSpec& lat, const Momentum& k, bool imaginary) {
    auto kv = lat.kvec(k);
    PerturbField b = PerturbField::zero(lat.volume());
    const double norm = 1.0 / std::sqrt(double(lat.volume()));
    for (int s = 0; s < lat.volume(); ++s) {
        double phase = 0.0;
        for (int i = 0; i < lat.d; ++i) phase += kv[i] * lat.sites[s][i];
        cxd v = norm * std::exp(cxd(0.0, phase));
        b.values[s] = imaginary ? cxd(0.0, 1.0) * v : v;
    }
    return b;
}

ProbeReport plane_wave_probe(const RotorModel& model, const LatticeSpec& lat, const Momentum& k) {
    require(lat.on_grid(k), "plane_wave_probe: momentum not on the Brillouin grid");
    require(!k.is_zero(), "plane_wave_probe: k must be nonzero");

    ProbeReport rep;
    rep.k = k;
    PerturbField b = plane_wave_field(lat, k);
    rep.c_direct = c_of_b(model, lat, b);
    rep.j_epsilon = model.coupling * dispersion(lat, k);

    // H(b) - H(0) - H'(b) must be the scalar C(b); probe the assembled data
    // on seeded unit vectors (works at any dimension).
    SparseHamiltonian hb = assemble_hamiltonian(model, lat, b);
    SparseHamiltonian h0 = assemble_hamiltonian(model, lat, PerturbField::zero(lat.volume()));
    SparseHamiltonian hp = assemble_hprime(model, lat, b);
    std::uint64_t lcg = 0x2545f4914f6cdd1dull;
    for (int probe = 0; probe < 3; ++probe) {
        Vector v(h0.dim);
        for (std::int64_t i = 0; i < h0.dim; ++i) {
            lcg = lcg * 6364136223846793005ull + 1442695040888963407ull;
            v(i) = cxd(double(lcg >> 40) / double(1 << 24) - 0.5,
                       double((lcg >> 16) & 0xffffff) / double(1 << 24) - 0.5);
        }
        v.normalize();
        Vector r = hb.apply(v) - h0.apply(v) - hp.apply(v) - rep.c_direct * v;
        rep.assembled_shift_dev = std::max(rep.assembled_shift_dev, r.cwiseAbs().maxCoeff());
    }

    GroundState gs = ground_state(h0);
    MomentumReport mom = momentum_observables(gs, h0, model, lat, k);
    rep.chi = mom.chi;
    rep.g = mom.g;
    rep.chi_slack = mom.chi_bound - mom.chi;
    rep.g_slack = mom.g_bound - mom.g;
    return rep;
}

} // namespace klss
