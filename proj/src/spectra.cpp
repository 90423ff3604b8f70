#include "klss/spectra.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <random>

namespace klss {

namespace {

Vector seeded_unit_vector(std::int64_t dim, std::uint64_t seed) {
    std::mt19937_64 gen(0x51ab5eedull ^ seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    Vector v(dim);
    for (std::int64_t i = 0; i < dim; ++i) v(i) = cxd(n01(gen), n01(gen));
    v.normalize();
    return v;
}

struct LanczosResult {
    double e0, e1;
    Vector psi0;
    double residual;
};

/// Lanczos with full reorthogonalization. The instances here are gapped and
/// modest (dim up to ~1e5), so an unrestarted run with a few hundred vectors
/// converges well past the requested residual.
LanczosResult lanczos_lowest(const SparseHamiltonian& h, std::uint64_t seed) {
    const std::int64_t dim = h.dim;
    const int max_iter = int(std::min<std::int64_t>(dim, 420));
    const double tol = 1e-12 * std::max(1.0, h.norm_estimate());

    std::vector<Vector> basis;
    basis.reserve(max_iter + 1);
    basis.push_back(seeded_unit_vector(dim, seed));
    std::vector<double> alpha, beta; // T diagonal / off-diagonal
    Vector w(dim);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small;
    double e0 = 0.0, e1 = 0.0, resid_bound = std::numeric_limits<double>::infinity();
    int m = 0;
    for (int j = 0; j < max_iter; ++j) {
        h.apply(basis[j], w);
        if (j > 0) w -= beta[j - 1] * basis[j - 1];
        alpha.push_back(w.dot(basis[j]).real());
        w -= alpha[j] * basis[j];
        // two-pass reorthogonalization keeps the basis orthonormal to roundoff
        for (int pass = 0; pass < 2; ++pass)
            for (const Vector& q : basis) w -= q.dot(w) * q;
        double b = w.norm();
        m = j + 1;
        if ((j >= 8 && j % 4 == 0) || b < tol || j == max_iter - 1) {
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
            for (int i = 0; i < m; ++i) t(i, i) = alpha[i];
            for (int i = 0; i + 1 < m; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
            small.compute(t);
            e0 = small.eigenvalues()(0);
            e1 = m > 1 ? small.eigenvalues()(1) : e0;
            resid_bound = b * std::abs(small.eigenvectors()(m - 1, 0));
            if (resid_bound < tol && m > 4) break;
        }
        if (b < tol) break; // invariant subspace found
        beta.push_back(b);
        basis.push_back(w / b);
    }

    LanczosResult out;
    out.e0 = e0;
    out.e1 = e1;
    out.psi0 = Vector::Zero(dim);
    for (int i = 0; i < m; ++i) out.psi0 += small.eigenvectors()(i, 0) * basis[i];
    out.psi0.normalize();
    Vector r = h.apply(out.psi0) - e0 * out.psi0;
    out.residual = r.norm();
    if (out.residual > 1e3 * tol)
        throw NumericalError("lanczos_lowest: no convergence, residual " +
                             std::to_string(out.residual));
    return out;
}

} // namespace

GroundState detail::lanczos_ground_state(const SparseHamiltonian& h, std::uint64_t seed) {
    LanczosResult lr = lanczos_lowest(h, seed);
    GroundState gs;
    gs.energy = lr.e0;
    gs.vector = lr.psi0;
    gs.gap = lr.e1 - lr.e0;
    gs.residual = lr.residual;
    return gs;
}

DenseSpectrum dense_spectrum(const SparseHamiltonian& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.dense());
    return DenseSpectrum{es.eigenvalues(), es.eigenvectors()};
}

GroundState ground_state(const SparseHamiltonian& h, std::uint64_t seed) {
    require(h.dim >= 1, "ground_state: empty Hamiltonian");
    GroundState gs;
    if (h.dim <= kDenseSolveLimit) {
        DenseSpectrum sp = dense_spectrum(h);
        gs.energy = sp.values(0);
        gs.vector = sp.vectors.col(0);
        gs.gap = h.dim > 1 ? sp.values(1) - sp.values(0) : 0.0;
    } else {
        LanczosResult lr = lanczos_lowest(h, seed);
        gs.energy = lr.e0;
        gs.vector = lr.psi0;
        gs.gap = lr.e1 - lr.e0;
    }
    gs.residual = (h.apply(gs.vector) - gs.energy * gs.vector).norm();
    return gs;
}

double ground_energy(const SparseHamiltonian& h, std::uint64_t seed) {
    if (h.dim <= kDenseSolveLimit) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(h.dense(), Eigen::EigenvaluesOnly);
        return es.eigenvalues()(0);
    }
    return lanczos_lowest(h, seed).e0;
}

Vector spin_fourier_apply(const LatticeSpec& lat, const RotorModel& model, const Vector& psi,
                          const Momentum& k, bool adjoint, SpinAxis axis) {
    require(lat.on_grid(k), "momentum not on the lattice Brillouin grid");
    const SiteOperators ops = site_operators(model.cutoff, model.inertia);
    ProductSpace space(lat.volume(), model.per_site_dim());
    require(psi.size() == space.dim, "spin_fourier_apply: state dimension mismatch");
    const Matrix& op = axis == SpinAxis::X ? ops.cos_op : ops.sin_op;
    const double sign = adjoint ? -1.0 : 1.0;
    const double norm = 1.0 / std::sqrt(double(lat.volume()));
    auto kv = lat.kvec(k);

    Vector out = Vector::Zero(space.dim);
    for (int s = 0; s < lat.volume(); ++s) {
        double phase = 0.0;
        for (int i = 0; i < lat.d; ++i) phase += kv[i] * lat.sites[s][i];
        cxd scale = norm * std::exp(cxd(0.0, sign * phase));
        apply_site_operator(op, s, space, scale, psi, out);
    }
    return out;
}

Vector solve_restricted(const SparseHamiltonian& h, const GroundState& gs, const Vector& rhs,
                        double rel_tol) {
    const double scale = std::max(1.0, h.norm_estimate());
    if (gs.gap < kDegeneracyScale * scale)
        throw NumericalError("solve_restricted: gap " + std::to_string(gs.gap) +
                             " below degeneracy threshold");
    const Vector& psi0 = gs.vector;
    auto project = [&psi0](Vector& v) { v -= psi0.dot(v) * psi0; };

    Vector b = rhs;
    project(b);
    Vector x = Vector::Zero(h.dim);
    Vector r = b;
    Vector p = r;
    Vector ap(h.dim);
    double rs = r.squaredNorm();
    const double stop = rel_tol * rel_tol * b.squaredNorm();
    const std::int64_t max_iter = std::max<std::int64_t>(200, 4 * h.dim);
    for (std::int64_t it = 0; it < max_iter && rs > stop; ++it) {
        h.apply(p, ap);
        ap -= gs.energy * p;
        project(ap);
        double alpha = rs / ap.dot(p).real();
        x += alpha * p;
        r -= alpha * ap;
        project(r);
        double rs_new = r.squaredNorm();
        p = r + (rs_new / rs) * p;
        rs = rs_new;
    }
    if (rs > stop && rs > 1e-20)
        throw NumericalError("solve_restricted: conjugate gradient stalled");
    return x;
}

MomentumReport momentum_observables(const GroundState& gs, const SparseHamiltonian& h,
                                    const RotorModel& model, const LatticeSpec& lat,
                                    const Momentum& k, const DenseSpectrum* spectrum) {
    MomentumReport rep;
    rep.k = k;
    rep.kvec = lat.kvec(k);
    const double scale = std::max(1.0, h.norm_estimate());
    rep.degenerate = gs.gap < kDegeneracyScale * scale;

    const Vector& psi0 = gs.vector;
    Vector sv = spin_fourier_apply(lat, model, psi0, k, false); // s psi0
    Vector av = spin_fourier_apply(lat, model, psi0, k, true);  // s* psi0

    cxd mean = psi0.dot(sv);
    rep.n0_weight = std::norm(mean);
    rep.g_def = av.squaredNorm();

    Vector psv = sv - psi0.dot(sv) * psi0;
    Vector pav = av - psi0.dot(av) * psi0;
    rep.g = 0.5 * (psv.squaredNorm() + pav.squaredNorm());

    // chi by two positive definite solves on the complement of psi0
    if (!rep.degenerate) {
        Vector z1 = solve_restricted(h, gs, psv);
        Vector z2 = solve_restricted(h, gs, pav);
        rep.chi = 0.5 * (psv.dot(z1).real() + pav.dot(z2).real());
    }

    // (1/2)<[[s,H],s*]> = (1/2)<sHs* - Hss* - s*sH + s*Hs>, each term by
    // literal sparse applications (no eigenvector shortcut)
    Vector h_av = h.apply(av);
    Vector h_sv = h.apply(sv);
    Vector h_psi = h.apply(psi0);
    Vector s_av = spin_fourier_apply(lat, model, av, k, false);
    Vector s_hpsi = spin_fourier_apply(lat, model, h_psi, k, false);
    cxd t1 = av.dot(h_av);    // <psi| s H s* psi>
    cxd t2 = h_psi.dot(s_av); // <psi| H s s* psi>
    cxd t3 = sv.dot(s_hpsi);  // <psi| s* s H psi>
    cxd t4 = sv.dot(h_sv);    // <psi| s* H s psi>
    rep.dcomm = 0.5 * (t1 - t2 - t3 + t4).real();

    // the untruncated reduction of the double commutator
    const SiteOperators ops = site_operators(model.cutoff, model.inertia);
    ProductSpace space(lat.volume(), model.per_site_dim());
    double sin2 = 0.0;
    for (int s = 0; s < lat.volume(); ++s) {
        Vector tmp = Vector::Zero(space.dim);
        apply_site_operator(ops.sin_op, s, space, 1.0, psi0, tmp);
        sin2 += tmp.squaredNorm();
    }
    rep.dcomm_sin2 = sin2 / (2.0 * model.inertia * lat.volume());

    if (spectrum) {
        const RealVector& ev = spectrum->values;
        Vector a = spectrum->vectors.adjoint() * sv;
        Vector b = spectrum->vectors.adjoint() * av;
        double chi_sp = 0.0;
        for (Eigen::Index n = 1; n < ev.size(); ++n)
            chi_sp += 0.5 * (std::norm(a(n)) + std::norm(b(n))) / (ev(n) - ev(0));
        rep.chi_spectral = chi_sp;
    }

    const double inf = std::numeric_limits<double>::infinity();
    double eps = dispersion(lat, k);
    double ij = model.inertia * model.coupling;
    rep.chi_bound = (k.is_zero() || model.coupling == 0.0) ? inf : 1.0 / (model.coupling * eps);
    rep.g_bound = (k.is_zero() || ij == 0.0) ? inf : 1.0 / (2.0 * std::sqrt(ij * eps));
    rep.d_bound = 1.0 / (4.0 * model.inertia);
    rep.schwarz_slack = rep.chi * rep.dcomm - rep.g * rep.g;
    rep.chi_slack = rep.chi_bound - rep.chi;
    rep.g_slack = rep.g_bound - rep.g;
    rep.d_slack = rep.d_bound - rep.dcomm;
    return rep;
}

SumRule sum_rule(const GroundState& gs, const RotorModel& model, const LatticeSpec& lat) {
    SumRule out;
    const SiteOperators ops = site_operators(model.cutoff, model.inertia);
    ProductSpace space(lat.volume(), model.per_site_dim());
    require(gs.vector.size() == space.dim, "sum_rule: state dimension mismatch");

    // sum over k of the x/y-averaged <s_k s_k*>: by the discrete Parseval
    // identity this equals the truncated right-hand side for ANY state.
    for (const Momentum& k : lat.momentum_grid()) {
        for (SpinAxis ax : {SpinAxis::X, SpinAxis::Y}) {
            Vector w = spin_fourier_apply(lat, model, gs.vector, k, true, ax);
            out.sum_g += 0.5 * w.squaredNorm();
        }
    }
    double s = 0.0;
    for (int x = 0; x < lat.volume(); ++x) {
        Vector tc = Vector::Zero(space.dim), ts = Vector::Zero(space.dim);
        apply_site_operator(ops.cos_op, x, space, 1.0, gs.vector, tc);
        apply_site_operator(ops.sin_op, x, space, 1.0, gs.vector, ts);
        s += tc.squaredNorm() + ts.squaredNorm();
    }
    out.rhs_truncated = 0.5 * s;
    out.ideal_rhs = 0.5 * lat.volume();
    return out;
}

SymmetryReport symmetry_report(const GroundState& gs, const SparseHamiltonian& h,
                               const RotorModel& model, const LatticeSpec& lat) {
    SymmetryReport rep;
    rep.degenerate = gs.gap < kDegeneracyScale * std::max(1.0, h.norm_estimate());
    for (const Momentum& k : lat.momentum_grid()) {
        double g[2];
        for (SpinAxis ax : {SpinAxis::X, SpinAxis::Y}) {
            Vector w = spin_fourier_apply(lat, model, gs.vector, k, false, ax);
            rep.max_mean_residual = std::max(rep.max_mean_residual, std::abs(gs.vector.dot(w)));
            g[ax == SpinAxis::X ? 0 : 1] =
                spin_fourier_apply(lat, model, gs.vector, k, true, ax).squaredNorm();
        }
        rep.max_xy_residual = std::max(rep.max_xy_residual, std::abs(g[0] - g[1]));
    }
    return rep;
}

} // namespace klss
