#include "klss/suites.hpp"

#include "klss/criterion.hpp"
#include "klss/dense.hpp"
#include "klss/rp.hpp"
#include "klss/schatten.hpp"
#include "klss/spectra.hpp"
#include "klss/vectorize.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace klss {

using nlohmann::json;

void to_json(json& j, const RunConfig& c) {
    j = json{{"suites", c.suites},
             {"d", c.d},
             {"edge", c.edge},
             {"cutoff", c.cutoff},
             {"inertia", c.inertia},
             {"coupling", c.coupling},
             {"trials", c.trials},
             {"field_trials", c.field_trials},
             {"curvature_trials", c.curvature_trials},
             {"max_dim", c.max_dim},
             {"seed", c.seed},
             {"integral_tol", c.integral_tol},
             {"tol_overrides", c.tol_overrides},
             {"out_path", c.out_path},
             {"format", c.format}};
}

void from_json(const json& j, RunConfig& c) {
    j.at("suites").get_to(c.suites);
    j.at("d").get_to(c.d);
    j.at("edge").get_to(c.edge);
    j.at("cutoff").get_to(c.cutoff);
    j.at("inertia").get_to(c.inertia);
    j.at("coupling").get_to(c.coupling);
    j.at("trials").get_to(c.trials);
    j.at("field_trials").get_to(c.field_trials);
    j.at("curvature_trials").get_to(c.curvature_trials);
    j.at("max_dim").get_to(c.max_dim);
    j.at("seed").get_to(c.seed);
    j.at("integral_tol").get_to(c.integral_tol);
    j.at("tol_overrides").get_to(c.tol_overrides);
    j.at("out_path").get_to(c.out_path);
    j.at("format").get_to(c.format);
}

std::uint64_t derived_seed(std::uint64_t master, const std::string& name) {
    std::uint64_t h = 1469598103934665603ull;
    for (char ch : name) h = (h ^ std::uint64_t(std::uint8_t(ch))) * 1099511628211ull;
    return master ^ h;
}

bool SuiteReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CheckRecord& c) { return c.status != "fail"; });
}

std::vector<std::string> SuiteReport::failing() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
        if (c.status == "fail") out.push_back(c.name);
    return out;
}

json SuiteReport::to_json() const {
    json jc = json::array();
    for (const auto& c : checks)
        jc.push_back(json{{"name", c.name},
                          {"inputs_digest", c.inputs_digest},
                          {"values", c.values},
                          {"slack", c.slack},
                          {"status", c.status}});
    return json{{"schema_version", schema_version}, {"master_seed", master_seed},
                {"effective_config", effective_config}, {"environment", environment},
                {"elapsed_seconds", elapsed_seconds}, {"checks", jc}};
}

std::string SuiteReport::momentum_csv() const {
    std::ostringstream os;
    os.precision(15);
    bool any = false;
    for (const auto& c : checks) {
        if (!c.values.contains("momentum_table")) continue;
        if (!any) {
            os << "k,g,chi,dcomm,gBound,chiBound,schwarzSlack,chiSlack,gSlack,dSlack\n";
            any = true;
        }
        for (const auto& row : c.values["momentum_table"]) {
            std::string kstr;
            for (const auto& m : row["k"]) {
                if (!kstr.empty()) kstr += ';';
                kstr += std::to_string(int(m));
            }
            os << kstr << "," << double(row["g"]) << "," << double(row["chi"]) << ","
               << double(row["dcomm"]) << "," << double(row["gBound"]) << ","
               << double(row["chiBound"]) << "," << double(row["schwarzSlack"]) << ","
               << double(row["chiSlack"]) << "," << double(row["gSlack"]) << ","
               << double(row["dSlack"]) << "\n";
        }
    }
    return any ? os.str() : std::string{};
}

namespace {

json environment_stamp() {
    json env;
#ifdef __VERSION__
    env["compiler"] = __VERSION__;
#endif
    env["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                   "." + std::to_string(EIGEN_MINOR_VERSION);
#ifdef _OPENMP
    env["omp_max_threads"] = omp_get_max_threads();
#else
    env["omp_max_threads"] = 1;
#endif
    return env;
}

std::string digest(std::initializer_list<double> xs) {
    std::uint64_t h = 1469598103934665603ull;
    for (double x : xs) {
        std::uint64_t bits;
        std::memcpy(&bits, &x, sizeof(bits));
        for (int i = 0; i < 8; ++i) h = (h ^ ((bits >> (8 * i)) & 0xff)) * 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

struct Recorder {
    std::vector<CheckRecord>& checks;

    void add(const std::string& name, const std::string& dig, json values, double slack,
             bool pass, bool flagged_only = false) {
        CheckRecord rec;
        rec.name = name;
        rec.inputs_digest = dig;
        rec.values = std::move(values);
        rec.slack = slack;
        rec.status = flagged_only ? "flagged" : (pass ? "pass" : "fail");
        checks.push_back(std::move(rec));
    }
};

void suite_kls(const RunConfig& cfg, Recorder& rec) {
    const double tol_ineq = cfg.tol("tau_ineq", kTolInequality);
    std::uint64_t seed = derived_seed(cfg.seed, "kls");
    RandomSuiteStats st = kls_random_suite(cfg.trials, cfg.max_dim, seed);
    rec.add("kls.random_min_slack", digest({double(cfg.trials), double(cfg.max_dim), double(seed)}),
            json{{"min_normalized_slack", st.min_normalized_slack},
                 {"min_trace_real", st.min_trace_real},
                 {"max_trace_imag", st.max_trace_imag}, {"trials", st.trials}, {"seed", st.seed}},
            st.min_normalized_slack,
            st.min_normalized_slack >= -tol_ineq && st.min_trace_real >= -tol_ineq &&
                st.max_trace_imag <= tol_ineq);
    rec.add("kls.equality_cases", digest({double(st.seed)}),
            json{{"max_equality_slack", st.max_equality_slack}}, st.max_equality_slack,
            st.max_equality_slack <= tol_ineq);

    Matrix c(1, 1), a(1, 1), b(1, 1);
    c << 2.0;
    a << 1.0;
    b << 1.0;
    KlsReport scalar = kls_gap(c, a, b);
    rec.add("kls.scalar_case", digest({2.0}),
            json{{"lhs", scalar.lhs}, {"rhs", scalar.rhs}}, std::abs(scalar.slack),
            scalar.lhs == 4.0 && scalar.rhs == 4.0);
}

void suite_vectorize(const RunConfig& cfg, Recorder& rec) {
    const double tol_id = cfg.tol("tau_id", kTolIdentity);
    const double tol_ineq = cfg.tol("tau_ineq", kTolInequality);
    std::uint64_t seed = derived_seed(cfg.seed, "vectorize");
    const int instances = 1000;
    double worst_identity = 0.0, worst_expect = 0.0;
    double worst_bound = std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) \
    reduction(max : worst_identity, worst_expect) reduction(min : worst_bound)
    for (int t = 0; t < instances; ++t) {
        std::uint64_t s = seed + 977 * std::uint64_t(t);
        int n = 2 + int(s % 7); // dims <= 8
        Matrix c = random_matrix(RandomKind::Ginibre, n, n, s);
        Matrix a = random_matrix(RandomKind::Ginibre, n, n, s + 1);
        Matrix b = random_matrix(RandomKind::Ginibre, n, n, s + 2);
        PairingU u{random_matrix(RandomKind::PartialIsometry, n, n, s + 3)};
        RealVector tdiag(n);
        std::mt19937_64 g2(s + 4);
        std::uniform_real_distribution<double> u01(-2.0, 2.0);
        for (int i = 0; i < n; ++i) tdiag(i) = u01(g2);

        worst_identity = std::max(worst_identity, identity_residuals(c, a, b, u, tdiag));
        worst_expect = std::max(worst_expect, expectation_identity(c, a, b).mismatch);
        IneqReport bound = rp_expectation_bound(c, a, b, u);
        worst_bound = std::min(worst_bound, bound.slack / (1.0 + bound.rhs));
    }
    rec.add("vectorize.identities", digest({double(seed), double(instances)}),
            json{{"max_residual", worst_identity}, {"instances", instances}}, worst_identity,
            worst_identity <= tol_id);
    rec.add("vectorize.expectation_identity", digest({double(seed)}),
            json{{"max_mismatch", worst_expect}}, worst_expect, worst_expect <= tol_id);
    rec.add("vectorize.rp_expectation_bound", digest({double(seed)}),
            json{{"min_normalized_slack", worst_bound}}, worst_bound, worst_bound >= -tol_ineq);
}

TruncatedOperator ladder_family() {
    TruncatedOperator op;
    // full-rank Hilbert-Schmidt family: phases on top of the product profile
    op.coeff = [](int alpha, int beta) {
        double r = 1.0 / (double(alpha + 1) * double(beta + 1));
        return std::polar(r, 0.3 * double(alpha) * double(beta));
    };
    // |coeff|^2 factorizes; S_inf = pi^2/6 bounds the per-axis l2 mass
    op.tail_bound = [](int size) {
        double s_inf = std::numbers::pi * std::numbers::pi / 6.0;
        double s = 0.0;
        for (int i = 1; i <= size; ++i) s += 1.0 / (double(i) * double(i));
        return std::sqrt(std::max(0.0, s_inf * s_inf - s * s));
    };
    return op;
}

void suite_ladder(const RunConfig& cfg, Recorder& rec) {
    const double tol = cfg.tol("tau_ladder", 1e-10);
    auto shift = [](int s) {
        Matrix m = Matrix::Zero(s, s);
        for (int i = 0; i + 1 < s; ++i) m(i + 1, i) = 1.0;
        return m;
    };
    auto identity = [](int s) { return Matrix(Matrix::Identity(s, s)); };
    std::vector<int> sizes{8, 16, 32, 64};

    auto rungs = truncation_ladder(ladder_family(), shift, shift, sizes, 1.0, 1.0);
    double min_slack = std::numeric_limits<double>::infinity();
    double worst_excess = -std::numeric_limits<double>::infinity();
    json table = json::array();
    for (std::size_t i = 0; i < rungs.size(); ++i) {
        const auto& r = rungs[i];
        min_slack = std::min(min_slack, r.report.slack);
        if (i > 0) {
            worst_excess = std::max(worst_excess,
                                    std::max(r.lhs_increment, r.rhs_increment) - r.increment_bound);
        }
        table.push_back(json{{"size", r.size}, {"lhs", r.report.lhs}, {"rhs", r.report.rhs},
                             {"slack", r.report.slack}, {"tail", r.tail},
                             {"lhs_increment", r.lhs_increment},
                             {"increment_bound", r.increment_bound}});
    }
    rec.add("ladder.slack", digest({64.0}), json{{"rungs", table}}, min_slack, min_slack >= -tol);
    rec.add("ladder.cauchy_increments", digest({64.0}), json{{"worst_excess", worst_excess}},
            -worst_excess, worst_excess <= 0.0);

    auto eq = truncation_ladder(ladder_family(), identity, identity, sizes, 1.0, 1.0);
    double max_abs = 0.0;
    for (const auto& r : eq) max_abs = std::max(max_abs, std::abs(r.report.slack));
    rec.add("ladder.identity_equality", digest({64.0}), json{{"max_abs_slack", max_abs}}, max_abs,
            max_abs <= tol);
}

void suite_rotor(const RunConfig& cfg, Recorder& rec) {
    const double tol_obs = cfg.tol("tau_obs", kTolObservable);
    const double tol_chi = cfg.tol("tau_chi", kTolChi);
    RotorModel model{cfg.inertia, cfg.coupling, cfg.cutoff};
    require(cfg.edge % 2 == 0 && cfg.edge >= 2, "rotor suite: edge (2N) must be even");
    LatticeSpec lat = build_lattice(cfg.d, cfg.edge / 2);
    SparseHamiltonian h = assemble_hamiltonian(model, lat, PerturbField::zero(lat.volume()));
    std::string dig = digest({double(cfg.d), double(cfg.edge), double(cfg.cutoff), cfg.inertia,
                              cfg.coupling});

    rec.add("rotor.hermitian_storage", dig, json{{"dim", h.dim}}, 0.0, h.stored_hermitian());

    GroundState gs = ground_state(h, derived_seed(cfg.seed, "rotor"));
    rec.add("rotor.ground_state", dig,
            json{{"energy", gs.energy}, {"gap", gs.gap}, {"residual", gs.residual},
                 {"constant_offset", h.constant_offset}, {"doubled_bonds", lat.doubled_bonds}},
            gs.gap, gs.residual <= 1e-9 * std::max(1.0, h.norm_estimate()));

    SumRule sr = sum_rule(gs, model, lat);
    rec.add("rotor.sum_rule", dig,
            json{{"sum_g", sr.sum_g}, {"rhs_truncated", sr.rhs_truncated},
                 {"ideal_rhs", sr.ideal_rhs}, {"deficit", sr.ideal_rhs - sr.sum_g}},
            std::abs(sr.sum_g - sr.rhs_truncated),
            std::abs(sr.sum_g - sr.rhs_truncated) <= cfg.tol("tau_sumrule", 1e-10));

    SymmetryReport sym = symmetry_report(gs, h, model, lat);
    rec.add("rotor.symmetry", dig,
            json{{"max_mean_residual", sym.max_mean_residual},
                 {"max_xy_residual", sym.max_xy_residual}, {"degenerate", sym.degenerate}},
            std::max(sym.max_mean_residual, sym.max_xy_residual),
            std::max(sym.max_mean_residual, sym.max_xy_residual) <= cfg.tol("tau_sym", 1e-10),
            sym.degenerate);

    DenseSpectrum spectrum;
    const bool dense_ok = h.dim <= kDenseSolveLimit;
    if (dense_ok) spectrum = dense_spectrum(h);

    json table = json::array();
    const double inf = std::numeric_limits<double>::infinity();
    double min_schwarz = inf, min_d = inf, min_chi = inf, min_g = inf;
    double worst_chi_rel = 0.0, worst_sin2 = 0.0;
    for (const Momentum& k : lat.momentum_grid()) {
        MomentumReport m =
            momentum_observables(gs, h, model, lat, k, dense_ok ? &spectrum : nullptr);
        min_schwarz = std::min(min_schwarz, m.schwarz_slack);
        min_d = std::min(min_d, m.d_slack);
        if (!k.is_zero()) {
            min_chi = std::min(min_chi, m.chi_slack);
            min_g = std::min(min_g, m.g_slack);
        }
        if (m.chi_spectral)
            worst_chi_rel = std::max(worst_chi_rel,
                                     std::abs(*m.chi_spectral - m.chi) / (1.0 + std::abs(m.chi)));
        worst_sin2 = std::max(worst_sin2, std::abs(m.dcomm - m.dcomm_sin2));
        table.push_back(json{{"k", m.k.m}, {"g", m.g}, {"g_def", m.g_def},
                             {"n0_weight", m.n0_weight}, {"chi", m.chi}, {"dcomm", m.dcomm},
                             {"dcomm_sin2", m.dcomm_sin2}, {"gBound", m.g_bound},
                             {"chiBound", m.chi_bound}, {"schwarzSlack", m.schwarz_slack},
                             {"chiSlack", m.chi_slack}, {"gSlack", m.g_slack},
                             {"dSlack", m.d_slack}});
    }
    rec.add("rotor.momentum_observables", dig, json{{"momentum_table", table}},
            std::min({min_schwarz, min_d}), min_schwarz >= -tol_obs && min_d >= -tol_obs,
            sym.degenerate);
    rec.add("rotor.momentum_bounds", dig,
            json{{"min_chi_slack", min_chi}, {"min_g_slack", min_g}}, std::min(min_chi, min_g),
            min_chi >= -tol_obs && min_g >= -tol_obs, sym.degenerate);
    if (dense_ok)
        rec.add("rotor.chi_cross_check", dig, json{{"worst_rel_dev", worst_chi_rel}},
                worst_chi_rel, worst_chi_rel <= tol_chi);
    // truncated double commutator vs the untruncated sin^2 reduction: the gap
    // is a band-edge effect that shrinks with the cutoff; diagnostic only
    rec.add("rotor.dcomm_sin2_reduction", dig, json{{"worst_abs_dev", worst_sin2}}, worst_sin2,
            true, true);
}

void suite_rp(const RunConfig& cfg, Recorder& rec) {
    const double tol_en = cfg.tol("tau_en", kTolEnergy);
    const double tol_match = cfg.tol("tau_match", kTolMatch);
    const double tol_curv = cfg.tol("tau_curv", kTolCurvature);
    RotorModel model{cfg.inertia, cfg.coupling, cfg.cutoff};
    LatticeSpec lat = build_lattice(cfg.d, cfg.edge / 2);
    std::string dig = digest({double(cfg.d), double(cfg.edge), double(cfg.cutoff), cfg.inertia,
                              cfg.coupling, double(cfg.field_trials)});
    std::uint64_t seed = derived_seed(cfg.seed, "rp");

    auto random_field = [&](std::uint64_t s) {
        std::mt19937_64 gen(s);
        std::normal_distribution<double> n01(0.0, 1.0);
        PerturbField b = PerturbField::zero(lat.volume());
        for (cxd& v : b.values) v = cxd(n01(gen), n01(gen));
        return b;
    };

    double e0 = ground_energy(assemble_hamiltonian(model, lat, PerturbField::zero(lat.volume())));
    double min_mono = std::numeric_limits<double>::infinity();
    double min_bond = min_mono;
    bool descent_ok = true;
#pragma omp parallel for schedule(dynamic) reduction(min : min_mono, min_bond) \
    reduction(&& : descent_ok)
    for (std::int64_t t = 0; t < cfg.field_trials; ++t) {
        PerturbField b = random_field(seed + 31 * std::uint64_t(t));
        RpSlacks s = rp_inequalities(model, lat, b);
        min_mono = std::min(min_mono, s.monotone_slack);
        min_bond = std::min(min_bond, s.bond_slack);
        if (s.non_zero_bonds > 0)
            descent_ok = descent_ok &&
                         (s.non_zero_bonds_l + s.non_zero_bonds_r <= 2 * s.non_zero_bonds - 1);
    }
    double scale = 1.0 + std::abs(e0);
    rec.add("rp.energy_inequalities", dig,
            json{{"min_monotone_slack", min_mono}, {"min_bond_slack", min_bond},
                 {"trials", cfg.field_trials}, {"e0", e0}},
            std::min(min_mono, min_bond),
            min_mono >= -tol_en * scale && min_bond >= -tol_en * scale);
    rec.add("rp.nonzero_bond_descent", dig, json{{"ok", descent_ok}}, 0.0, descent_ok);

    // mirror-symmetric field: both reflections reproduce b, bond slack is 0
    {
        PerturbField b = random_field(seed + 7777);
        for (int s = 0; s < lat.volume(); ++s)
            if (!lat.left_mask[s]) b.values[s] = b.values[lat.mirror[s]];
        ReflectedFields refl = reflect_field(b, lat);
        bool fixed_point = refl.b_l.values == b.values && refl.b_r.values == b.values;
        SparseHamiltonian hb = assemble_hamiltonian(model, lat, b);
        SparseHamiltonian hl = assemble_hamiltonian(model, lat, refl.b_l);
        rec.add("rp.mirror_fixed_point", dig, json{{"fixed_point", fixed_point}}, 0.0,
                fixed_point && hb.same_data(hl));
    }

    // a constant shift only reenters through b_x - b_y, so the assembled
    // operators agree to the rounding of the shifted differences
    {
        PerturbField b = random_field(seed + 8888);
        PerturbField shifted = b;
        for (cxd& v : shifted.values) v += cxd(0.7, -0.3);
        SparseHamiltonian hb = assemble_hamiltonian(model, lat, b);
        SparseHamiltonian hs = assemble_hamiltonian(model, lat, shifted);
        double dev = hb.probe_deviation(hs);
        double e_b = ground_energy(hb), e_s = ground_energy(hs);
        double scale_h = std::max(1.0, hb.norm_estimate());
        rec.add("rp.constant_shift_invariance", dig,
                json{{"operator_dev", dev}, {"e0_dev", std::abs(e_b - e_s)}},
                std::abs(e_b - e_s),
                dev <= 1e-13 * scale_h && std::abs(e_b - e_s) <= 1e-12 * (1.0 + std::abs(e_b)));
    }

    double worst_match = 0.0, min_curv = std::numeric_limits<double>::infinity();
    bool stencils_ok = true;
#pragma omp parallel for schedule(dynamic) reduction(max : worst_match) \
    reduction(min : min_curv) reduction(&& : stencils_ok)
    for (std::int64_t t = 0; t < cfg.curvature_trials; ++t) {
        PerturbField b = random_field(seed + 131 * std::uint64_t(t) + 5);
        CurvatureReport c = curvature_check(model, lat, b);
        worst_match = std::max(worst_match, std::abs(c.fd_second - c.pt_second) /
                                                (1.0 + std::abs(c.pt_second)));
        min_curv = std::min(min_curv, std::min(c.fd_second, c.pt_second));
        stencils_ok = stencils_ok && c.stencil_consistent;
    }
    rec.add("rp.curvature_cross_check", dig,
            json{{"worst_rel_mismatch", worst_match}, {"min_second_derivative", min_curv},
                 {"trials", cfg.curvature_trials}, {"stencils_consistent", stencils_ok}},
            std::min(min_curv, tol_match - worst_match),
            worst_match <= tol_match && min_curv >= -tol_curv && stencils_ok);

    // plane-wave probe at the first nonzero grid momentum
    {
        Momentum k;
        k.m.assign(cfg.d, 0);
        k.m[0] = 1;
        ProbeReport p = plane_wave_probe(model, lat, k);
        rec.add("rp.plane_wave_probe", dig,
                json{{"c_direct", p.c_direct}, {"j_epsilon", p.j_epsilon},
                     {"assembled_shift_dev", p.assembled_shift_dev}, {"chi", p.chi},
                     {"chi_slack", p.chi_slack}, {"g_slack", p.g_slack}},
                std::min(p.chi_slack, p.g_slack),
                std::abs(p.c_direct - p.j_epsilon) <= 1e-12 * (1.0 + p.j_epsilon) &&
                    p.assembled_shift_dev <= 1e-12 &&
                    p.chi_slack >= -kTolObservable && p.g_slack >= -kTolObservable);
    }
}

void suite_criterion(const RunConfig& cfg, Recorder& rec) {
    IntegralResult i2 = integral_Id(2, cfg.integral_tol);
    rec.add("criterion.integral_d2", digest({2.0, cfg.integral_tol}),
            json{{"value", i2.value}, {"error_estimate", i2.error_estimate},
                 {"trace", i2.refinement_trace}},
            1e-4 - std::abs(i2.value - 0.909173), std::abs(i2.value - 0.909173) <= 1e-4);
    IntegralResult i3 = integral_Id(3, std::max(cfg.integral_tol, 1e-4));
    rec.add("criterion.integral_d3", digest({3.0}),
            json{{"value", i3.value}, {"error_estimate", i3.error_estimate}},
            1e-3 - std::abs(i3.value - 0.643954), std::abs(i3.value - 0.643954) <= 1e-3);
    IntegralResult i1 = integral_Id(1, cfg.integral_tol);
    rec.add("criterion.integral_d1_diverges", digest({1.0}),
            json{{"diverged", i1.diverged}, {"last_value", i1.value}}, 0.0, i1.diverged);

    json conv = json::array();
    double dev32 = 0.0;
    for (int n : {4, 8, 16, 32}) {
        double s = finite_mode_sum(2, n);
        conv.push_back(json{{"N", n}, {"sum", s}, {"integral_minus_sum", i2.value - s}});
        if (n == 32) dev32 = std::abs(i2.value - s);
    }
    rec.add("criterion.mode_sum_convergence", digest({32.0}),
            json{{"trace", conv}, {"dev_at_32", dev32}}, 0.02 - dev32, dev32 <= 0.02);

    LroVerdict v = lro_verdict(1.0, 1.0, 2, std::nullopt, cfg.integral_tol);
    rec.add("criterion.verdict_d2_unit", digest({1.0, 1.0}),
            json{{"holds", v.criterion_holds}, {"lower_bound_c", v.lower_bound_c}},
            v.lower_bound_c, v.criterion_holds && std::abs(v.lower_bound_c - 0.0454135) < 5e-4);
    LroVerdict vf = lro_verdict(0.5, 0.5, 2, std::nullopt, cfg.integral_tol);
    rec.add("criterion.verdict_d2_small", digest({0.5, 0.5}), json{{"holds", vf.criterion_holds}},
            0.0, !vf.criterion_holds);

    bool monotone = true;
    bool prev = false;
    json scan = json::array();
    for (double ij : {0.25, 0.64, 1.0, 2.25, 4.0}) {
        LroVerdict s = lro_verdict(std::sqrt(ij), std::sqrt(ij), 2, std::nullopt, cfg.integral_tol);
        if (prev && !s.criterion_holds) monotone = false;
        prev = s.criterion_holds;
        scan.push_back(json{{"IJ", ij}, {"holds", s.criterion_holds}});
    }
    rec.add("criterion.verdict_monotone", digest({5.0}), json{{"scan", scan}}, 0.0, monotone);
}

} // namespace

SuiteReport run_suite(const RunConfig& config) {
    static const std::vector<std::string> order{"kls", "vectorize", "ladder",
                                                "rotor", "rp", "criterion"};
    for (const auto& s : config.suites)
        require(std::find(order.begin(), order.end(), s) != order.end(),
                "run_suite: unknown suite '" + s + "'");

    SuiteReport report;
    report.master_seed = config.seed;
    report.effective_config = config;
    report.environment = environment_stamp();
    Recorder rec{report.checks};

    auto t0 = std::chrono::steady_clock::now();
    for (const auto& name : order) {
        if (std::find(config.suites.begin(), config.suites.end(), name) == config.suites.end())
            continue;
        if (name == "kls") suite_kls(config, rec);
        else if (name == "vectorize") suite_vectorize(config, rec);
        else if (name == "ladder") suite_ladder(config, rec);
        else if (name == "rotor") suite_rotor(config, rec);
        else if (name == "rp") suite_rp(config, rec);
        else if (name == "criterion") suite_criterion(config, rec);
    }
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

void write_report(const SuiteReport& report, const RunConfig& config) {
    if (config.out_path.empty()) return;
    if (config.format == "csv") {
        std::ofstream os(config.out_path);
        require(bool(os), "cannot open output file " + config.out_path);
        os << "# schema_version=" << report.schema_version << " master_seed="
           << report.master_seed << "\n";
        os << "name,status,slack,inputs_digest\n";
        for (const auto& c : report.checks)
            os << c.name << "," << c.status << "," << c.slack << "," << c.inputs_digest << "\n";
        std::string mom = report.momentum_csv();
        if (!mom.empty()) {
            std::ofstream ms(config.out_path + ".momentum.csv");
            ms << mom;
        }
        return;
    }
    std::ofstream os(config.out_path);
    require(bool(os), "cannot open output file " + config.out_path);
    os << report.to_json().dump(2) << "\n";
}

} // namespace klss
