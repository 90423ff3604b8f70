#include "klss/schatten.hpp"
#include "klss/dense.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace klss {

PolarParts polar_decompose(const Matrix& c) {
    require(c.rows() > 0 && c.cols() > 0, "polar_decompose: empty matrix");
    require_finite(c, "c");
    Eigen::JacobiSVD<Matrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    RealVector sigma = svd.singularValues().cwiseMax(0.0);
    const int r = int(sigma.size());

    // Singular directions below the noise floor are treated as null space:
    // u annihilates them, so u*u is the projection onto range(|c|).
    const double cut = sigma.size() > 0 ? sigma(0) * 1e-14 : 0.0;
    RealVector mask = RealVector::Zero(r);
    for (int i = 0; i < r; ++i) mask(i) = sigma(i) > cut ? 1.0 : 0.0;

    PolarParts p;
    const Matrix& w = svd.matrixU();
    const Matrix& v = svd.matrixV();
    p.u = w.leftCols(r) * mask.asDiagonal() * v.leftCols(r).adjoint();
    p.mod_l = v.leftCols(r) * sigma.asDiagonal() * v.leftCols(r).adjoint();
    p.mod_r = w.leftCols(r) * sigma.asDiagonal() * w.leftCols(r).adjoint();
    return p;
}

KlsReport kls_gap(const Matrix& c, const Matrix& a, const Matrix& b) {
    require(a.rows() == a.cols() && a.rows() == c.cols(),
            "kls_gap: A must be square with dim = cols(c)");
    require(b.rows() == b.cols() && b.rows() == c.rows(),
            "kls_gap: B must be square with dim = rows(c)");
    require_finite(c, "c");
    require_finite(a, "A");
    require_finite(b, "B");

    PolarParts p = polar_decompose(c);
    cxd t_lhs = (c.adjoint() * b * c * a.adjoint()).trace();
    cxd t_a = (p.mod_l * a * p.mod_l * a.adjoint()).trace();
    cxd t_b = (p.mod_r * b * p.mod_r * b.adjoint()).trace();

    KlsReport rep;
    rep.lhs = std::abs(t_lhs);
    rep.rhs = 0.5 * (t_a.real() + t_b.real());
    rep.slack = rep.rhs - rep.lhs;
    rep.rhs_trace_a = t_a.real();
    rep.rhs_trace_b = t_b.real();
    rep.max_trace_imag = std::max(std::abs(t_a.imag()), std::abs(t_b.imag()));
    return rep;
}

std::vector<LadderRung> truncation_ladder(const TruncatedOperator& op,
                                          const std::function<Matrix(int)>& a_rule,
                                          const std::function<Matrix(int)>& b_rule,
                                          const std::vector<int>& sizes,
                                          double norm_a, double norm_b) {
    require(!sizes.empty(), "truncation_ladder: no sizes");
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i)
        require(sizes[i] < sizes[i + 1], "truncation_ladder: sizes must be ascending");
    require(sizes.front() >= 1, "truncation_ladder: sizes must be positive");

    std::vector<LadderRung> rungs;
    rungs.reserve(sizes.size());
    for (int s : sizes) {
        Matrix c(s, s);
        for (int beta = 0; beta < s; ++beta)
            for (int alpha = 0; alpha < s; ++alpha) c(beta, alpha) = op.coeff(alpha, beta);
        Matrix a = a_rule(s);
        Matrix bm = b_rule(s);
        require(a.rows() == s && a.cols() == s, "truncation_ladder: A_rule size mismatch");
        require(bm.rows() == s && bm.cols() == s, "truncation_ladder: B_rule size mismatch");

        LadderRung rung;
        rung.size = s;
        rung.report = kls_gap(c, a, bm);
        rung.tail = op.tail_bound(s);
        rung.hs_norm = c.norm();
        if (!rungs.empty()) {
            const LadderRung& prev = rungs.back();
            rung.lhs_increment = std::abs(rung.report.lhs - prev.report.lhs);
            rung.rhs_increment = std::abs(rung.report.rhs - prev.report.rhs);
            // A size-s' trace evaluated on the zero-padded size-s truncation
            // equals the size-s trace (nested blocks), so the increment is
            // controlled by the l2 mass missing at the previous size.
            rung.increment_bound =
                norm_a * norm_b * (rung.hs_norm + prev.hs_norm) * prev.tail;
        }
        rungs.push_back(std::move(rung));
    }
    return rungs;
}

RandomSuiteStats kls_random_suite(std::int64_t trials, int max_dim, std::uint64_t seed) {
    require(trials >= 1, "kls_random_suite: trials must be >= 1");
    require(max_dim >= 1, "kls_random_suite: max_dim must be >= 1");

    RandomSuiteStats stats;
    stats.trials = trials;
    stats.seed = seed;
    double min_slack = std::numeric_limits<double>::infinity();
    double min_trace = std::numeric_limits<double>::infinity();
    double max_imag = 0.0;
    double max_eq = 0.0;

#pragma omp parallel for schedule(static) reduction(min : min_slack, min_trace) \
    reduction(max : max_imag, max_eq)
    for (std::int64_t t = 0; t < trials; ++t) {
        std::uint64_t s = seed + std::uint64_t(t) * 0x100000001b3ull;
        // alternate square and rectangular triples
        int n = 1 + int(s % std::uint64_t(max_dim));
        int m = (t % 2 == 0) ? n : 1 + int((s >> 17) % std::uint64_t(std::max(1, 3 * max_dim / 4)));
        Matrix c = random_matrix(RandomKind::Ginibre, n, m, s);
        Matrix a = random_matrix(RandomKind::Ginibre, m, m, s + 1);
        Matrix b = random_matrix(RandomKind::Ginibre, n, n, s + 2);
        KlsReport rep = kls_gap(c, a, b);
        min_slack = std::min(min_slack, rep.slack / (1.0 + rep.rhs));
        min_trace = std::min(min_trace, std::min(rep.rhs_trace_a, rep.rhs_trace_b) /
                                            (1.0 + rep.rhs));
        max_imag = std::max(max_imag, rep.max_trace_imag);

        // Schwarz equality: unitary c with A the conjugation of B by c.
        Matrix cu = random_matrix(RandomKind::PartialIsometry, n, n, s + 3);
        Matrix aeq = cu.adjoint() * b * cu;
        KlsReport eq = kls_gap(cu, aeq, b);
        max_eq = std::max(max_eq, std::abs(eq.slack) / (1.0 + eq.rhs));
    }
    stats.min_normalized_slack = min_slack;
    stats.min_trace_real = min_trace;
    stats.max_trace_imag = max_imag;
    stats.max_equality_slack = max_eq;
    return stats;
}

} // namespace klss
