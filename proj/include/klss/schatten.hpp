#pragma once

#include "klss/types.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace klss {

// Default tolerances; double-precision SVD backward error sets the scale.
constexpr double kTolReconstruct = 1e-12;  // relative, polar identities
constexpr double kTolInequality = 1e-10;   // scaled by (1 + rhs)
constexpr double kTolEigen = 1e-12;

/// c = u |c| = |c*| u with u a partial isometry (null singular directions
/// map to zero, so u*u projects onto range(|c|)).
struct PolarParts {
    Matrix u;     // rows x cols of c
    Matrix mod_l; // |c|  = sqrt(c* c), cols x cols, Hermitian PSD
    Matrix mod_r; // |c*| = sqrt(c c*), rows x rows, Hermitian PSD
};

PolarParts polar_decompose(const Matrix& c);

struct IneqReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0; // rhs - lhs
};

/// Two-sided evaluation of |Tr c* B c A*| <= (Tr |c| A |c| A* + Tr |c*| B |c*| B*)/2
/// for c n x m, A m x m, B n x n. Both right-hand traces are squared
/// Hilbert-Schmidt norms, so they come out real and nonnegative up to
/// rounding; their values and the largest imaginary part are recorded.
struct KlsReport : IneqReport {
    double rhs_trace_a = 0.0; // Tr |c| A |c| A*
    double rhs_trace_b = 0.0; // Tr |c*| B |c*| B*
    double max_trace_imag = 0.0;
};

KlsReport kls_gap(const Matrix& c, const Matrix& a, const Matrix& b);

/// Hilbert-Schmidt operator given by a coefficient rule <beta|c|alpha> plus a
/// tail rule bounding the l2 mass of all coefficients outside the leading
/// size x size block.
struct TruncatedOperator {
    std::function<cxd(int alpha, int beta)> coeff;
    std::function<double(int size)> tail_bound;
};

struct LadderRung {
    int size = 0;
    KlsReport report;
    double tail = 0.0;          // tail_bound at this size
    double hs_norm = 0.0;       // ||c_size||_2
    double lhs_increment = 0.0; // vs previous rung (0 on the first)
    double rhs_increment = 0.0;
    double increment_bound = 0.0; // normA*normB*(||c_s||+||c_prev||)*tail(prev)
};

/// Evaluates the inequality on nested truncations of (c, A, B). A_rule and
/// B_rule must produce the leading blocks of fixed bounded operators with
/// operator norms at most norm_a, norm_b; the increment bound then certifies
/// Cauchy convergence of both sides from the tail rule alone.
std::vector<LadderRung> truncation_ladder(const TruncatedOperator& op,
                                          const std::function<Matrix(int)>& a_rule,
                                          const std::function<Matrix(int)>& b_rule,
                                          const std::vector<int>& sizes,
                                          double norm_a, double norm_b);

struct RandomSuiteStats {
    std::int64_t trials = 0;
    double min_normalized_slack = 0.0; // min over trials of slack/(1+rhs)
    double min_trace_real = 0.0;       // most negative normalized rhs trace
    double max_trace_imag = 0.0;
    double max_equality_slack = 0.0;   // constructed Schwarz-equality cases
    std::uint64_t seed = 0;
};

/// Randomized two-sided check over Ginibre triples (square and rectangular,
/// dims <= max_dim) plus per-trial constructed equality cases. Trials run in
/// parallel with per-trial generators; aggregation is order independent.
RandomSuiteStats kls_random_suite(std::int64_t trials, int max_dim, std::uint64_t seed);

} // namespace klss
