#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace klss {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Convergence failures of iterative solvers and quadratures. Callers that
/// need a process exit code map this to "numerical failure".
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

/// All carrier matrices must be finite; NaN/Inf would silently poison traces.
inline void require_finite(const Matrix& m, const char* name) {
    if (!m.allFinite()) throw std::invalid_argument(std::string(name) + ": non-finite entries");
}

} // namespace klss
