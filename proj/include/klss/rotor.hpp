#pragma once

#include "klss/lattice.hpp"
#include "klss/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace klss {

struct RotorModel {
    double inertia = 1.0;  // I > 0
    double coupling = 1.0; // J >= 0 (ferromagnetic)
    int cutoff = 1;        // M: per-site basis e^{i n phi}, |n| <= M

    int per_site_dim() const { return 2 * cutoff + 1; }
};

/// Per-site operators in the angular momentum basis |n>, n = -M..M.
/// cos and sin are the truncations of the multiplication operators,
/// one-banded; kinetic n^2/(2I) stays diagonal, so the truncation preserves
/// rotation symmetry exactly.
struct SiteOperators {
    RealVector kinetic; // diagonal
    Matrix cos_op;
    Matrix sin_op;
};

SiteOperators site_operators(int cutoff, double inertia);

/// Complex field b_x on the lattice sites.
struct PerturbField {
    std::vector<cxd> values;

    static PerturbField zero(int n_sites) { return PerturbField{std::vector<cxd>(n_sites, cxd{})}; }
};

/// Indexing of the (2M+1)^|Lambda| product basis; site 0 owns the most
/// significant digit, matching the lexicographic site order.
struct ProductSpace {
    int n_sites = 0;
    int per_site = 0;
    std::int64_t dim = 0;
    std::vector<std::int64_t> strides;

    ProductSpace() = default;
    ProductSpace(int sites, int p);
    int digit(std::int64_t state, int site) const {
        return int((state / strides[site]) % per_site);
    }
};

/// Hermitian CSR matrix on the truncated rotor product space. Stored entries
/// are exactly conjugate-symmetric by construction of the assembly.
struct SparseHamiltonian {
    std::int64_t dim = 0;
    std::vector<std::int64_t> row_ptr;
    std::vector<std::int32_t> col;
    std::vector<cxd> val;
    double constant_offset = 0.0; // J * |bonds|, relates V to the -J cos(dphi) form

    void apply(const Vector& x, Vector& y) const;        // OpenMP over rows
    void apply_serial(const Vector& x, Vector& y) const; // reference kernel
    Vector apply(const Vector& x) const;
    double norm_estimate() const; // max row l1 norm
    Matrix dense() const;
    bool stored_hermitian() const; // bitwise check val(r,c) == conj(val(c,r))
    bool same_data(const SparseHamiltonian& other) const;
    /// sup norm of (*this - other) on a few seeded probe vectors; measures
    /// operator equality without forming dense matrices.
    double probe_deviation(const SparseHamiltonian& other, int probes = 3) const;
};

/// H(b) = sum_x kinetic_x
///      + (J/2) sum_<xy> [ |cos_x - b_x - cos_y + b_y|^2 + (sin_x - sin_y)^2 ],
/// expanded into one-site, two-site and scalar terms. b = 0 gives the
/// sum-of-squares potential V, i.e. the -J cos coupling plus constant_offset.
SparseHamiltonian assemble_hamiltonian(const RotorModel& model, const LatticeSpec& lat,
                                       const PerturbField& b);

/// H'(b) = -J sum_<xy> Re(b_x - b_y)(cos_x - cos_y): the term linear in b,
/// so that H(lambda b) = H(0) + lambda H'(b) + lambda^2 C(b).
SparseHamiltonian assemble_hprime(const RotorModel& model, const LatticeSpec& lat,
                                  const PerturbField& b);

/// C(b) = (J/2) sum_<xy> |b_x - b_y|^2 (a scalar).
double c_of_b(const RotorModel& model, const LatticeSpec& lat, const PerturbField& b);

struct ReflectedFields {
    PerturbField b_l; // b on Lambda_L, mirror-extended to Lambda_R
    PerturbField b_r;
    std::int64_t non_zero_bonds = 0;   // bonds of b with b_x != b_y
    std::int64_t non_zero_bonds_l = 0;
    std::int64_t non_zero_bonds_r = 0;
};

ReflectedFields reflect_field(const PerturbField& b, const LatticeSpec& lat);

/// Gather-form application of a one-site operator: out += scale * op_x(in).
/// Race-free per output index, safe to call from parallel loops over rows.
void apply_site_operator(const Matrix& op, int site, const ProductSpace& space, cxd scale,
                         const Vector& in, Vector& out);

/// Coordinate text format, one "row col re im" line per stored entry.
void export_coordinate(const SparseHamiltonian& h, std::ostream& os);

} // namespace klss
