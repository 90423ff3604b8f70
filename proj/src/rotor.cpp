#include "klss/rotor.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace klss {

SiteOperators site_operators(int cutoff, double inertia) {
    require(cutoff >= 1, "site_operators: cutoff M >= 1");
    require(inertia > 0.0, "site_operators: inertia I > 0");
    const int p = 2 * cutoff + 1;
    SiteOperators ops;
    ops.kinetic.resize(p);
    for (int j = 0; j < p; ++j) {
        double n = j - cutoff;
        ops.kinetic(j) = n * n / (2.0 * inertia);
    }
    Matrix sp = Matrix::Zero(p, p); // S+ |n> = |n+1>, truncated at |n| = M
    for (int j = 0; j + 1 < p; ++j) sp(j + 1, j) = 1.0;
    ops.cos_op = 0.5 * (sp + Matrix(sp.adjoint()));
    ops.sin_op = (sp - Matrix(sp.adjoint())) / cxd(0.0, 2.0);
    return ops;
}

ProductSpace::ProductSpace(int sites, int p) : n_sites(sites), per_site(p) {
    strides.resize(sites);
    std::int64_t s = 1;
    for (int i = sites - 1; i >= 0; --i) {
        strides[i] = s;
        s *= p;
    }
    dim = s;
}

void SparseHamiltonian::apply_serial(const Vector& x, Vector& y) const {
    y.resize(dim);
    for (std::int64_t r = 0; r < dim; ++r) {
        cxd acc = 0.0;
        for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += val[k] * x(col[k]);
        y(r) = acc;
    }
}

void SparseHamiltonian::apply(const Vector& x, Vector& y) const {
    y.resize(dim);
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < dim; ++r) {
        cxd acc = 0.0;
        for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) acc += val[k] * x(col[k]);
        y(r) = acc;
    }
}

Vector SparseHamiltonian::apply(const Vector& x) const {
    Vector y;
    apply(x, y);
    return y;
}

double SparseHamiltonian::norm_estimate() const {
    double best = 0.0;
    for (std::int64_t r = 0; r < dim; ++r) {
        double row = 0.0;
        for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) row += std::abs(val[k]);
        best = std::max(best, row);
    }
    return best;
}

Matrix SparseHamiltonian::dense() const {
    Matrix m = Matrix::Zero(dim, dim);
    for (std::int64_t r = 0; r < dim; ++r)
        for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) m(r, col[k]) += val[k];
    return m;
}

bool SparseHamiltonian::stored_hermitian() const {
    for (std::int64_t r = 0; r < dim; ++r) {
        for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
            std::int64_t c = col[k];
            // binary search for (c, r)
            auto lo = col.begin() + row_ptr[c];
            auto hi = col.begin() + row_ptr[c + 1];
            auto it = std::lower_bound(lo, hi, std::int32_t(r));
            if (it == hi || *it != r) return false;
            cxd mirror = val[it - col.begin()];
            if (val[k].real() != mirror.real() || val[k].imag() != -mirror.imag()) return false;
        }
    }
    return true;
}

bool SparseHamiltonian::same_data(const SparseHamiltonian& other) const {
    return dim == other.dim && row_ptr == other.row_ptr && col == other.col && val == other.val &&
           constant_offset == other.constant_offset;
}

double SparseHamiltonian::probe_deviation(const SparseHamiltonian& other, int probes) const {
    require(dim == other.dim, "probe_deviation: dimension mismatch");
    double dev = 0.0;
    std::uint64_t lcg = 0x9e3779b97f4a7c15ull;
    for (int p = 0; p < probes; ++p) {
        Vector v(dim);
        for (std::int64_t i = 0; i < dim; ++i) {
            lcg = lcg * 6364136223846793005ull + 1442695040888963407ull;
            v(i) = cxd(double(lcg >> 40) / double(1 << 24) - 0.5,
                       double((lcg >> 16) & 0xffffff) / double(1 << 24) - 0.5);
        }
        v.normalize();
        Vector r = apply(v) - other.apply(v);
        dev = std::max(dev, r.cwiseAbs().maxCoeff());
    }
    return dev;
}

namespace {

struct OneSiteTerm {
    int site;
    Matrix op;
};

struct TwoSiteTerm {
    int site_a, site_b;
    Matrix op_a, op_b;
    double coeff;
};

/// Column-by-column assembly. Per (row, col) pair the contributing terms are
/// visited in the same order as for (col, row), so the stored matrix is
/// conjugate-symmetric bitwise.
SparseHamiltonian assemble(const ProductSpace& space, double scalar,
                           const std::vector<OneSiteTerm>& ones,
                           const std::vector<TwoSiteTerm>& twos) {
    const int p = space.per_site;
    SparseHamiltonian h;
    h.dim = space.dim;
    h.row_ptr.assign(space.dim + 1, 0);

    struct Entry {
        std::int64_t row;
        cxd v;
    };
    std::vector<std::vector<Entry>> cols(space.dim);

    for (std::int64_t c = 0; c < space.dim; ++c) {
        auto& entries = cols[c];
        auto add = [&entries](std::int64_t row, cxd v) {
            for (auto& e : entries) {
                if (e.row == row) {
                    e.v += v;
                    return;
                }
            }
            entries.push_back({row, v});
        };
        add(c, scalar);
        for (const auto& t : ones) {
            int n = space.digit(c, t.site);
            for (int np = 0; np < p; ++np) {
                cxd v = t.op(np, n);
                if (v != 0.0) add(c + (np - n) * space.strides[t.site], v);
            }
        }
        for (const auto& t : twos) {
            int na = space.digit(c, t.site_a);
            int nb = space.digit(c, t.site_b);
            for (int npa = 0; npa < p; ++npa) {
                cxd va = t.op_a(npa, na);
                if (va == 0.0) continue;
                for (int npb = 0; npb < p; ++npb) {
                    cxd vb = t.op_b(npb, nb);
                    if (vb == 0.0) continue;
                    std::int64_t row = c + (npa - na) * space.strides[t.site_a] +
                                       (npb - nb) * space.strides[t.site_b];
                    add(row, t.coeff * (va * vb));
                }
            }
        }
        std::sort(entries.begin(), entries.end(),
                  [](const Entry& a, const Entry& b) { return a.row < b.row; });
    }

    // transpose the per-column lists into CSR rows (Hermitian: row r of H has
    // exactly the conjugates of column r, but we store computed values directly
    // by flipping the roles: entry (row, c) belongs to CSR row `row`).
    for (const auto& entries : cols)
        for (const auto& e : entries) ++h.row_ptr[e.row + 1];
    for (std::int64_t r = 0; r < space.dim; ++r) h.row_ptr[r + 1] += h.row_ptr[r];
    h.col.resize(h.row_ptr.back());
    h.val.resize(h.row_ptr.back());
    std::vector<std::int64_t> cursor(h.row_ptr.begin(), h.row_ptr.end() - 1);
    for (std::int64_t c = 0; c < space.dim; ++c) {
        for (const auto& e : cols[c]) {
            std::int64_t k = cursor[e.row]++;
            h.col[k] = std::int32_t(c);
            h.val[k] = e.v;
        }
    }
    return h;
}

} // namespace

SparseHamiltonian assemble_hamiltonian(const RotorModel& model, const LatticeSpec& lat,
                                       const PerturbField& b) {
    require(int(b.values.size()) == lat.volume(),
            "assemble_hamiltonian: field size does not match lattice");
    for (cxd v : b.values)
        require(std::isfinite(v.real()) && std::isfinite(v.imag()),
                "assemble_hamiltonian: non-finite field");

    const SiteOperators ops = site_operators(model.cutoff, model.inertia);
    const int p = model.per_site_dim();
    ProductSpace space(lat.volume(), p);
    const double J = model.coupling;

    Matrix cos2_sin2 = ops.cos_op * ops.cos_op + ops.sin_op * ops.sin_op;
    Matrix kin = ops.kinetic.cast<cxd>().asDiagonal();

    std::vector<Matrix> one(lat.volume(), Matrix::Zero(p, p));
    for (int x = 0; x < lat.volume(); ++x) one[x] = kin;

    double scalar = 0.0;
    std::vector<TwoSiteTerm> twos;
    twos.reserve(2 * lat.bonds.size());
    for (const Bond& bond : lat.bonds) {
        one[bond.a] += (J / 2.0) * cos2_sin2;
        one[bond.b] += (J / 2.0) * cos2_sin2;
        if (J != 0.0) {
            twos.push_back({bond.a, bond.b, ops.cos_op, ops.cos_op, -J});
            twos.push_back({bond.a, bond.b, ops.sin_op, ops.sin_op, -J});
        }
        cxd beta = b.values[bond.a] - b.values[bond.b];
        if (beta != 0.0) {
            // |D - beta|^2 = D^2 - 2 Re(beta) D + |beta|^2 for Hermitian D
            one[bond.a] += (-J * beta.real()) * ops.cos_op;
            one[bond.b] += (J * beta.real()) * ops.cos_op;
            scalar += (J / 2.0) * std::norm(beta);
        }
    }

    std::vector<OneSiteTerm> ones;
    ones.reserve(one.size());
    for (int x = 0; x < lat.volume(); ++x) ones.push_back({x, std::move(one[x])});

    SparseHamiltonian h = assemble(space, scalar, ones, twos);
    h.constant_offset = J * double(lat.bonds.size());
    return h;
}

SparseHamiltonian assemble_hprime(const RotorModel& model, const LatticeSpec& lat,
                                  const PerturbField& b) {
    require(int(b.values.size()) == lat.volume(), "assemble_hprime: field size mismatch");
    const SiteOperators ops = site_operators(model.cutoff, model.inertia);
    const int p = model.per_site_dim();
    ProductSpace space(lat.volume(), p);
    const double J = model.coupling;

    std::vector<Matrix> one(lat.volume(), Matrix::Zero(p, p));
    for (const Bond& bond : lat.bonds) {
        double re = (b.values[bond.a] - b.values[bond.b]).real();
        one[bond.a] += (-J * re) * ops.cos_op;
        one[bond.b] += (J * re) * ops.cos_op;
    }
    std::vector<OneSiteTerm> ones;
    for (int x = 0; x < lat.volume(); ++x) ones.push_back({x, std::move(one[x])});
    return assemble(space, 0.0, ones, {});
}

double c_of_b(const RotorModel& model, const LatticeSpec& lat, const PerturbField& b) {
    double c = 0.0;
    for (const Bond& bond : lat.bonds) c += std::norm(b.values[bond.a] - b.values[bond.b]);
    return 0.5 * model.coupling * c;
}

ReflectedFields reflect_field(const PerturbField& b, const LatticeSpec& lat) {
    require(int(b.values.size()) == lat.volume(), "reflect_field: field size mismatch");
    ReflectedFields out;
    out.b_l = PerturbField::zero(lat.volume());
    out.b_r = PerturbField::zero(lat.volume());
    for (int s = 0; s < lat.volume(); ++s) {
        if (lat.left_mask[s]) {
            out.b_l.values[s] = b.values[s];
            out.b_r.values[s] = b.values[lat.mirror[s]];
        } else {
            out.b_r.values[s] = b.values[s];
            out.b_l.values[s] = b.values[lat.mirror[s]];
        }
    }
    auto count = [&lat](const PerturbField& f) {
        std::int64_t n = 0;
        for (const Bond& bond : lat.bonds)
            if (f.values[bond.a] != f.values[bond.b]) ++n;
        return n;
    };
    out.non_zero_bonds = count(b);
    out.non_zero_bonds_l = count(out.b_l);
    out.non_zero_bonds_r = count(out.b_r);
    return out;
}

void apply_site_operator(const Matrix& op, int site, const ProductSpace& space, cxd scale,
                         const Vector& in, Vector& out) {
    const int p = space.per_site;
    const std::int64_t stride = space.strides[site];
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < space.dim; ++i) {
        int np = space.digit(i, site);
        cxd acc = 0.0;
        for (int n = 0; n < p; ++n) {
            cxd v = op(np, n);
            if (v != 0.0) acc += v * in(i + (n - np) * stride);
        }
        out(i) += scale * acc;
    }
}

void export_coordinate(const SparseHamiltonian& h, std::ostream& os) {
    os.precision(17);
    for (std::int64_t r = 0; r < h.dim; ++r)
        for (std::int64_t k = h.row_ptr[r]; k < h.row_ptr[r + 1]; ++k)
            os << r << ' ' << h.col[k] << ' ' << h.val[k].real() << ' ' << h.val[k].imag() << '\n';
}

} // namespace klss
