// Times the OpenMP kernels against their serial references: the CSR
// Hamiltonian product and the folded Brillouin-zone quadrature.
#include "klss/criterion.hpp"
#include "klss/rotor.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cstdio>
#include <functional>

namespace {

double time_of(const std::function<void()>& fn, int reps) {
    fn(); // warm up
    auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() /
           double(reps);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (no OpenMP)\n");
#endif

    klss::RotorModel model{1.0, 1.0, 3};
    klss::LatticeSpec lat = klss::build_lattice(1, 3); // 2N = 6: dim 7^6 = 117649
    klss::SparseHamiltonian h =
        klss::assemble_hamiltonian(model, lat, klss::PerturbField::zero(lat.volume()));
    std::printf("H: dim %lld, nnz %zu\n", (long long)h.dim, h.val.size());

    klss::Vector x = klss::Vector::Random(h.dim);
    klss::Vector y(h.dim);
    const int reps = 40;
    double ts = time_of([&] { h.apply_serial(x, y); }, reps);
    double tp = time_of([&] { h.apply(x, y); }, reps);
    std::printf("matvec      serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n", 1e3 * ts,
                1e3 * tp, ts / tp);

    for (int d : {2, 3}) {
        std::int64_t n = d == 2 ? 4096 : 256;
        double qs = time_of([&] { klss::bz_quadrature_serial(d, n); }, 3);
        double qp = time_of([&] { klss::bz_quadrature(d, n); }, 3);
        std::printf("quadrature  d=%d n=%lld serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n",
                    d, (long long)n, 1e3 * qs, 1e3 * qp, qs / qp);
    }
    return 0;
}
