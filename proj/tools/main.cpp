// Command line front end: verification suites, ladders, quadratures and
// exact-diagonalization runs with JSON/CSV reporting.
#include "klss/criterion.hpp"
#include "klss/rp.hpp"
#include "klss/schatten.hpp"
#include "klss/spectra.hpp"
#include "klss/suites.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

std::string default_out(const std::string& name) {
    const char* dir = std::getenv("KLSS_OUT_DIR");
    if (!dir || !*dir) return {};
    return (std::filesystem::path(dir) / name).string();
}

void print_checks(const klss::SuiteReport& report) {
    for (const auto& c : report.checks)
        std::cout << "[" << c.status << "] " << c.name << "  slack=" << c.slack << "\n";
    std::cout << (report.all_passed() ? "all checks passed" : "CHECK FAILURES") << " ("
              << report.elapsed_seconds << " s)\n";
}

int finish(klss::SuiteReport report, klss::RunConfig cfg) {
    if (cfg.out_path.empty()) cfg.out_path = default_out("report." + cfg.format);
    klss::write_report(report, cfg);
    print_checks(report);
    if (!report.all_passed()) {
        std::cerr << "failing checks:";
        for (const auto& n : report.failing()) std::cerr << " " << n;
        std::cerr << "\n";
        return kExitCheckFailure;
    }
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"trace-inequality and quantum rotor verification toolkit"};
    app.set_config("--config", "", "key=value config file; command line wins");
    app.require_subcommand(1);

    klss::RunConfig cfg;
    int dim = 1;
    int edge = 4;
    int cutoff = 2;
    double inertia = 1.0, coupling = 1.0;
    std::int64_t trials = 10000;
    std::uint64_t seed = 1;
    double tol = 1e-5;
    std::string out, format = "json";

    auto add_model_flags = [&](CLI::App* cmd) {
        cmd->add_option("-d,--dim", dim, "lattice dimension");
        cmd->add_option("--edge", edge, "lattice edge length (2N, even)");
        cmd->add_option("--cutoff", cutoff, "per-site angular momentum cutoff M");
        cmd->add_option("--inertia", inertia, "moment of inertia I");
        cmd->add_option("--coupling", coupling, "ferromagnetic coupling J");
    };
    auto add_common_flags = [&](CLI::App* cmd) {
        cmd->add_option("--trials", trials, "randomized suite trials");
        cmd->add_option("--seed", seed, "master seed, recorded in reports");
        cmd->add_option("--tol", tol, "tolerance override (context dependent)");
        cmd->add_option("--out", out, "output report path");
        cmd->add_option("--format", format, "json|csv")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    auto* kls = app.add_subcommand("kls", "randomized matrix inequality suite");
    add_common_flags(kls);
    kls->add_option("--max-dim", cfg.max_dim, "largest matrix dimension");

    auto* ladder = app.add_subcommand("ladder", "operator truncation ladder");
    add_common_flags(ladder);

    auto* integral = app.add_subcommand("integral", "Brillouin-zone integral I_d");
    integral->add_option("-d,--dim", dim, "dimension");
    integral->add_option("--tol", tol, "refinement tolerance");
    std::int64_t max_cells = 1 << 16;
    integral->add_option("--max-cells", max_cells, "refinement cap (cells per axis)");
    integral->add_option("--out", out, "output report path");
    integral->add_option("--format", format, "json|csv");

    auto* diag = app.add_subcommand("diagonalize", "ground state of the rotor Hamiltonian");
    add_model_flags(diag);
    add_common_flags(diag);
    std::string export_matrix;
    diag->add_option("--export-matrix", export_matrix, "write sparse data (row col re im lines)");

    auto* verify = app.add_subcommand("verify", "run verification suites");
    std::vector<std::string> suites{"kls", "vectorize", "ladder", "rotor", "rp", "criterion"};
    verify->add_option("--suite", suites, "suites to run")->delimiter(',');
    add_model_flags(verify);
    add_common_flags(verify);
    verify->add_option("--field-trials", cfg.field_trials, "random perturbation fields");
    verify->add_option("--curvature-trials", cfg.curvature_trials, "curvature cross-checks");
    verify->add_option("--max-dim", cfg.max_dim, "largest matrix dimension");

    auto* sweep = app.add_subcommand("sweep", "cutoff sweep of the rotor suite");
    add_model_flags(sweep);
    add_common_flags(sweep);
    std::vector<int> cutoffs{1, 2, 3};
    sweep->add_option("--cutoffs", cutoffs, "cutoff values to scan")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitPass : kExitUsage;
    }

    cfg.d = dim;
    cfg.edge = edge;
    cfg.cutoff = cutoff;
    cfg.inertia = inertia;
    cfg.coupling = coupling;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.out_path = out;
    cfg.format = format;
    cfg.integral_tol = tol;

    try {
        if (kls->parsed()) {
            cfg.suites = {"kls"};
            return finish(klss::run_suite(cfg), cfg);
        }
        if (ladder->parsed()) {
            cfg.suites = {"ladder"};
            return finish(klss::run_suite(cfg), cfg);
        }
        if (integral->parsed()) {
            klss::IntegralResult r = klss::integral_Id(dim, tol, max_cells);
            std::cout << "I_" << dim << " = " << r.value << "  (error estimate "
                      << r.error_estimate << ", diverged " << (r.diverged ? "yes" : "no") << ")\n";
            for (auto [n, v] : r.refinement_trace)
                std::cout << "  cells/axis " << n << " -> " << v << "\n";
            return kExitPass;
        }
        if (diag->parsed()) {
            klss::RotorModel model{inertia, coupling, cutoff};
            klss::LatticeSpec lat = klss::build_lattice(dim, edge / 2);
            klss::SparseHamiltonian h =
                klss::assemble_hamiltonian(model, lat, klss::PerturbField::zero(lat.volume()));
            if (!export_matrix.empty()) {
                std::ofstream os(export_matrix);
                klss::export_coordinate(h, os);
            }
            klss::GroundState gs = klss::ground_state(h, seed);
            std::cout << "dim " << h.dim << "  E0 " << gs.energy << "  gap " << gs.gap
                      << "  residual " << gs.residual << "  offset " << h.constant_offset << "\n";
            return kExitPass;
        }
        if (verify->parsed()) {
            cfg.suites = suites;
            return finish(klss::run_suite(cfg), cfg);
        }
        if (sweep->parsed()) {
            int rc = kExitPass;
            for (int m : cutoffs) {
                klss::RunConfig c = cfg;
                c.suites = {"rotor"};
                c.cutoff = m;
                if (!out.empty()) c.out_path = out + ".M" + std::to_string(m) + "." + format;
                std::cout << "== cutoff M = " << m << "\n";
                int r = finish(klss::run_suite(c), c);
                rc = std::max(rc, r);
            }
            return rc;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const klss::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
