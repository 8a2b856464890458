// Command-line driver: verification suite, single solves, the
// convergence study and the inf-sup probe.

#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "p3nc/analysis.hpp"
#include "p3nc/assembly.hpp"
#include "p3nc/dofs.hpp"
#include "p3nc/mesh.hpp"
#include "p3nc/solver.hpp"
#include "p3nc/verification.hpp"

namespace {

struct RunConfig {
    int levels = 3;
    double outer_tol = 1e-10;
    double inner_tol = 1e-12;
    std::string format = "markdown";  // markdown | csv
    std::string out;
    unsigned seed = 348652;
    int threads = 1;
    std::string precond = "ic0";  // ic0 | jacobi | none
};

p3nc::SolverConfig solver_config(const RunConfig& rc) {
    p3nc::SolverConfig cfg;
    cfg.outer_tol = rc.outer_tol;
    cfg.inner_tol = rc.inner_tol;
    cfg.threads = rc.threads;
    if (rc.precond == "ic0") cfg.precond = p3nc::SolverConfig::Precond::ic0;
    else if (rc.precond == "jacobi") cfg.precond = p3nc::SolverConfig::Precond::jacobi;
    else if (rc.precond == "none") cfg.precond = p3nc::SolverConfig::Precond::none;
    else throw CLI::ValidationError("--precond must be ic0, jacobi or none");
    return cfg;
}

// Stream to --out when given, otherwise stdout.
class OutputStream {
public:
    explicit OutputStream(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw CLI::ValidationError("cannot open output file " + path);
        }
    }
    std::ostream& get() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void add_common(CLI::App* cmd, RunConfig& rc, bool with_levels = true) {
    if (with_levels)
        cmd->add_option("--levels", rc.levels, "grid level (level k has 2^(k-1) cubes per axis)")
            ->check(CLI::Range(1, 6))
            ->envname("P3NC_LEVELS");
    cmd->add_option("--outer-tol", rc.outer_tol, "relative Schur residual tolerance")
        ->envname("P3NC_OUTER_TOL");
    cmd->add_option("--inner-tol", rc.inner_tol, "relative inner CG tolerance")
        ->envname("P3NC_INNER_TOL");
    cmd->add_option("--format", rc.format, "output format: markdown or csv")
        ->check(CLI::IsMember({"markdown", "csv"}))
        ->envname("P3NC_FORMAT");
    cmd->add_option("--out", rc.out, "write output to this file instead of stdout")
        ->envname("P3NC_OUT");
    cmd->add_option("--seed", rc.seed, "seed for sampling-based checks")->envname("P3NC_SEED");
    cmd->add_option("--threads", rc.threads, "threads for sparse matrix-vector products")
        ->check(CLI::Range(1, 64))
        ->envname("P3NC_THREADS");
    cmd->add_option("--precond", rc.precond, "inner CG preconditioner: ic0, jacobi or none")
        ->check(CLI::IsMember({"ic0", "jacobi", "none"}))
        ->envname("P3NC_PRECOND");
}

int cmd_verify(const RunConfig& rc) {
    OutputStream out(rc.out);
    const auto checks = p3nc::run_verification();
    return p3nc::report_verification(checks, out.get()) ? 0 : 1;
}

int cmd_mesh(const RunConfig& rc) {
    const int n = 1 << (rc.levels - 1);
    const p3nc::TetMesh mesh = p3nc::build_cube_mesh(n);
    OutputStream out(rc.out);
    p3nc::save_mesh(mesh, out.get());
    std::cerr << "level " << rc.levels << ": " << mesh.vertices.size() << " vertices, "
              << mesh.tets.size() << " tets, " << mesh.edges.size() << " edges, "
              << mesh.faces.size() << " faces (" << mesh.n_boundary_faces() << " boundary)\n";
    return 0;
}

int cmd_solve(const RunConfig& rc) {
    const p3nc::SolverConfig cfg = solver_config(rc);
    const p3nc::ExactSolution exact;
    const int n = 1 << (rc.levels - 1);
    const p3nc::TetMesh mesh = p3nc::build_cube_mesh(n);
    const p3nc::VelocityDofMap vmap = p3nc::build_velocity_dofs(mesh);
    const p3nc::PressureDofMap pmap = p3nc::build_pressure_dofs(mesh);
    const p3nc::SaddleSystem sys = p3nc::assemble_saddle_system(
        mesh, vmap, pmap, [&](const p3nc::Vec3& x) { return exact.forcing(x); });
    const p3nc::Solution sol = p3nc::solve_stokes(sys, cfg);
    const p3nc::ErrorNorms err = p3nc::error_norms(mesh, vmap, pmap, sol, exact);
    const double div_max = p3nc::divergence_check(mesh, vmap, sol.velocity, 10, rc.seed);
    const double norm_1h = p3nc::velocity_norm_1h(mesh, vmap, sol.velocity);

    OutputStream out(rc.out);
    std::ostream& os = out.get();
    os << "level " << rc.levels << " (" << n << "^3 cubes, " << mesh.tets.size() << " tets)\n"
       << "velocity dofs " << vmap.total << ", pressure dofs " << pmap.total << "\n"
       << "||u-u_h||_0       = " << p3nc::format_error(err.velocity_l2) << "\n"
       << "||grad(u-u_h)||_0 = " << p3nc::format_error(err.velocity_h1) << "\n"
       << "||p-p_h||_0       = " << p3nc::format_error(err.pressure_l2) << "\n"
       << "Uzawa iterations  = " << sol.uzawa_iterations << "\n"
       << "max |div u_h|     = " << p3nc::format_error(div_max) << "  (||u_h||_1h = "
       << p3nc::format_error(norm_1h) << ")\n";
    return 0;
}

int cmd_study(const RunConfig& rc) {
    const p3nc::SolverConfig cfg = solver_config(rc);
    const p3nc::ConvergenceReport report = p3nc::convergence_study(rc.levels, cfg);
    OutputStream out(rc.out);
    if (rc.format == "csv") p3nc::write_csv(report, out.get());
    else p3nc::write_markdown(report, out.get());
    return report.all_solved() ? 0 : 1;
}

int cmd_infsup(const RunConfig& rc) {
    const p3nc::SolverConfig cfg = solver_config(rc);
    OutputStream out(rc.out);
    std::ostream& os = out.get();
    if (rc.format == "csv") os << "level,beta_h,ratio_to_previous\n";
    double prev = 0.0;
    for (int level = 1; level <= rc.levels; ++level) {
        const int n = 1 << (level - 1);
        const p3nc::TetMesh mesh = p3nc::build_cube_mesh(n);
        const p3nc::VelocityDofMap vmap = p3nc::build_velocity_dofs(mesh);
        const p3nc::PressureDofMap pmap = p3nc::build_pressure_dofs(mesh);
        p3nc::SaddleSystem sys = p3nc::assemble_saddle_system(
            mesh, vmap, pmap, [](const p3nc::Vec3&) { return p3nc::Vec3{0, 0, 0}; });
        const double beta = p3nc::infsup_constant(sys, cfg);
        if (rc.format == "csv") {
            os << level << "," << beta << "," << (prev > 0.0 ? prev / beta : 0.0) << "\n";
        } else {
            os << "level " << level << ": beta_h = " << beta;
            if (prev > 0.0) os << "   (previous/current = " << prev / beta << ")";
            os << "\n";
        }
        prev = beta;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonconforming P3 / discontinuous P2 Stokes solver on tetrahedral grids"};
    app.require_subcommand(1);
    app.set_config("--config", "", "configuration file (key=value lines)");

    RunConfig rc;
    auto* verify = app.add_subcommand("verify", "run the construction self-checks");
    add_common(verify, rc, false);
    auto* mesh = app.add_subcommand("mesh", "write the structured cube mesh in text format");
    add_common(mesh, rc);
    auto* solve = app.add_subcommand("solve", "solve the manufactured problem on one level");
    add_common(solve, rc);
    auto* study = app.add_subcommand("study", "errors/rates table over levels 1..L");
    add_common(study, rc);
    auto* infsup = app.add_subcommand("infsup", "discrete inf-sup constants over levels 1..L");
    add_common(infsup, rc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad arguments
    }

    try {
        if (verify->parsed()) return cmd_verify(rc);
        if (mesh->parsed()) return cmd_mesh(rc);
        if (solve->parsed()) return cmd_solve(rc);
        if (study->parsed()) return cmd_study(rc);
        if (infsup->parsed()) return cmd_infsup(rc);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
