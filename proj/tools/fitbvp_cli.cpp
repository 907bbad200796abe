// Command-line front end: `mesh`, `solve` and `study` subcommands.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "fitbvp/errors.hpp"
#include "fitbvp/harness.hpp"
#include "fitbvp/mesh.hpp"
#include "fitbvp/problem.hpp"
#include "fitbvp/solver.hpp"

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void warn_if_clamped(const fitbvp::MeshParams& mp) {
  if (fitbvp::transition_point(mp).clamped) {
    std::cerr << "warning: p - eps^(1/3) <= 0 for eps=" << fitbvp::format_epsilon(mp.epsilon)
              << ", p=" << mp.p << "; transition point clamped to 0\n";
  }
}

struct MeshOptions {
  std::string epsilon = "2^-10";
  int n = 64;
  double a = 1.0;
  double p = 0.4;

  fitbvp::MeshParams params() const { return {fitbvp::parse_epsilon(epsilon), p, a, n}; }
};

void add_mesh_options(CLI::App* cmd, MeshOptions& opts) {
  cmd->add_option("--epsilon", opts.epsilon, "perturbation parameter (decimal or 2^-k)")
      ->capture_default_str();
  cmd->add_option("--n", opts.n, "number of subintervals (even, >= 4)")->capture_default_str();
  cmd->add_option("--a", opts.a, "layer density parameter")->capture_default_str();
  cmd->add_option("--p", opts.p, "transition parameter in (0, 1/2)")->capture_default_str();
}

int run_mesh(const MeshOptions& opts) {
  const auto mp = opts.params();
  warn_if_clamped(mp);
  const auto mesh = fitbvp::build_mesh(mp);
  std::printf("i,t_i,x_i,h_i\n");
  for (int i = 0; i <= mesh.size(); ++i) {
    const double t = static_cast<double>(i) / mesh.size();
    if (i < mesh.size()) {
      std::printf("%d,%.17g,%.17g,%.17g\n", i, t, mesh.node(i), mesh.step(i));
    } else {
      std::printf("%d,%.17g,%.17g,\n", i, t, mesh.node(i));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fitted finite differences for eps^2 y'' = f(x, y) on a Bakhvalov mesh"};
  app.require_subcommand(1);

  MeshOptions mesh_opts;
  auto* mesh_cmd = app.add_subcommand("mesh", "print mesh nodes as CSV i,t_i,x_i,h_i");
  add_mesh_options(mesh_cmd, mesh_opts);

  MeshOptions solve_mesh;
  std::string problem_id = "example1";
  double gamma = 1.0;
  double q = 4.0;
  fitbvp::NewtonConfig newton;
  auto* solve_cmd = app.add_subcommand("solve", "solve one problem, print CSV i,x_i,y_i");
  solve_cmd->add_option("--problem", problem_id, "builtin problem")
      ->check(CLI::IsMember({"example1", "example2"}))
      ->capture_default_str();
  add_mesh_options(solve_cmd, solve_mesh);
  solve_cmd->add_option("--gamma", gamma, "fitting constant, gamma >= f_y")->capture_default_str();
  solve_cmd->add_option("--q", q, "central weight of the f average")->capture_default_str();
  solve_cmd->add_option("--tol", newton.tol, "Newton step tolerance")->capture_default_str();
  solve_cmd->add_option("--max-iter", newton.max_iter, "Newton iteration limit")
      ->capture_default_str();

  fitbvp::StudyConfig study;
  std::string study_problem = "example1";
  std::string eps_list = "2^-10";
  std::string n_list = "64,128,256,512,1024,2048,4096,8192";
  std::string format = "csv";
  std::string cache_dir;
  auto* study_cmd = app.add_subcommand("study", "convergence table of E_N and Ord");
  study_cmd->add_option("--problem", study_problem, "builtin problem")
      ->check(CLI::IsMember({"example1", "example2"}))
      ->capture_default_str();
  study_cmd->add_option("--eps-list", eps_list, "comma-separated epsilons (2^-k allowed)")
      ->capture_default_str();
  study_cmd->add_option("--n-list", n_list, "comma-separated N values")->capture_default_str();
  study_cmd->add_option("--gamma", study.gamma)->capture_default_str();
  study_cmd->add_option("--q", study.q)->capture_default_str();
  study_cmd->add_option("--a", study.a)->capture_default_str();
  study_cmd->add_option("--p", study.p)->capture_default_str();
  study_cmd->add_option("--tol", study.newton.tol)->capture_default_str();
  study_cmd->add_option("--max-iter", study.newton.max_iter)->capture_default_str();
  study_cmd->add_option("--reference-n", study.reference_N,
                        "reference mesh size for problems without exact solution")
      ->capture_default_str();
  study_cmd->add_option("--format", format)
      ->check(CLI::IsMember({"csv", "md"}))
      ->capture_default_str();
  study_cmd->add_option("--cache-dir", cache_dir, "directory for cached reference solutions");
  study_cmd->add_option("--jobs", study.jobs, "worker threads (0 = all cores)")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*mesh_cmd) return run_mesh(mesh_opts);

    if (*solve_cmd) {
      const auto problem = fitbvp::make_builtin(problem_id);
      const auto mp = solve_mesh.params();
      warn_if_clamped(mp);
      const auto validation = fitbvp::validate_problem(problem, gamma);
      if (!validation.gamma_bounds_f_y) {
        std::cerr << "warning: gamma=" << gamma << " is below max f_y=" << validation.max_f_y
                  << " on the solution box\n";
      }
      const auto mesh = fitbvp::build_mesh(mp);
      const auto sol =
          fitbvp::newton_solve(problem, mesh, fitbvp::SchemeParams::make(gamma, q, mp.epsilon),
                               newton);
      std::cout << fitbvp::format_solution_csv(sol);
      std::cerr << "converged in " << sol.iterations << " iterations, |step|="
                << sol.final_step_norm << ", |F|=" << sol.final_residual_norm << '\n';
      return 0;
    }

    study.problem_id = study_problem;
    for (const auto& e : split_list(eps_list)) study.epsilons.push_back(fitbvp::parse_epsilon(e));
    for (const auto& n : split_list(n_list)) study.sizes.push_back(std::stoi(n));
    if (!cache_dir.empty()) study.cache_dir = cache_dir;
    for (double e : study.epsilons) warn_if_clamped({e, study.p, study.a, 4});

    const auto table = fitbvp::run_convergence_study(study);
    std::cout << fitbvp::emit_table(table, format == "md" ? fitbvp::TableFormat::markdown
                                                          : fitbvp::TableFormat::csv);
    for (const auto& cell : table.rows) {
      if (cell.failed()) {
        std::cerr << "failed: eps=" << fitbvp::format_epsilon(cell.epsilon) << " N=" << cell.N
                  << ": " << cell.failure << '\n';
      }
    }
    return table.any_failed() ? 1 : 0;
  } catch (const fitbvp::NonConvergenceError& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
}
