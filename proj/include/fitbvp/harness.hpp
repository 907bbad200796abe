#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fitbvp/mesh.hpp"
#include "fitbvp/problem.hpp"
#include "fitbvp/solver.hpp"

namespace fitbvp {

/// max_i |exact(x_i) - y_i|. Throws MissingExactError on an empty callable.
double error_against_exact(const Solution& sol, const ExactSolution& exact);

/// max over coarse nodes of |ref - y| at the coinciding fine node. Throws
/// MeshMismatchError unless ref.N is a multiple of sol.N and the coarse
/// nodes coincide with every (ref.N / sol.N)-th fine node to 4 ulp.
double error_against_reference(const Solution& sol, const Solution& ref);

/// (ln e_N - ln e_2N) / ln 2.
double order(double e_n, double e_2n);

enum class TableFormat { csv, markdown };

struct StudyConfig {
  std::string problem_id = "example1";
  std::vector<double> epsilons;
  std::vector<int> sizes;
  double gamma = 1.0;
  double q = 4.0;
  double a = 1.0;
  double p = 0.4;
  NewtonConfig newton;
  /// Fine mesh for the reference solution when the problem has no exact one.
  int reference_N = 16384;
  std::optional<std::filesystem::path> cache_dir;
  /// Worker threads; 0 picks the hardware concurrency.
  int jobs = 1;

  void validate(bool needs_reference) const;
};

struct StudyCell {
  double epsilon = 0.0;
  int N = 0;
  std::optional<double> error;
  std::optional<double> order;  // against the next N of the same epsilon
  bool clamped = false;
  int iterations = 0;
  std::string failure;  // non-empty when the cell did not produce an error

  bool failed() const { return !failure.empty(); }
};

struct ConvergenceTable {
  StudyConfig config;
  std::vector<StudyCell> rows;  // epsilon outer, N inner, in config order

  bool any_failed() const;
  std::vector<double> clamped_epsilons() const;
};

/// Solves every (epsilon, N) cell and fills E_N and Ord. Cells may run
/// concurrently; rows are always assembled in configuration order. A failed
/// cell is recorded and the remaining cells still run.
ConvergenceTable run_convergence_study(const StudyConfig& cfg);

/// CSV `epsilon,N,E_N,Ord` or a Markdown grid with one E_N/Ord column pair
/// per epsilon.
std::string emit_table(const ConvergenceTable& table, TableFormat format);

/// Accepts `2^-k`, `2^k` and plain decimals.
double parse_epsilon(const std::string& text);
/// `2^-k` for exact powers of two, otherwise 17 significant digits.
std::string format_epsilon(double epsilon);

enum class CacheStatus { hit, miss, corrupt };

/// Everything a reference solution depends on.
struct ReferenceKey {
  std::string problem_id;
  MeshParams mesh;
  double gamma = 1.0;
  double q = 4.0;
  NewtonConfig newton;
};

/// Loads the reference solution from `dir` when a file with the exact same
/// key exists, otherwise solves and stores it. A file that fails to parse is
/// reported with a warning on stderr and recomputed.
Solution reference_cache(const std::filesystem::path& dir, const Problem& problem,
                         const ReferenceKey& key, CacheStatus* status = nullptr);

/// File the key maps to inside `dir`.
std::filesystem::path reference_cache_file(const std::filesystem::path& dir,
                                           const ReferenceKey& key);

/// CSV `i,x_i,y_i` at 17 significant digits.
std::string format_solution_csv(const Solution& sol);

}  // namespace fitbvp
