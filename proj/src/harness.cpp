#include "fitbvp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <regex>
#include <sstream>
#include <thread>

#include "fitbvp/errors.hpp"

namespace fitbvp {
namespace {

bool within_ulps(double a, double b, double ulps) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= ulps * std::numeric_limits<double>::epsilon() * scale;
}

void parallel_for(int jobs, std::size_t count, const std::function<void(std::size_t)>& body) {
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
}

std::string format_error(double e) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4e", e);
  return buf;
}

std::string format_order(const std::optional<double>& ord) {
  if (!ord) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *ord);
  return buf;
}

std::string format_cell_error(const StudyCell& cell) {
  if (cell.failed()) return "failed";
  return cell.error ? format_error(*cell.error) : "-";
}

}  // namespace

double error_against_exact(const Solution& sol, const ExactSolution& exact) {
  if (!exact) throw MissingExactError("error_against_exact: problem has no exact solution");
  const auto& x = sol.mesh.nodes();
  const auto& xc = sol.mesh.complements();
  const double eps = sol.mesh.params().epsilon;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::abs(exact(x[i], xc[i], eps) - sol.values[i]));
  }
  return worst;
}

double error_against_reference(const Solution& sol, const Solution& ref) {
  const int coarse = sol.mesh.size();
  const int fine = ref.mesh.size();
  if (coarse <= 0 || fine % coarse != 0) {
    throw MeshMismatchError("error_against_reference: reference N=" + std::to_string(fine) +
                            " is not a multiple of N=" + std::to_string(coarse));
  }
  const int stride = fine / coarse;
  double worst = 0.0;
  for (int i = 0; i <= coarse; ++i) {
    const double xc = sol.mesh.node(i);
    const double xf = ref.mesh.node(i * stride);
    if (!within_ulps(xc, xf, 4.0)) {
      throw MeshMismatchError("error_against_reference: node " + std::to_string(i) +
                              " does not coincide with the reference mesh");
    }
    worst = std::max(worst, std::abs(ref.values[i * stride] - sol.values[i]));
  }
  return worst;
}

double order(double e_n, double e_2n) {
  if (!(e_n > 0.0) || !(e_2n > 0.0)) throw std::domain_error("order: errors must be positive");
  return (std::log(e_n) - std::log(e_2n)) / std::log(2.0);
}

void StudyConfig::validate(bool needs_reference) const {
  if (epsilons.empty()) throw ParameterError("study: empty epsilon list");
  if (sizes.empty()) throw ParameterError("study: empty N list");
  for (int n : sizes) {
    if (n < 4 || n % 2 != 0) throw ParameterError("study: every N must be even and >= 4");
    if (needs_reference && reference_N % n != 0) {
      throw ParameterError("study: N=" + std::to_string(n) + " does not divide reference N=" +
                           std::to_string(reference_N));
    }
  }
  if (needs_reference && (reference_N < 4 || reference_N % 2 != 0)) {
    throw ParameterError("study: reference N must be even and >= 4");
  }
  newton.validate();
}

bool ConvergenceTable::any_failed() const {
  return std::any_of(rows.begin(), rows.end(), [](const StudyCell& c) { return c.failed(); });
}

std::vector<double> ConvergenceTable::clamped_epsilons() const {
  std::vector<double> out;
  for (const auto& row : rows) {
    if (row.clamped && (out.empty() || out.back() != row.epsilon)) out.push_back(row.epsilon);
  }
  return out;
}

ConvergenceTable run_convergence_study(const StudyConfig& cfg) {
  const Problem problem = make_builtin(cfg.problem_id);
  const bool needs_reference = !problem.exact.has_value();
  cfg.validate(needs_reference);

  ConvergenceTable table;
  table.config = cfg;
  const std::size_t n_eps = cfg.epsilons.size();
  const std::size_t n_sizes = cfg.sizes.size();

  // References are computed once per epsilon before the cells that need them.
  std::vector<std::optional<Solution>> references(n_eps);
  std::vector<std::string> reference_failures(n_eps);
  if (needs_reference) {
    parallel_for(cfg.jobs, n_eps, [&](std::size_t e) {
      ReferenceKey key{cfg.problem_id, {cfg.epsilons[e], cfg.p, cfg.a, cfg.reference_N},
                       cfg.gamma, cfg.q, cfg.newton};
      try {
        if (cfg.cache_dir) {
          references[e] = reference_cache(*cfg.cache_dir, problem, key);
        } else {
          const Mesh mesh = build_mesh(key.mesh);
          references[e] = newton_solve(problem, mesh,
                                       SchemeParams::make(cfg.gamma, cfg.q, cfg.epsilons[e]),
                                       cfg.newton);
        }
      } catch (const std::exception& ex) {
        reference_failures[e] = std::string("reference: ") + ex.what();
      }
    });
  }

  table.rows.resize(n_eps * n_sizes);
  parallel_for(cfg.jobs, table.rows.size(), [&](std::size_t idx) {
    const std::size_t e = idx / n_sizes;
    StudyCell& cell = table.rows[idx];
    cell.epsilon = cfg.epsilons[e];
    cell.N = cfg.sizes[idx % n_sizes];
    const MeshParams mp{cell.epsilon, cfg.p, cfg.a, cell.N};
    try {
      cell.clamped = transition_point(mp).clamped;
      if (needs_reference && !references[e]) {
        cell.failure = reference_failures[e];
        return;
      }
      const Mesh mesh = build_mesh(mp);
      const Solution sol =
          newton_solve(problem, mesh, SchemeParams::make(cfg.gamma, cfg.q, cell.epsilon),
                       cfg.newton);
      cell.iterations = sol.iterations;
      cell.error = needs_reference ? error_against_reference(sol, *references[e])
                                   : error_against_exact(sol, *problem.exact);
    } catch (const std::exception& ex) {
      cell.failure = ex.what();
    }
  });

  for (std::size_t e = 0; e < n_eps; ++e) {
    for (std::size_t k = 0; k + 1 < n_sizes; ++k) {
      StudyCell& here = table.rows[e * n_sizes + k];
      const StudyCell& next = table.rows[e * n_sizes + k + 1];
      if (here.error && next.error && *here.error > 0.0 && *next.error > 0.0) {
        here.order = order(*here.error, *next.error);
      }
    }
  }
  return table;
}

std::string emit_table(const ConvergenceTable& table, TableFormat format) {
  std::ostringstream out;
  if (format == TableFormat::csv) {
    out << "epsilon,N,E_N,Ord\n";
    for (const auto& row : table.rows) {
      out << format_epsilon(row.epsilon) << ',' << row.N << ',' << format_cell_error(row) << ','
          << format_order(row.order) << '\n';
    }
    return out.str();
  }

  // Markdown: rows are N, one E_N/Ord column pair per epsilon.
  std::vector<double> eps;
  std::vector<int> sizes;
  for (const auto& row : table.rows) {
    if (std::find(eps.begin(), eps.end(), row.epsilon) == eps.end()) eps.push_back(row.epsilon);
    if (std::find(sizes.begin(), sizes.end(), row.N) == sizes.end()) sizes.push_back(row.N);
  }
  std::map<std::pair<double, int>, const StudyCell*> lookup;
  for (const auto& row : table.rows) lookup[{row.epsilon, row.N}] = &row;

  out << "| N |";
  for (double e : eps) {
    const auto it = std::find_if(table.rows.begin(), table.rows.end(),
                                 [&](const StudyCell& c) { return c.epsilon == e; });
    out << " E_N (eps=" << format_epsilon(e) << (it->clamped ? "*" : "") << ") | Ord |";
  }
  out << "\n|---|";
  for (std::size_t i = 0; i < eps.size(); ++i) out << "---|---|";
  out << '\n';
  for (int n : sizes) {
    out << "| " << n << " |";
    for (double e : eps) {
      const auto it = lookup.find({e, n});
      if (it == lookup.end()) {
        out << " | |";
      } else {
        out << ' ' << format_cell_error(*it->second) << " | " << format_order(it->second->order)
            << " |";
      }
    }
    out << '\n';
  }
  if (!table.clamped_epsilons().empty()) {
    out << "\n\\* transition point clamped to 0 (p <= eps^(1/3))\n";
  }
  return out.str();
}

double parse_epsilon(const std::string& text) {
  static const std::regex power(R"(\s*2\s*\^\s*(-?\d+)\s*)");
  std::smatch match;
  if (std::regex_match(text, match, power)) {
    return std::ldexp(1.0, std::stoi(match[1].str()));
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse epsilon '" + text + "'");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size()) throw std::invalid_argument("cannot parse epsilon '" + text + "'");
  return value;
}

std::string format_epsilon(double epsilon) {
  int exponent = 0;
  const double mantissa = std::frexp(epsilon, &exponent);
  if (mantissa == 0.5) return "2^" + std::to_string(exponent - 1);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", epsilon);
  return buf;
}

std::string format_solution_csv(const Solution& sol) {
  std::string out = "i,x_i,y_i\n";
  char buf[96];
  for (Eigen::Index i = 0; i < sol.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g\n", static_cast<long>(i), sol.mesh.node(i),
                  sol.values[i]);
    out += buf;
  }
  return out;
}

}  // namespace fitbvp
