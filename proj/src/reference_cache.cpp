#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "fitbvp/errors.hpp"
#include "fitbvp/harness.hpp"

namespace fitbvp {
namespace {

constexpr const char* kMagic = "# fitbvp reference v1";

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Ordered key=value header lines; the whole set must match for a hit.
std::vector<std::pair<std::string, std::string>> header_fields(const ReferenceKey& key) {
  return {{"problem", key.problem_id},
          {"epsilon", g17(key.mesh.epsilon)},
          {"p", g17(key.mesh.p)},
          {"a", g17(key.mesh.a)},
          {"N", std::to_string(key.mesh.N)},
          {"gamma", g17(key.gamma)},
          {"q", g17(key.q)},
          {"tol", g17(key.newton.tol)},
          {"residual_tol", g17(key.newton.residual_tol)},
          {"max_iter", std::to_string(key.newton.max_iter)}};
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw std::runtime_error("bad number '" + s + "'");
  return v;
}

struct CachedRun {
  int iterations = 0;
  double final_step_norm = 0.0;
  double final_residual_norm = 0.0;
  Eigen::VectorXd values;
};

/// Parses a cache file; throws std::runtime_error on anything unexpected.
CachedRun load(const std::filesystem::path& file, const ReferenceKey& key, const Mesh& mesh) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open");
  std::string line;
  if (!std::getline(in, line) || line != kMagic) throw std::runtime_error("missing magic line");

  for (const auto& [name, value] : header_fields(key)) {
    if (!std::getline(in, line) || line != "# " + name + "=" + value) {
      throw std::runtime_error("header mismatch at '" + name + "'");
    }
  }
  CachedRun run;
  auto stat = [&](const std::string& name) {
    const std::string prefix = "# " + name + "=";
    if (!std::getline(in, line) || line.rfind(prefix, 0) != 0) {
      throw std::runtime_error("missing '" + name + "'");
    }
    return line.substr(prefix.size());
  };
  run.iterations = std::stoi(stat("iterations"));
  run.final_step_norm = parse_double(stat("final_step_norm"));
  run.final_residual_norm = parse_double(stat("final_residual_norm"));
  if (!std::getline(in, line) || line != "i,x_i,y_i") throw std::runtime_error("missing columns");

  const int n = mesh.size();
  run.values.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("truncated data");
    std::stringstream row(line);
    std::string idx, x, y;
    if (!std::getline(row, idx, ',') || !std::getline(row, x, ',') || !std::getline(row, y)) {
      throw std::runtime_error("malformed row " + std::to_string(i));
    }
    if (std::stoi(idx) != i) throw std::runtime_error("row index out of order");
    if (parse_double(x) != mesh.node(i)) throw std::runtime_error("node mismatch");
    const double v = parse_double(y);
    if (!std::isfinite(v)) throw std::runtime_error("non-finite value");
    run.values[i] = v;
  }
  if (std::getline(in, line) && !line.empty()) throw std::runtime_error("trailing data");
  if (run.values[0] != 0.0 || run.values[n] != 0.0) throw std::runtime_error("boundary values");
  return run;
}

void store(const std::filesystem::path& file, const ReferenceKey& key, const Solution& sol) {
  std::filesystem::create_directories(file.parent_path());
  const auto tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << kMagic << '\n';
    for (const auto& [name, value] : header_fields(key)) out << "# " << name << '=' << value << '\n';
    out << "# iterations=" << sol.iterations << '\n'
        << "# final_step_norm=" << g17(sol.final_step_norm) << '\n'
        << "# final_residual_norm=" << g17(sol.final_residual_norm) << '\n'
        << format_solution_csv(sol);
    if (!out) throw std::runtime_error("reference_cache: failed writing " + tmp);
  }
  std::filesystem::rename(tmp, file);
}

std::mutex& key_mutex(const std::string& key) {
  static std::mutex registry_guard;
  static std::map<std::string, std::unique_ptr<std::mutex>> registry;
  std::lock_guard lock(registry_guard);
  auto& slot = registry[key];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

}  // namespace

std::filesystem::path reference_cache_file(const std::filesystem::path& dir,
                                           const ReferenceKey& key) {
  std::string joined;
  for (const auto& [name, value] : header_fields(key)) joined += name + "=" + value + ";";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(joined)));
  return dir / ("ref-" + key.problem_id + "-N" + std::to_string(key.mesh.N) + "-" + buf + ".csv");
}

Solution reference_cache(const std::filesystem::path& dir, const Problem& problem,
                         const ReferenceKey& key, CacheStatus* status) {
  const auto file = reference_cache_file(dir, key);
  std::lock_guard lock(key_mutex(std::filesystem::absolute(file).string()));

  const Mesh mesh = build_mesh(key.mesh);
  CacheStatus outcome = CacheStatus::miss;
  if (std::filesystem::exists(file)) {
    try {
      CachedRun run = load(file, key, mesh);
      if (status) *status = CacheStatus::hit;
      return Solution{mesh, std::move(run.values), run.iterations, run.final_step_norm,
                      run.final_residual_norm, true, {}};
    } catch (const std::exception& ex) {
      std::cerr << "warning: discarding corrupt reference cache " << file << ": " << ex.what()
                << '\n';
      outcome = CacheStatus::corrupt;
    }
  }

  const auto sp = SchemeParams::make(key.gamma, key.q, key.mesh.epsilon);
  Solution sol = newton_solve(problem, mesh, sp, key.newton);
  store(file, key, sol);
  if (status) *status = outcome;
  return sol;
}

}  // namespace fitbvp
