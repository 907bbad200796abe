// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fitbvp/harness.hpp"
#include "fitbvp/hyperbolic.hpp"
#include "fitbvp/scheme.hpp"
#include "fitbvp/solver.hpp"

using namespace fitbvp;

namespace {

double pow2(int k) { return std::ldexp(1.0, k); }

constexpr std::array<int, 8> kSizes{64, 128, 256, 512, 1024, 2048, 4096, 8192};

struct Tabulated {
  std::array<double, 8> error;
  std::array<double, 7> order;
};

// Expected E_N and Ord per epsilon exponent, N = 2^6 .. 2^13.
const std::map<int, Tabulated> kTable1 = {
    {-3, {{2.4133e-04, 6.0436e-05, 1.5095e-05, 3.7691e-06, 9.6433e-07, 2.4108e-07, 6.0271e-08, 1.5068e-08},
          {2.00, 2.00, 2.00, 1.97, 2.00, 2.00, 2.00}}},
    {-5, {{1.0062e-03, 2.5429e-04, 6.3802e-05, 1.5961e-05, 3.9909e-06, 9.9777e-07, 2.4945e-07, 6.2363e-08},
          {1.98, 1.99, 2.00, 2.00, 2.00, 2.00, 2.00}}},
    {-10, {{1.3294e-03, 3.4128e-04, 8.5934e-05, 2.1523e-05, 5.3833e-06, 1.3460e-06, 3.3651e-07, 8.4127e-08},
           {1.96, 1.99, 2.00, 2.00, 2.00, 2.00, 2.00}}},
};
const Tabulated kTable1Uniform = {
    {1.3243e-03, 3.3945e-04, 8.5413e-05, 2.1388e-05, 5.3493e-06, 1.3375e-06, 3.3438e-07, 8.3595e-08},
    {1.96, 1.99, 2.00, 2.00, 2.00, 2.00, 2.00}};

const std::map<int, Tabulated> kTable2 = {
    {-3, {{5.4721e-04, 1.3773e-04, 3.4477e-05, 8.6159e-06, 2.1478e-06, 5.3066e-07, 1.2635e-07, 3.0091e-08},
          {1.99, 2.00, 2.00, 2.00, 2.02, 2.07, 2.07}}},
    {-5, {{2.4570e-03, 6.3358e-04, 1.5962e-04, 3.9985e-05, 9.9654e-06, 2.4624e-06, 5.8629e-07, 1.3963e-07},
          {1.96, 1.99, 2.00, 2.00, 2.02, 2.07, 2.07}}},
    {-10, {{2.7149e-03, 7.1008e-04, 1.7971e-04, 4.5044e-05, 1.1237e-05, 2.7767e-06, 6.6115e-07, 1.5746e-07},
           {1.93, 1.98, 2.00, 2.00, 2.02, 2.07, 2.07}}},
    {-15, {{1.2281e-03, 3.5293e-04, 9.1947e-05, 2.3235e-05, 5.8267e-06, 1.4577e-06, 3.6449e-07, 9.1127e-08},
           {1.80, 1.94, 1.98, 2.00, 2.00, 2.00, 2.00}}},
    {-25, {{1.2276e-03, 3.5247e-04, 9.1749e-05, 2.3180e-05, 5.8140e-06, 1.4544e-06, 3.6366e-07, 9.0921e-08},
           {1.80, 1.94, 1.98, 2.00, 2.00, 2.00, 2.00}}},
};
const Tabulated kTable2Uniform = {
    {1.2276e-03, 3.5247e-04, 9.1749e-05, 2.3180e-05, 5.8140e-06, 1.4544e-06, 3.6367e-07, 9.0921e-08},
    {1.80, 1.94, 1.98, 2.00, 2.00, 2.00, 2.00}};

const Tabulated& tabulated(const std::map<int, Tabulated>& table, const Tabulated& uniform, int k) {
  const auto it = table.find(k);
  return it == table.end() ? uniform : it->second;
}

int failures = 0;

void report(int id, bool ok, const std::string& title, const std::string& detail) {
  std::printf("%s  criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

StudyConfig study(const std::string& problem, double gamma, double p, const std::vector<int>& exps) {
  StudyConfig cfg;
  cfg.problem_id = problem;
  cfg.gamma = gamma;
  cfg.q = 4.0;
  cfg.a = 1.0;
  cfg.p = p;
  cfg.sizes.assign(kSizes.begin(), kSizes.end());
  for (int k : exps) cfg.epsilons.push_back(pow2(k));
  cfg.reference_N = 16384;
  cfg.jobs = 0;
  return cfg;
}

const StudyCell& cell(const ConvergenceTable& t, double eps, int n) {
  for (const auto& c : t.rows) {
    if (c.epsilon == eps && c.N == n) return c;
  }
  throw std::logic_error("missing study cell");
}

struct MatchSummary {
  int cells = 0;
  int matched = 0;
  double worst_rel = 0.0;
  double worst_ord = 0.0;
  std::string worst_cell;
};

MatchSummary compare(const ConvergenceTable& t, const std::vector<int>& exps,
                     const std::map<int, Tabulated>& table, const Tabulated& uniform,
                     double rel_tol, double ord_tol) {
  MatchSummary s;
  for (int k : exps) {
    const Tabulated& ref = tabulated(table, uniform, k);
    for (std::size_t j = 0; j < kSizes.size(); ++j) {
      const StudyCell& c = cell(t, pow2(k), kSizes[j]);
      ++s.cells;
      bool ok = c.error.has_value();
      double rel = INFINITY, dord = 0.0;
      if (c.error) rel = std::abs(*c.error - ref.error[j]) / ref.error[j];
      ok = ok && rel <= rel_tol;
      if (j < ref.order.size()) {
        dord = c.order ? std::abs(*c.order - ref.order[j]) : INFINITY;
        ok = ok && dord <= ord_tol;
      }
      if (rel > s.worst_rel) {
        s.worst_rel = rel;
        s.worst_cell = "eps=2^" + std::to_string(k) + " N=" + std::to_string(kSizes[j]);
      }
      s.worst_ord = std::max(s.worst_ord, dord);
      if (ok) ++s.matched;
    }
  }
  return s;
}

std::string describe(const MatchSummary& s) {
  return std::to_string(s.matched) + "/" + std::to_string(s.cells) + " cells match; worst E_N rel " +
         fmt("%.3g", s.worst_rel) + " at " + s.worst_cell + ", worst |dOrd| " + fmt("%.3g", s.worst_ord);
}

Eigen::VectorXd random_state(int n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd y(n + 1);
  for (int i = 0; i <= n; ++i) y[i] = u(rng);
  y[0] = 0.0;
  y[n] = 0.0;
  return y;
}

struct Case {
  Problem problem;
  double gamma;
  double p;
};

std::vector<Case> both_examples() { return {{make_example1(), 1.0, 0.4}, {make_example2(), 4.0, 0.3}}; }

}  // namespace

int main() {
  const std::vector<int> t1_exps{-5, -10, -15, -25, -30, -35, -40, -45};
  const std::vector<int> t2_exps{-10, -15, -25, -30, -35, -40, -45};

  const ConvergenceTable t1 = run_convergence_study(study("example1", 1.0, 0.4, t1_exps));
  {
    const auto s = compare(t1, t1_exps, kTable1, kTable1Uniform, 0.01, 0.02);
    report(1, s.matched == s.cells && !t1.any_failed(), "table 1 reproduction", describe(s));
  }

  const ConvergenceTable t2 = run_convergence_study(study("example2", 4.0, 0.3, t2_exps));
  {
    const auto s = compare(t2, t2_exps, kTable2, kTable2Uniform, 0.02, 0.03);
    report(2, s.matched == s.cells && !t2.any_failed(), "table 2 reproduction", describe(s));
  }

  {
    const ConvergenceTable c1 = run_convergence_study(study("example1", 1.0, 0.4, {-3}));
    const ConvergenceTable c2 = run_convergence_study(study("example2", 4.0, 0.3, {-3, -5}));
    bool ok = !c1.any_failed() && !c2.any_failed();
    int in_band = 0, total = 0;
    std::string detail;
    for (const auto* t : {&c1, &c2}) {
      for (const auto& c : t->rows) {
        ok = ok && c.clamped;
        if (c.N < 256 || c.N == kSizes.back()) continue;
        ++total;
        const bool good = c.order && *c.order >= 1.8 && *c.order <= 2.1;
        if (good) {
          ++in_band;
        } else if (detail.size() < 200) {
          detail += "; " + std::string(t == &c1 ? "ex1" : "ex2") + " eps=" + format_epsilon(c.epsilon) +
                    " N=" + std::to_string(c.N) +
                    (c.order ? " Ord=" + fmt("%.3f", *c.order)
                             : " E_N=" + (c.error ? fmt("%.3g", *c.error) : std::string("failed")));
        }
      }
    }
    ok = ok && in_band == total;
    report(3, ok, "clamped columns, Ord in [1.8, 2.1] for N >= 2^8",
           std::to_string(in_band) + "/" + std::to_string(total) + " in band" + detail);
  }

  {
    int in_band = 0;
    double lo = INFINITY, hi = -INFINITY;
    for (int k : t1_exps) {
      const StudyCell& c = cell(t1, pow2(k), 2048);
      if (c.order) {
        lo = std::min(lo, *c.order);
        hi = std::max(hi, *c.order);
      }
      if (c.order && *c.order >= 1.98 && *c.order <= 2.08) ++in_band;
    }
    report(4, in_band == static_cast<int>(t1_exps.size()), "order 2 between N=2^11 and 2^12",
           std::to_string(in_band) + "/" + std::to_string(t1_exps.size()) + " in [1.98, 2.08]; Ord range [" +
               fmt("%.3g", lo) + ", " + fmt("%.3g", hi) + "]");
  }

  {
    std::vector<double> e;
    for (int k : {-15, -25, -35, -45}) {
      const StudyCell& c = cell(t1, pow2(k), 1024);
      if (c.error) e.push_back(*c.error);
    }
    bool ok = e.size() == 4;
    double spread = 0.0;
    if (ok) {
      const auto [mn, mx] = std::minmax_element(e.begin(), e.end());
      spread = (*mx - *mn) / std::abs(*mx);
      char a[32], b[32];
      for (double v : e) {
        std::snprintf(a, sizeof a, "%.3e", v);
        std::snprintf(b, sizeof b, "%.3e", e.front());
        ok = ok && std::string(a) == b && v > 0.0;
      }
    }
    report(5, ok, "eps-uniform E_N at N=2^10 to 4 significant digits",
           "E_N = " + (e.empty() ? std::string("n/a") : fmt("%.4e", e.front())) + ", relative spread " +
               fmt("%.3g", spread) +
               (!e.empty() && e.front() < 1e-12 ? ", errors are at round-off level" : ""));
  }

  {
    bool ok = true;
    std::string detail;
    const double eps = pow2(-45);
    for (const auto& c : both_examples()) {
      const Mesh mesh = build_mesh({eps, c.p, 1.0, 8192});
      const auto sp = SchemeParams::make(c.gamma, 4.0, eps);
      const DiscreteOperator op(c.problem, mesh, sp);
      const auto& co = op.coefficients();
      bool finite = co.a.allFinite() && co.d.allFinite() && co.delta_d.allFinite();
      const Eigen::VectorXd guess = Eigen::VectorXd::Constant(8193, 0.5);
      finite = finite && op.residual(guess).allFinite();
      const auto H = op.jacobian(guess);
      finite = finite && H.sub.allFinite() && H.diag.allFinite() && H.sup.allFinite();
      try {
        const Solution sol = newton_solve(c.problem, mesh, sp);
        finite = finite && sol.values.allFinite() && op.residual(sol.values).allFinite();
        const auto Hs = op.jacobian(sol.values);
        finite = finite && Hs.sub.allFinite() && Hs.diag.allFinite() && Hs.sup.allFinite();
        detail += c.problem.name + ": " + std::to_string(sol.iterations) + " Newton steps; ";
      } catch (const std::exception& ex) {
        finite = false;
        detail += c.problem.name + ": " + ex.what() + "; ";
      }
      ok = ok && finite;
    }
    report(6, ok, "finite coefficients, residuals, Jacobians and solutions at eps=2^-45, N=2^13", detail);
  }

  {
    std::mt19937_64 rng(20240601);
    int held = 0, total = 0;
    double worst = 0.0;
    for (const auto& c : both_examples()) {
      const double eps = pow2(-20);
      const Mesh mesh = build_mesh({eps, c.p, 1.0, 128});
      const DiscreteOperator op(c.problem, mesh, SchemeParams::make(c.gamma, 4.0, eps));
      for (int trial = 0; trial < 100; ++trial) {
        const Eigen::VectorXd w = random_state(128, c.problem.box.lower, c.problem.box.upper, rng);
        const Eigen::VectorXd v = random_state(128, c.problem.box.lower, c.problem.box.upper, rng);
        const double lhs = (w - v).lpNorm<Eigen::Infinity>();
        const double rhs = (op.residual(w) - op.residual(v)).lpNorm<Eigen::Infinity>() / c.problem.m;
        worst = std::max(worst, lhs / rhs);
        ++total;
        if (lhs <= rhs) ++held;
      }
    }
    report(7, held == total, "stability inequality on random pairs",
           std::to_string(held) + "/" + std::to_string(total) + " pairs; max ratio " + fmt("%.4f", worst));
  }

  {
    std::mt19937_64 rng(7);
    double worst = 0.0;
    for (const auto& c : both_examples()) {
      for (int k : {-10, -20}) {
        const int n = 128;
        const Mesh mesh = build_mesh({pow2(k), c.p, 1.0, n});
        const DiscreteOperator op(c.problem, mesh, SchemeParams::make(c.gamma, 4.0, pow2(k)));
        for (int trial = 0; trial < 5; ++trial) {
          const Eigen::VectorXd y = random_state(n, c.problem.box.lower, c.problem.box.upper, rng);
          const Eigen::MatrixXd J = op.jacobian(y).to_dense();
          for (int j = 0; j <= n; ++j) {
            const double h = 1e-6 * std::max(1.0, std::abs(y[j]));
            Eigen::VectorXd plus = y, minus = y;
            plus[j] += h;
            minus[j] -= h;
            const Eigen::VectorXd col = (op.residual(plus) - op.residual(minus)) / (2.0 * h);
            for (int i = 0; i <= n; ++i) {
              const double scale = J.row(i).lpNorm<Eigen::Infinity>();
              worst = std::max(worst, std::abs(J(i, j) - col[i]) / scale);
            }
          }
        }
      }
    }
    report(8, worst <= 1e-5, "Jacobian against finite differences, eps in {2^-10, 2^-20}, N=2^7",
           "max row-relative deviation " + fmt("%.3g", worst));
  }

  {
    std::mt19937_64 rng(11);
    double worst1 = 0.0, min2 = INFINITY;
    bool pattern = true;
    for (int k : {-5, -10, -20, -30, -45}) {
      const int n = 128;
      {
        const Problem p = make_example1();
        const Mesh mesh = build_mesh({pow2(k), 0.4, 1.0, n});
        const auto sp = SchemeParams::make(1.0, 4.0, pow2(k));
        for (int trial = 0; trial < 5; ++trial) {
          const auto r = mmatrix_check(jacobian(p, mesh, sp, random_state(n, -2.0, 2.0, rng)), sp, p.m);
          pattern = pattern && r.sign_pattern_ok();
          for (int i = 1; i < n; ++i) worst1 = std::max(worst1, std::abs(r.margins[i] - 6.0) / 6.0);
        }
      }
      {
        const Problem p = make_example2();
        const Mesh mesh = build_mesh({pow2(k), 0.3, 1.0, n});
        const auto sp = SchemeParams::make(4.0, 4.0, pow2(k));
        for (int trial = 0; trial < 5; ++trial) {
          const auto r = mmatrix_check(jacobian(p, mesh, sp, random_state(n, 0.0, 1.0, rng)), sp, p.m);
          pattern = pattern && r.sign_pattern_ok();
          min2 = std::min(min2, r.min_margin);
        }
      }
    }
    report(9, pattern && worst1 <= 1e-10 && min2 >= 6.0 - 1e-8, "dominance margins",
           "example1 max |margin-6|/6 = " + fmt("%.3g", worst1) + ", example2 min margin = " +
               fmt("%.12g", min2) + (pattern ? "" : ", sign pattern violated"));
  }

  {
    std::vector<double> steps, jumps;
    for (int n = 64; n <= 4096; n *= 2) {
      const auto r = mesh_diagnostics(build_mesh({pow2(-20), 0.4, 1.0, n}));
      steps.push_back(r.max_scaled_step);
      jumps.push_back(r.max_scaled_step_jump);
    }
    const auto ratio = [](const std::vector<double>& v) {
      const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
      return *mx / *mn;
    };
    const double rs = ratio(steps), rj = ratio(jumps);
    report(10, rs < 4.0 && rj < 4.0, "mesh diagnostics bounded for N = 2^6..2^12",
           "max N h spread x" + fmt("%.3f", rs) + ", max N^2 |dh| spread x" + fmt("%.3f", rj));
  }

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
