#include <gtest/gtest.h>

#include <cmath>

#include "fwb/diagnostics.hpp"
#include "fwb/errors.hpp"
#include "fwb/harness.hpp"
#include "support.hpp"

namespace fwb {
namespace {

using testing::cubic;
using testing::kVariants;
using testing::Sampler;

CaseSpec catalog_case(const std::string& id) {
  return load_case(std::filesystem::path(FWB_CATALOG_DIR) / (id + ".case"));
}

TEST(ErrorNorms, ClosedForms) {
  std::vector<ConservedState> a(40, {1.0, 2.0, 3.0});
  EXPECT_EQ(error_norms(a, a, 0.025).max(), 0.0);
  auto b = a;
  b[7].q += 0.3;
  const ErrorNorms n = error_norms(b, a, 0.025);
  EXPECT_EQ(n.rho, 0.0);
  EXPECT_NEAR(n.q, std::sqrt(0.025) * 0.3, 1e-16);
  EXPECT_THROW(error_norms(a, std::vector<ConservedState>(39), 0.025), ConfigError);
}

TEST(Eoc, Slopes) {
  const std::vector<int> n{16, 32, 64, 128};
  std::vector<double> e2, e0;
  for (const int k : n) {
    e2.push_back(3.0 / (double(k) * k));
    e0.push_back(0.1);
  }
  EXPECT_NEAR(eoc(e2, n), 2.0, 1e-12);
  EXPECT_NEAR(eoc(e0, n), 0.0, 1e-12);
  EXPECT_THROW(eoc({1.0}, {16}), ConfigError);
  EXPECT_THROW(eoc({1.0, 0.0}, {16, 32}), ConfigError);
}

TEST(EntropyFunctions, AdmissibleShapes) {
  for (const auto f : {EntropyFunction::linear, EntropyFunction::exp_tenth}) {
    for (const double s : {-5.0, 0.0, 3.0}) {
      EXPECT_GT(eta_d1(f, s), 0.0);
      EXPECT_GE(eta_d2(f, s), 0.0);
      const double h = 1e-5;
      EXPECT_NEAR((eta(f, s + h) - eta(f, s - h)) / (2 * h), eta_d1(f, s), 1e-8);
    }
  }
}

TEST(Convexity, IdealGasCertifiedEverywhere) {
  const auto eos = cubic(CubicVariant::ideal);
  Sampler rng(41);
  for (int k = 0; k < 10000; ++k) {
    const ConservedState w = rng.state_mach(*eos, 3.0);
    const double s = eos->entropy(1.0 / w.rho, w.internal_energy());
    for (const auto f : {EntropyFunction::linear, EntropyFunction::exp_tenth}) {
      const ConvexityReport r = convexity_check(*eos, w, eta_d1(f, s), eta_d2(f, s));
      ASSERT_TRUE(r.certified()) << r.label();
    }
  }
}

TEST(Convexity, SignInspection) {
  // eta' = 1, eta'' = 0: each condition is the sign of its eta' bracket.
  const auto eos = cubic(CubicVariant::rk);
  Sampler rng(42);
  for (int k = 0; k < 1000; ++k) {
    const ConservedState w = rng.state_mach(*eos, 1.0);
    const ConvexityReport r = convexity_check(*eos, w, 1.0, 0.0);
    for (int c = 0; c < 3; ++c) EXPECT_EQ(r.holds[c], r.bracket[c][0] >= 0.0);
  }
}

TEST(Convexity, AttractionDominatedVdwStateIsReportedNotThrown) {
  const auto eos = cubic(CubicVariant::vdw);
  Sampler rng(43);
  int uncertified = 0;
  for (int k = 0; k < 2000; ++k) {
    const ConservedState w = rng.state_mach(*eos, 0.5);
    const ConvexityReport r = convexity_check(*eos, w, 1.0, 0.0);
    if (!r.certified()) {
      ++uncertified;
      EXPECT_FALSE(r.holds[r.first_failing]);
      for (int c = 0; c < r.first_failing; ++c) EXPECT_TRUE(r.holds[c]);
      EXPECT_FALSE(r.label().empty());
    }
  }
  EXPECT_GT(uncertified, 0);
}

/// Smallest leading minor of the diagonally normalized finite-difference
/// Hessian of U(rho, q, E) = rho eta(s).
double hessian_min_minor(const Eos& eos, const ConservedState& w, EntropyFunction f) {
  const auto U = [&](const ConservedState& v) {
    return v.rho * eta(f, eos.entropy(1.0 / v.rho, v.internal_energy()));
  };
  double H[3][3];
  double h[3];
  for (int i = 0; i < 3; ++i) h[i] = 1e-4 * std::max(std::abs(w[i]), w.rho);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      ConservedState pp = w, pm = w, mp = w, mm = w;
      pp[i] += h[i], pp[j] += h[j];
      pm[i] += h[i], pm[j] -= h[j];
      mp[i] -= h[i], mp[j] += h[j];
      mm[i] -= h[i], mm[j] -= h[j];
      H[i][j] = (U(pp) - U(pm) - U(mp) + U(mm)) / (4 * h[i] * h[j]);
    }
  }
  for (int i = 0; i < 3; ++i)
    if (!(H[i][i] > 0.0)) return H[i][i];
  double N[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) N[i][j] = H[i][j] / std::sqrt(H[i][i] * H[j][j]);
  const double m2 = 1.0 - N[0][1] * N[1][0];
  const double m3 = N[0][0] * (N[1][1] * N[2][2] - N[1][2] * N[2][1]) -
                    N[0][1] * (N[1][0] * N[2][2] - N[1][2] * N[2][0]) +
                    N[0][2] * (N[1][0] * N[2][1] - N[1][1] * N[2][0]);
  return std::min(m2, m3);
}

TEST(Convexity, CertifiedStatesHavePositiveHessian) {
  for (const auto v : kVariants) {
    const auto eos = cubic(v);
    Sampler rng(44);
    int certified = 0;
    for (int k = 0; k < 2000; ++k) {
      const ConservedState w = rng.state_mach(*eos, 1.0);
      const double s = eos->entropy(1.0 / w.rho, w.internal_energy());
      for (const auto f : {EntropyFunction::linear, EntropyFunction::exp_tenth}) {
        if (!convexity_check(*eos, w, eta_d1(f, s), eta_d2(f, s)).certified()) continue;
        ++certified;
        EXPECT_GT(hessian_min_minor(*eos, w, f), -1e-4) << to_string(v);
      }
    }
    EXPECT_GT(certified, 0) << to_string(v);
  }
}

TEST(PlainHll, ConstantStateUnchanged) {
  const auto eos = cubic(CubicVariant::pr);
  Solver solver(eos, Potential::zero(), Grid1D(0.0, 1.0, 12), SchemeConfig{}, {});
  const std::vector<ConservedState> w(12, to_conserved(*eos, {10.0, 0.2, 15.0}));
  const auto next = plain_hll_step(solver, w, solver.compute_dt(w, 0.0), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_LE(testing::rel_diff(next[i], w[i]), 1e-15);
}

TEST(PlainHll, NotWellBalanced) {
  const CaseSpec spec = catalog_case("wb-ideal");
  const EosPtr eos = make_eos(spec);
  const SteadySetup setup = steady_setup(*eos, spec);
  Solver solver(eos, make_potential(spec), setup.grid, spec.scheme, setup.bc);
  const auto r = run_plain_hll(solver, setup.cells, 0.1);
  EXPECT_GT(error_norms(r.w, setup.cells, setup.grid.dx()).rho, 1e-6);
}

TEST(EntropyMonitor, SteadyRunHasNoViolations) {
  const CaseSpec spec = catalog_case("wb-vdw");
  const EosPtr eos = make_eos(spec);
  const SteadySetup setup = steady_setup(*eos, spec);
  Solver solver(eos, make_potential(spec), setup.grid, spec.scheme, setup.bc);
  long checked = 0;
  double worst = -INFINITY;
  solver.run(setup.cells, 0.05, [&](const StepRecord& s) {
    for (const auto f : {EntropyFunction::linear, EntropyFunction::exp_tenth}) {
      const EntropyReport r =
          entropy_monitor(*eos, *s.before, *s.after, *s.interfaces, s.dt, setup.grid.dx(), f, 1e-12);
      EXPECT_EQ(r.violations, 0);
      checked += r.cells_checked;
      worst = std::max(worst, r.worst);
    }
  });
  EXPECT_GT(checked, 0);
  EXPECT_LE(worst, 1e-12);
}

TEST(EntropyMonitor, IdealSodIsEntropyStable) {
  const RunRecord r = run_case(catalog_case("sod-ideal"));
  EXPECT_TRUE(r.passed) << r.error;
  ASSERT_FALSE(r.orders.empty());
  EXPECT_EQ(r.orders[0].order, 1);
  EXPECT_GT(r.orders[0].stats.entropy_checked_cells, 0);
  EXPECT_EQ(r.orders[0].stats.entropy_violations, 0);
}

}  // namespace
}  // namespace fwb
