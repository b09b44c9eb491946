#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fwb/errors.hpp"
#include "fwb/harness.hpp"
#include "support.hpp"

namespace fwb {
namespace {

namespace fs = std::filesystem;

CaseSpec catalog_case(const std::string& id) {
  return load_case(fs::path(FWB_CATALOG_DIR) / (id + ".case"));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("fwb_test_" + name);
  fs::remove_all(d);
  return d;
}

const char* kMinimal = R"(# comment line
id = "mini"
table = "steady triplets"
kind = "well_balanced"
eos = "rk"
triplet = [1, -2.5, 12.5]  # q, s, H
t_final = 1/3
orders = [1, 3]
check.wb_tol = 1e-12
)";

TEST(CaseParser, ReadsMinimalCase) {
  const CaseSpec c = parse_case(kMinimal);
  EXPECT_EQ(c.id, "mini");
  EXPECT_EQ(c.kind, CaseKind::well_balanced);
  EXPECT_EQ(c.eos, "rk");
  EXPECT_DOUBLE_EQ(c.t_final, 1.0 / 3.0);
  EXPECT_EQ(c.orders, (std::vector<int>{1, 3}));
  EXPECT_EQ(c.triplet.q0, 1.0);
  EXPECT_EQ(c.triplet.s0, -2.5);
  EXPECT_EQ(c.triplet.H0, 12.5);
  EXPECT_EQ(c.checks.at("wb_tol"), std::vector<double>{1e-12});
  EXPECT_EQ(c.cells, 50);
}

TEST(CaseParser, RejectsMalformedInput) {
  const std::string base = kMinimal;
  EXPECT_THROW(parse_case(base + "bogus = 1\n"), ConfigError);
  EXPECT_THROW(parse_case(base + "cells = 10\ncells = 20\n"), ConfigError);
  EXPECT_THROW(parse_case(base + "cells = 1\n"), ConfigError);
  EXPECT_THROW(parse_case(base + "orders = [4]\n"), ConfigError);
  EXPECT_THROW(parse_case(base + "t_final = 1/0x\n"), ConfigError);
  EXPECT_THROW(parse_case("table = \"x\"\nt_final = 1\n"), ConfigError);
}

TEST(CaseParser, HashIgnoresLayout) {
  const CaseSpec a = parse_case(kMinimal);
  const CaseSpec b = parse_case(
      "t_final = 1/3\norders = [1,3]\nid = \"mini\"\n\n check.wb_tol = 1e-12\n"
      "eos = \"rk\"\ntable = \"steady triplets\"\nkind = \"well_balanced\"\n"
      "triplet = [1, -2.5, 12.5]\n");
  EXPECT_EQ(a.hash, b.hash);
  EXPECT_NE(a.hash, parse_case(std::string(kMinimal) + "cells = 60\n").hash);
}

TEST(Catalog, EveryCaseLoadsAndCitesItsTable) {
  const auto all = load_catalog(FWB_CATALOG_DIR);
  EXPECT_GE(all.size(), 30u);
  for (const auto& c : all) {
    EXPECT_FALSE(c.table.empty()) << c.id;
    EXPECT_EQ(c.origin.stem().string(), c.id);
  }
  for (std::size_t i = 1; i < all.size(); ++i) EXPECT_LT(all[i - 1].id, all[i].id);
}

TEST(Catalog, Selection) {
  EXPECT_TRUE(glob_match("wb-*", "wb-ideal"));
  EXPECT_TRUE(glob_match("sod-?dw", "sod-vdw"));
  EXPECT_FALSE(glob_match("wb-*", "eoc-ideal"));
  EXPECT_TRUE(glob_match("*", ""));
  const auto all = load_catalog(FWB_CATALOG_DIR);
  EXPECT_TRUE(select_cases(all, "").empty());
  const auto wb = select_cases(all, "wb-ideal,wb-vdw,wb-rk,wb-pr");
  EXPECT_EQ(wb.size(), 4u);
  EXPECT_EQ(select_cases(all, "eoc-*").size(), 4u);
}

TEST(Catalog, Overrides) {
  CaseSpec c = catalog_case("wb-ideal");
  const std::string before = c.hash;
  CaseOverrides o;
  o.order = 2;
  o.cells = 64;
  o.C_theta = 3.0;
  apply_overrides(c, o);
  EXPECT_EQ(c.orders, std::vector<int>{2});
  EXPECT_EQ(c.cells, 64);
  EXPECT_EQ(c.scheme.C_theta, 3.0);
  EXPECT_NE(c.hash, before);
}

TEST(ExactSolution, PointValue) {
  const ExactParams p;  // rho0 = 2, u0 = 0.25, p0 = 5, A = 0.25, k = 4
  const Primitive w = exact_solution(p, 0.0, 0.0);
  EXPECT_DOUBLE_EQ(w.rho, 2.0);
  EXPECT_DOUBLE_EQ(w.u, 0.25);
  EXPECT_NEAR(w.p, 5.0 + 2.0 * 0.25 / (4.0 * std::numbers::pi), 1e-15);
}

TEST(ExactSolution, ZeroAmplitude) {
  ExactParams p;
  p.A = 0.0;
  for (const double x : {0.0, 0.3, 0.9}) {
    const Primitive w = exact_solution(p, x, 0.2);
    EXPECT_EQ(w.rho, 2.0);
    EXPECT_NEAR(w.p, 5.0 - 2.0 * (x - 0.05), 1e-14);
  }
}

TEST(ExactSolution, SatisfiesMomentumBalance) {
  // d/dt (rho u) + d/dx (rho u^2 + p) = -rho dphi/dx with phi = x.
  const ExactParams p;
  const double h = 1e-5;
  const auto flux = [&](double x, double t) {
    const Primitive w = exact_solution(p, x, t);
    return w.rho * w.u * w.u + w.p;
  };
  for (const double x : {0.1, 0.37, 0.8}) {
    for (const double t : {0.0, 0.4}) {
      const double dq = (exact_solution(p, x, t + h).rho - exact_solution(p, x, t - h).rho) * p.u0 / (2 * h);
      const double df = (flux(x + h, t) - flux(x - h, t)) / (2 * h);
      EXPECT_NEAR(dq + df + exact_solution(p, x, t).rho, 0.0, 1e-8);
    }
  }
}

TEST(ExactSolution, CellAverageConvergesToPointValue) {
  const auto eos = testing::cubic(CubicVariant::ideal);
  const ExactParams p;
  const ConservedState avg = exact_cell_average(*eos, p, 0.3, 1e-4, 0.1);
  const ConservedState pt = to_conserved(*eos, exact_solution(p, 0.3, 0.1));
  EXPECT_LE(testing::rel_diff(avg, pt), 1e-8);
}

TEST(UnreachedCells, DiscreteCone) {
  std::vector<bool> support(21, false);
  support[10] = true;
  const auto first = unreached_cells(support, 3, 1);
  const auto third = unreached_cells(support, 1, 3);
  for (int i = 0; i < 21; ++i) {
    EXPECT_EQ(first[i], std::abs(i - 10) > 3) << i;
    EXPECT_EQ(third[i], std::abs(i - 10) > 6) << i;
  }
}

TEST(Gaussian, ZeroAmplitudeIsExactlySteady) {
  const CaseSpec c = gaussian_perturbation_case(catalog_case("wb-ideal"), 0.0);
  const EosPtr eos = make_eos(c);
  const SteadySetup s = steady_setup(*eos, c);
  const auto w = gaussian_perturbation(*eos, s.grid, s.cells, 0.0, 100.0, 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_EQ(testing::rel_diff(w[i], s.cells[i]), 0.0);
  CaseSpec shortened = c;
  shortened.t_final = 0.01;
  const RunRecord r = run_case(shortened);
  ASSERT_TRUE(r.error.empty()) << r.error;
  for (const auto& o : r.orders) {
    EXPECT_LE(o.eta_max, 1e-13);
    EXPECT_LE(o.norms.max(), 1e-12);
  }
}

TEST(Gaussian, TruncatedSupport) {
  const CaseSpec c = catalog_case("gaussian-ideal-background");
  const EosPtr eos = make_eos(c);
  const SteadySetup s = steady_setup(*eos, c);
  const auto w = gaussian_perturbation(*eos, s.grid, s.cells, 1e-4, 100.0, 0.2);
  for (int i = 0; i < s.grid.n_cells; ++i) {
    const bool inside = std::abs(s.grid.center(i) - 0.5) <= 0.2;
    EXPECT_EQ(testing::rel_diff(w[i], s.cells[i]) == 0.0, !inside) << i;
  }
}

TEST(BoundaryCase, Builder) {
  const CaseSpec c = boundary_perturbation_case(catalog_case("wb-pr"), 1e-8, 8.0, "left");
  EXPECT_EQ(c.kind, CaseKind::boundary_wave);
  EXPECT_EQ(c.cells, 512);
  EXPECT_EQ(c.side, "left");
  EXPECT_THROW(boundary_perturbation_case(c, 1e-8, 8.0, "top"), ConfigError);
}

/// Mean distance between sign changes of eta_u over x >= x_min in a field CSV.
double half_wavelength(const fs::path& csv, double x_min) {
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<double> xs;
  double prev_x = 0.0, prev = 0.0;
  bool have = false;
  while (std::getline(in, line)) {
    std::vector<double> v;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) v.push_back(std::stod(cell));
    const double x = v[0], eta_u = v[9];
    if (x >= x_min && have && (eta_u > 0.0) != (prev > 0.0))
      xs.push_back(prev_x + (x - prev_x) * prev / (prev - eta_u));
    prev_x = x;
    prev = eta_u;
    have = true;
  }
  if (xs.size() < 2) return NAN;
  return (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
}

TEST(BoundaryCase, DoublingKappaHalvesWavelength) {
  CaseSpec c = catalog_case("boundary-ideal");
  c.cells = 256;
  c.orders = {1};
  c.t_final = 0.6;
  c.nu = 1e-6;
  c.checks.clear();
  const fs::path dir = scratch_dir("kappa");
  double half[2];
  for (int k = 0; k < 2; ++k) {
    c.kappa = 8.0 * (k + 1);
    c.id = "kappa" + std::to_string(k);
    const RunRecord r = run_case(c, dir);
    ASSERT_TRUE(r.error.empty()) << r.error;
    half[k] = half_wavelength(dir / c.id / "o1.csv", 0.4);
  }
  fs::remove_all(dir);
  EXPECT_NEAR(half[1] / half[0], 0.5, 0.05);
}

TEST(Output, CsvIsDeterministic) {
  CaseSpec c = catalog_case("gaussian-ideal");
  c.t_final = 0.01;
  c.orders = {2};
  const fs::path a = scratch_dir("det_a"), b = scratch_dir("det_b");
  run_case(c, a);
  run_case(c, b);
  const std::string ca = slurp(a / c.id / "o2.csv");
  EXPECT_FALSE(ca.empty());
  EXPECT_EQ(ca, slurp(b / c.id / "o2.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Output, CsvHasSeventeenDigits) {
  const auto eos = testing::cubic(CubicVariant::ideal);
  const Grid1D grid(0.0, 1.0, 3);
  const std::vector<ConservedState> w{to_conserved(*eos, {1.0 / 3.0, 0.1, 1.0}),
                                      to_conserved(*eos, {2.0, 0.0, 1.0}),
                                      to_conserved(*eos, {1.0, 0.0, 1.0})};
  const fs::path dir = scratch_dir("csv");
  fs::create_directories(dir);
  write_field_csv(dir / "f.csv", *eos, grid, Potential::zero(), w);
  std::ifstream in(dir / "f.csv");
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header.substr(0, 14), "x,rho,u,p,q,E,");
  std::stringstream ss(row);
  std::string x, rho;
  std::getline(ss, x, ',');
  std::getline(ss, rho, ',');
  EXPECT_EQ(std::stod(rho), 1.0 / 3.0);
  fs::remove_all(dir);
}

TEST(Output, RecordJsonRoundtrip) {
  CaseSpec c = catalog_case("wb-vdw");
  c.t_final = 0.01;
  const RunRecord r = run_case(c);
  const std::string j = record_to_json(r);
  const RunRecord back = record_from_json(j);
  EXPECT_EQ(back.id, r.id);
  EXPECT_EQ(back.hash, r.hash);
  EXPECT_EQ(back.orders.size(), r.orders.size());
  EXPECT_EQ(record_to_json(back), j);
}

TEST(Output, SummaryAndReport) {
  CaseSpec c = catalog_case("wb-ideal");
  c.t_final = 0.01;
  const fs::path dir = scratch_dir("summary");
  const CatalogSummary s = run_catalog({c}, dir, 1);
  EXPECT_TRUE(s.acceptance_passed());
  EXPECT_TRUE(fs::exists(dir / "summary.json"));
  EXPECT_TRUE(fs::exists(dir / "summary.md"));
  const auto records = report(dir);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].id, "wb-ideal");
  fs::remove_all(dir);
}

TEST(Output, EmptySelectionPasses) {
  const CatalogSummary s = run_catalog({}, {}, 1);
  EXPECT_TRUE(s.records.empty());
  EXPECT_TRUE(s.acceptance_passed());
}

}  // namespace
}  // namespace fwb
