#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fwb/errors.hpp"
#include "fwb/harness.hpp"

#ifndef FWB_CATALOG_DIR
#define FWB_CATALOG_DIR "catalog"
#endif

namespace {

void print_record(const fwb::RunRecord& r) {
  std::printf("%-28s %-5s %s%s\n", r.id.c_str(), r.passed ? "pass" : "FAIL",
              r.acceptance ? "[acceptance]" : "", r.surrogate ? "[surrogate]" : "");
  if (!r.error.empty()) std::printf("    error: %s\n", r.error.c_str());
  const auto show = [](const char* label, const fwb::OrderResult& o) {
    std::printf("    %s: L2 (rho %.3e, q %.3e, E %.3e)", label, o.norms.rho, o.norms.q, o.norms.E);
    if (!o.grid_cells.empty()) std::printf(" EOC %.3f", o.eoc);
    if (o.background >= 0.0) std::printf(" background %.3e in %ld cells", o.background, o.background_cells);
    if (o.amplitude_max > 0.0) std::printf(" amplitude %.3e (max %.3e)", o.amplitude_final, o.amplitude_max);
    if (o.analytic_difference >= 0.0) std::printf(" vs analytic %.3e", o.analytic_difference);
    std::printf(" steps %ld\n", o.stats.steps);
    if (!o.error.empty()) std::printf("      error: %s\n", o.error.c_str());
    for (const auto& f : o.failures) std::printf("      %s\n", f.c_str());
  };
  for (const auto& o : r.orders) show(("FWB" + std::to_string(o.order)).c_str(), o);
  if (r.hll) show("HLL ", *r.hll);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fully well-balanced finite-volume solver for the Euler equations with gravity"};
  app.require_subcommand(1);
  std::string catalog_dir = FWB_CATALOG_DIR;
  app.add_option("--catalog", catalog_dir, "Directory of *.case files")->capture_default_str();

  auto* run = app.add_subcommand("run", "Run the cases matching an id, glob filter or .case file");
  std::string filter;
  std::string out_dir;
  int jobs = 1;
  fwb::CaseOverrides ov;
  run->add_option("filter", filter, "Case id, comma-separated globs, or a .case file")->required();
  run->add_option("--out", out_dir, "Output directory for CSV and JSON artifacts");
  run->add_option("--jobs", jobs, "Cases run in parallel")->check(CLI::PositiveNumber);
  run->add_option("--order", ov.order, "Scheme order (1, 2 or 3)")->check(CLI::Range(1, 3));
  run->add_option("--cells", ov.cells, "Number of cells");
  run->add_option("--ctheta", ov.C_theta, "Detector constant C_theta");
  run->add_option("--lambda", ov.Lambda, "Wave-speed safety factor Lambda");
  run->add_option("--eos", ov.eos, "EOS variant (ideal, vdw, rk, pr)");
  run->add_option("--eos-table", ov.eos_table, "eostab v1 file used instead of the analytic EOS");

  auto* catalog = app.add_subcommand("catalog", "Inspect the case catalog");
  catalog->require_subcommand(1);
  auto* list = catalog->add_subcommand("list", "List the catalog cases");

  auto* eos = app.add_subcommand("eos", "Equation-of-state utilities");
  eos->require_subcommand(1);
  auto* gen = eos->add_subcommand("table-gen", "Sample an analytic EOS into an eostab v1 file");
  std::string variant, table_file;
  std::vector<double> rho_range{0.5, 4.0}, e_range{5.0, 50.0};
  std::vector<std::size_t> nodes{512, 512};
  gen->add_option("variant", variant, "ideal, vdw, rk or pr")->required();
  gen->add_option("file", table_file, "Output file")->required();
  gen->add_option("--rho", rho_range, "Density range")->expected(2)->capture_default_str();
  gen->add_option("--e", e_range, "Specific internal energy range")->expected(2)->capture_default_str();
  gen->add_option("--nodes", nodes, "Node counts in rho and e")->expected(2)->capture_default_str();

  auto* rep = app.add_subcommand("report", "Regenerate summary.json and summary.md from run records");
  std::string report_dir;
  rep->add_option("dir", report_dir, "Output directory of an earlier run")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      std::vector<fwb::CaseSpec> cases;
      if (filter.size() > 5 && filter.ends_with(".case")) {
        cases.push_back(fwb::load_case(filter));
      } else {
        cases = fwb::select_cases(fwb::load_catalog(catalog_dir), filter);
      }
      for (auto& c : cases) fwb::apply_overrides(c, ov);
      const fwb::CatalogSummary summary = fwb::run_catalog(cases, out_dir, jobs);
      for (const auto& r : summary.records) print_record(r);
      std::printf("%zu case(s); acceptance %s\n", summary.records.size(),
                  summary.acceptance_passed() ? "passed" : "FAILED");
      return summary.acceptance_passed() ? 0 : 1;
    }
    if (*list) {
      for (const auto& c : fwb::load_catalog(catalog_dir))
        std::printf("%-28s %-14s %-6s %s%s| %s\n", c.id.c_str(), fwb::to_string(c.kind).c_str(),
                    c.eos.c_str(), c.acceptance ? "[acceptance] " : "",
                    c.surrogate ? "[surrogate] " : "", c.table.c_str());
      return 0;
    }
    if (*gen) {
      fwb::CaseSpec spec;
      spec.eos = variant;
      const auto source = fwb::make_analytic_eos(spec);
      fwb::TabulatedEos::generate(*source, rho_range[0], rho_range[1], e_range[0], e_range[1],
                                  nodes[0], nodes[1])
          .save(table_file);
      std::printf("wrote %s (%zu x %zu)\n", table_file.c_str(), nodes[0], nodes[1]);
      return 0;
    }
    if (*rep) {
      const auto records = fwb::report(report_dir);
      bool ok = true;
      for (const auto& r : records) {
        print_record(r);
        ok = ok && (!r.acceptance || r.passed);
      }
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
