#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "checks.hpp"
#include "fwb/eos.hpp"
#include "fwb/harness.hpp"

#ifndef FWB_CATALOG_DIR
#define FWB_CATALOG_DIR "catalog"
#endif

namespace {

using namespace fwb;

constexpr double kWbTol = 1e-12;
constexpr double kWbRuntime = 5.0;
constexpr double kHllLow = 1e-3;
constexpr double kHllHigh = 1e-2;
constexpr double kHllRuntime = 5.0;
constexpr double kEocTol = 0.25;
constexpr double kEocRuntime = 600.0;
constexpr double kEntropyTol = 1e-11;
constexpr double kHllReductionTol = 1e-14;
constexpr long kPsiSamples = 1000000;
constexpr double kPsiSmoothness = 1e-3;
constexpr long kIssPairs = 10000;
constexpr double kIssTol = 1e-12;
constexpr double kEpsilonOrder = 1.9;
constexpr double kTableEquivTol = 1e-6;
constexpr double kTableWbTol = 1e-10;
constexpr double kBackgroundTol = 1e-12;

constexpr CubicVariant kVariants[] = {CubicVariant::ideal, CubicVariant::vdw, CubicVariant::rk,
                                      CubicVariant::pr};

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

const std::vector<CaseSpec>& catalog() {
  static const std::vector<CaseSpec> all = load_catalog(FWB_CATALOG_DIR);
  return all;
}

CaseSpec find_case(const std::string& id) {
  for (const auto& c : catalog())
    if (c.id == id) return c;
  throw std::runtime_error("catalog case not found: " + id);
}

RunRecord run(const CaseSpec& spec, Outcome& out) {
  const RunRecord r = run_case(spec);
  if (!r.error.empty()) {
    out.pass = false;
    out.detail += " " + r.id + " error: " + r.error + ";";
  }
  for (const auto& o : r.orders) {
    if (!o.error.empty()) {
      out.pass = false;
      out.detail += " " + r.id + " order " + std::to_string(o.order) + " error: " + o.error + ";";
    }
  }
  return r;
}

Outcome well_balanced() {
  Outcome out;
  double worst = 0.0, slowest = 0.0;
  for (const char* id : {"wb-ideal", "wb-vdw", "wb-rk", "wb-pr"}) {
    CaseSpec c = find_case(id);
    c.orders = {1, 2, 3};
    const RunRecord r = run(c, out);
    for (const auto& o : r.orders) {
      worst = std::max(worst, o.norms.max());
      if (!(o.norms.max() <= kWbTol)) {
        out.pass = false;
        out.detail += " " + r.id + " order " + std::to_string(o.order) + " " + sci(o.norms.max()) + ";";
      }
    }
    slowest = std::max(slowest, r.wall_time);
    if (!(r.wall_time < kWbRuntime)) {
      out.pass = false;
      out.detail += " " + r.id + " took " + sci(r.wall_time) + " s;";
    }
  }
  out.detail = "worst L2 " + sci(worst) + " (tol " + sci(kWbTol) + "), slowest case " +
               sci(slowest) + " s;" + out.detail;
  return out;
}

Outcome hll_contrast() {
  Outcome out;
  CaseSpec c = find_case("hll-ideal");
  c.hll = true;
  const RunRecord r = run(c, out);
  if (!r.hll) {
    out.pass = false;
    out.detail = "no HLL result;" + out.detail;
    return out;
  }
  const double rho = r.hll->norms.rho;
  out.pass = out.pass && rho >= kHllLow && rho <= kHllHigh && r.wall_time < kHllRuntime;
  out.detail = "L2 density error " + sci(rho) + " (band [" + sci(kHllLow) + ", " + sci(kHllHigh) +
               "]), " + sci(r.wall_time) + " s;" + out.detail;
  return out;
}

Outcome convergence() {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  std::string rates;
  for (const char* id : {"eoc-ideal", "eoc-vdw", "eoc-rk", "eoc-pr"}) {
    CaseSpec c = find_case(id);
    c.orders = {1, 2, 3};
    c.grids = {16, 32, 64, 128, 256, 512, 1024};
    c.eoc_fit = 4;
    const RunRecord r = run(c, out);
    rates += std::string(" ") + id + " ";
    for (const auto& o : r.orders) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%.2f", o.eoc);
      rates += std::string(o.order > 1 ? "/" : "") + buf;
      if (!(std::abs(o.eoc - o.order) <= kEocTol)) out.pass = false;
    }
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!(elapsed < kEocRuntime)) out.pass = false;
  out.detail = "EOC FWB1/2/3:" + rates + " (tol " + sci(kEocTol) + "), " + sci(elapsed) + " s;" +
               out.detail;
  return out;
}

Outcome positivity() {
  Outcome out;
  double min_rho = std::numeric_limits<double>::infinity(), min_p = min_rho;
  for (const char* id : {"dr-ideal", "dr-vdw", "dr-rk", "dr-pr"}) {
    const RunRecord r = run(find_case(id), out);
    for (const auto& o : r.orders) {
      min_rho = std::min(min_rho, o.stats.min_rho);
      min_p = std::min(min_p, o.stats.min_p);
    }
  }
  out.pass = out.pass && min_rho > 0.0 && min_p > 0.0;
  out.detail = "min rho " + sci(min_rho) + ", min p " + sci(min_p) + ";" + out.detail;
  return out;
}

Outcome entropy() {
  Outcome out;
  double worst = 0.0;
  for (const char* id : {"sod-ideal", "sod-vdw", "sod-rk", "sod-pr"}) {
    CaseSpec c = find_case(id);
    c.orders = {1};
    c.checks["entropy_tol"] = {kEntropyTol};
    const RunRecord r = run(c, out);
    for (const auto& o : r.orders) {
      if (o.entropy.empty()) {
        out.pass = false;
        out.detail += std::string(" ") + id + " not monitored;";
      }
      for (const auto& rep : o.entropy) {
        worst = std::max(worst, rep.worst);
        if (rep.violations > 0 || !(rep.worst <= kEntropyTol)) {
          out.pass = false;
          out.detail += std::string(" ") + id + " eta " + to_string(rep.eta) + ": " +
                        std::to_string(rep.violations) + " cell-steps, worst " + sci(rep.worst) + ";";
        }
      }
    }
  }
  out.detail = "worst scaled increase " + sci(worst) + " (tol " + sci(kEntropyTol) + ");" + out.detail;
  return out;
}

Outcome hll_reduction() {
  Outcome out;
  double worst = 0.0;
  for (const char* id : {"sod-ideal", "sod-vdw", "sod-rk", "sod-pr", "dr-ideal", "dr-vdw", "dr-rk",
                         "dr-pr"}) {
    const checks::HllReduction r = checks::hll_reduction(find_case(id));
    worst = std::max(worst, r.worst);
    if (!(r.worst <= kHllReductionTol) || r.steps == 0) {
      out.pass = false;
      out.detail += std::string(" ") + id + " " + sci(r.worst) + ";";
    }
  }
  out.detail = "worst per-cell relative difference " + sci(worst) + " (tol " +
               sci(kHllReductionTol) + ");" + out.detail;
  return out;
}

Outcome psi_properties() {
  Outcome out;
  const checks::PsiSuite r = checks::psi_suite(kPsiSamples, 7);
  long failed = 0;
  for (long f : r.failures) failed += f;
  out.pass = r.samples >= kPsiSamples && failed == 0 && r.smoothness <= kPsiSmoothness;
  out.detail = std::to_string(r.samples) + " samples, failures i-iv " +
               std::to_string(r.failures[0]) + "/" + std::to_string(r.failures[1]) + "/" +
               std::to_string(r.failures[2]) + "/" + std::to_string(r.failures[3]) +
               ", worst junction jump " + sci(r.smoothness) + " (tol " + sci(kPsiSmoothness) + ")";
  if (!r.first_failure.empty()) out.detail += "; " + r.first_failure;
  return out;
}

Outcome interface_steady() {
  Outcome out;
  double worst = 0.0;
  for (const auto v : kVariants) {
    const CubicEos eos(CubicParams::defaults(v));
    const checks::IssReproduction r = checks::iss_reproduction(eos, kIssPairs, 11);
    worst = std::max(worst, r.worst);
    if (r.pairs < kIssPairs || !(r.worst <= kIssTol)) {
      out.pass = false;
      out.detail += " " + to_string(v) + " " + std::to_string(r.pairs) + " pairs, worst " +
                    sci(r.worst) + ";";
    }
  }
  out.detail = "worst relative difference " + sci(worst) + " over " + std::to_string(kIssPairs) +
               " pairs per EOS (tol " + sci(kIssTol) + ");" + out.detail;
  return out;
}

Outcome epsilon_consistency() {
  Outcome out;
  std::string slopes;
  for (const auto v : kVariants) {
    const CubicEos eos(CubicParams::defaults(v));
    const double rho0 = v == CubicVariant::pr ? 10.0 : 2.0;
    const double p0 = v == CubicVariant::vdw ? 20.0 : (v == CubicVariant::pr ? 15.0 : 5.0);
    const double amp = v == CubicVariant::pr ? 0.025 : 0.1;
    const checks::EpsilonOrder r = checks::epsilon_order(eos, rho0, p0, amp, 6);
    char buf[48];
    std::snprintf(buf, sizeof buf, " %s %.3f", to_string(v).c_str(), r.slope);
    slopes += buf;
    if (!(r.slope >= kEpsilonOrder)) out.pass = false;
  }
  out.detail = "order of eps/dx:" + slopes + " (min " + sci(kEpsilonOrder) + ")";
  return out;
}

Outcome tabulated() {
  Outcome out;
  CaseSpec c = find_case("wb-ideal-table");
  c.table_n = {512, 512};
  c.compare_analytic = true;
  const RunRecord r = run(c, out);
  double wb = 0.0, equiv = 0.0;
  for (const auto& o : r.orders) {
    wb = std::max(wb, o.norms.max());
    if (o.analytic_difference < 0.0) {
      out.pass = false;
      out.detail += " order " + std::to_string(o.order) + " not compared;";
    }
    equiv = std::max(equiv, o.analytic_difference);
  }
  out.pass = out.pass && wb <= kTableWbTol && equiv <= kTableEquivTol;
  out.detail = "WB L2 " + sci(wb) + " (tol " + sci(kTableWbTol) + "), table vs analytic " +
               sci(equiv) + " (tol " + sci(kTableEquivTol) + ");" + out.detail;
  return out;
}

Outcome perturbation() {
  Outcome out;
  CaseSpec c = find_case("gaussian-ideal-background");
  c.nu = 1e-4;
  const RunRecord r = run(c, out);
  double worst = 0.0;
  long cells = 0;
  for (const auto& o : r.orders) {
    if (o.background < 0.0 || o.background_cells == 0) {
      out.pass = false;
      out.detail += " order " + std::to_string(o.order) + " has no unreached cells;";
    }
    worst = std::max(worst, o.background);
    cells = std::max(cells, o.background_cells);
  }
  out.pass = out.pass && worst <= kBackgroundTol;
  out.detail = "background error " + sci(worst) + " in " + std::to_string(cells) +
               " unreached cells (tol " + sci(kBackgroundTol) + ");" + out.detail;
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"well-balanced preservation", well_balanced},
      {"non-well-balanced HLL contrast", hll_contrast},
      {"convergence order", convergence},
      {"positivity on double rarefactions", positivity},
      {"entropy stability on Sod tubes", entropy},
      {"HLL reduction without gravity", hll_reduction},
      {"psi property suite", psi_properties},
      {"interface well-balancedness", interface_steady},
      {"eps-term consistency", epsilon_consistency},
      {"tabulated EOS equivalence", tabulated},
      {"perturbation background fidelity", perturbation},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%-4s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
