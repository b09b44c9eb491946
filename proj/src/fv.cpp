#include "fwb/fv.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

#include "fwb/errors.hpp"

namespace fwb {

std::vector<ConservedState> apply_boundary(const std::vector<ConservedState>& cells,
                                           const BoundaryConditions& bc, const Grid1D& grid,
                                           double t) {
  const int n = static_cast<int>(cells.size());
  std::vector<ConservedState> ext(n + 2 * kGhostCells);
  std::copy(cells.begin(), cells.end(), ext.begin() + kGhostCells);

  const auto fill = [&](const BoundarySide& side, bool left) {
    for (int g = 0; g < kGhostCells; ++g) {
      const int cell = left ? -1 - g : n + g;
      ConservedState& ghost = ext[cell + kGhostCells];
      switch (side.kind) {
        case BoundaryKind::neumann:
          ghost = left ? cells.front() : cells.back();
          break;
        case BoundaryKind::exact:
          ghost = side.exact(grid.center(cell), t);
          break;
        case BoundaryKind::dirichlet_steady:
          ghost = side.steady[g];
          break;
        case BoundaryKind::perturbed_momentum:
          ghost = side.steady[g];
          ghost.q = side.q0 * (1.0 + side.nu * std::sin(side.kappa * std::numbers::pi * t));
          break;
      }
    }
  };
  fill(bc.left, true);
  fill(bc.right, false);
  return ext;
}

std::pair<double, double> min_rho_p(const Eos& eos, const std::vector<ConservedState>& w) {
  double rmin = w.empty() ? 0.0 : w.front().rho;
  double pmin = w.empty() ? 0.0 : pressure_of(eos, w.front());
  for (const auto& c : w) {
    rmin = std::min(rmin, c.rho);
    pmin = std::min(pmin, pressure_of(eos, c));
  }
  return {rmin, pmin};
}

Solver::Solver(EosPtr eos, Potential potential, Grid1D grid, SchemeConfig config,
               BoundaryConditions bc)
    : eos_(std::move(eos)),
      potential_(std::move(potential)),
      grid_(grid),
      config_(config),
      bc_(std::move(bc)) {
  if (config_.order < 1 || config_.order > 3) throw ConfigError("scheme order must be 1, 2 or 3");
  if (!(config_.cfl > 0.0 && config_.cfl <= 0.5)) throw ConfigError("cfl must lie in (0, 0.5]");
  if (!(config_.Lambda >= 1.0)) throw ConfigError("Lambda must be at least 1");
  if (!(config_.C_theta > 0.0)) throw ConfigError("C_theta must be positive");
  phi_ext_.resize(grid_.n_cells + 2 * kGhostCells);
  for (int k = 0; k < static_cast<int>(phi_ext_.size()); ++k)
    phi_ext_[k] = potential_(grid_.center(k - kGhostCells));
}

DetectorRefs Solver::detector_refs_from(const std::vector<ConservedState>& w) const {
  DetectorRefs r;
  for (int i = 0; i < static_cast<int>(w.size()); ++i) {
    const InterfaceSide s = describe_side(*eos_, w[i], phi_ext_[i + kGhostCells]);
    r.q = std::max(r.q, std::abs(w[i].q));
    r.H = std::max(r.H, std::abs(s.h + s.phi));
    r.s = std::max(r.s, std::abs(s.s));
  }
  return r;
}

std::vector<InterfaceSide> Solver::describe_all(const std::vector<ConservedState>& ext) const {
  std::vector<InterfaceSide> sides(ext.size());
  for (std::size_t k = 0; k < ext.size(); ++k) {
    try {
      sides[k] = describe_side(*eos_, ext[k], phi_ext_[k]);
    } catch (const DomainError& err) {
      throw PositivityLoss(std::string("inadmissible state: ") + err.what(),
                           static_cast<long>(k) - kGhostCells);
    }
  }
  return sides;
}

void Solver::check_admissible(const std::vector<ConservedState>& w, const char* where) const {
  for (std::size_t i = 0; i < w.size(); ++i) {
    const ConservedState& c = w[i];
    if (!(c.rho > 0.0) || !eos_->admissible(1.0 / c.rho, c.internal_energy()))
      throw PositivityLoss(std::string(where) + ": inadmissible state in cell " + std::to_string(i),
                           static_cast<long>(i));
  }
}

double Solver::max_wave_speed(const std::vector<ConservedState>& w, double t) const {
  const auto ext = apply_boundary(w, bc_, grid_, t);
  double vmax = 0.0;
  for (std::size_t k = 1; k + 1 < ext.size(); ++k) {
    const ConservedState& c = ext[k];
    const ThermoState th = eos_->thermo(1.0 / c.rho, c.internal_energy());
    vmax = std::max(vmax, std::abs(c.q / c.rho) + th.c);
  }
  return config_.Lambda * vmax;
}

double Solver::compute_dt(const std::vector<ConservedState>& w, double t) const {
  const double lambda = max_wave_speed(w, t);
  if (!(lambda > 0.0)) throw DomainError("compute_dt: nonpositive wave speed");
  return config_.cfl * grid_.dx() / lambda;
}

std::vector<double> Solver::detector(const std::vector<InterfaceSide>& sides, int order) const {
  const int n = grid_.n_cells;
  const double floor = config_.C_theta * std::pow(grid_.dx(), order + 1);
  std::vector<double> theta(n + 3, 0.0);
  for (int j = 0; j < n + 3; ++j) {
    const InterfaceSide& L = sides[j];
    const InterfaceSide& R = sides[j + 1];
    const double e = std::abs(R.w.q - L.w.q) / refs_.q +
                     std::abs((R.h + R.phi) - (L.h + L.phi)) / refs_.H +
                     std::abs(R.s - L.s) / refs_.s;
    theta[j] = e < 1e-12 ? 0.0 : e / (e + floor);
  }
  return theta;
}

namespace {

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

/// Limited third-order increment from the cell value towards the face
/// across `d_face`, with `d_back` the difference on the other side.
double lim_o3(double d_back, double d_face) {
  if (d_face == 0.0) return 0.0;
  const double th = d_back / d_face;
  const double phi3 = (2.0 + th) / 3.0;
  const double phi = std::max(0.0, std::min(phi3, std::max(-0.5 * th, std::min({2.0 * th, phi3, 1.6}))));
  return 0.5 * phi * d_face;
}

}  // namespace

Solver::Traces Solver::reconstruct(const std::vector<ConservedState>& ext,
                                   const std::vector<InterfaceSide>& sides, int order) {
  const int n = grid_.n_cells;
  Traces tr;
  const std::vector<double> face_theta = detector(sides, order);
  tr.theta.assign(n + 2, 0.0);
  tr.minus.resize(n + 2);
  tr.plus.resize(n + 2);
  const double dx = grid_.dx();
  for (int m = 0; m < n + 2; ++m) {
    const int k = m + 1;
    const ConservedState& w = ext[k];
    // Both traces at a face share that face's weight, so neighbouring
    // cells blend consistently where the detector switches on.
    const double theta_lo = face_theta[k - 1];
    const double theta_hi = face_theta[k];
    tr.theta[m] = std::max(theta_lo, theta_hi);
    if (tr.theta[m] == 0.0) {
      tr.minus[m] = tr.plus[m] = w;
      continue;
    }
    ConservedState lo = w, hi = w;
    for (std::size_t c = 0; c < 3; ++c) {
      const double dm = w[c] - ext[k - 1][c];
      const double dp = ext[k + 1][c] - w[c];
      double inc_lo, inc_hi;
      const double scale = config_.extremum_ratio * dx * comp_refs_[c];
      const bool smooth = dm * dm + dp * dp <= scale * scale;
      if (order == 2) {
        // Minmod away from smooth data; smooth regions keep the central slope.
        const double sigma = smooth ? 0.5 * (dm + dp) : minmod(dm, dp);
        inc_lo = -0.5 * sigma;
        inc_hi = 0.5 * sigma;
      } else {
        if (smooth) {
          inc_lo = -(2.0 * dm + dp) / 6.0;
          inc_hi = (2.0 * dp + dm) / 6.0;
        } else {
          inc_lo = -lim_o3(dp, dm);
          inc_hi = lim_o3(dm, dp);
        }
      }
      lo[c] = w[c] + theta_lo * inc_lo;
      hi[c] = w[c] + theta_hi * inc_hi;
    }
    const auto ok = [&](const ConservedState& s) {
      return s.rho > 0.0 && eos_->admissible(1.0 / s.rho, s.internal_energy());
    };
    if (ok(lo) && ok(hi)) {
      tr.minus[m] = lo;
      tr.plus[m] = hi;
    } else {
      tr.minus[m] = tr.plus[m] = w;
      tr.theta[m] = 0.0;
      ++reverted_;
    }
  }
  return tr;
}

std::vector<ConservedState> Solver::rhs(const std::vector<ConservedState>& w, double t, int order,
                                        std::vector<InterfaceSolution>* interfaces) {
  const int n = grid_.n_cells;
  const double dx = grid_.dx();
  const auto ext = apply_boundary(w, bc_, grid_, t);
  const auto sides = describe_all(ext);

  // Face sides of cells -1..n, index m <-> extended cell m + 1.
  std::vector<InterfaceSide> minus(n + 2), plus(n + 2);
  Traces tr;
  if (order == 1) {
    for (int m = 0; m < n + 2; ++m) minus[m] = plus[m] = sides[m + 1];
  } else {
    tr = reconstruct(ext, sides, order);
    for (int m = 0; m < n + 2; ++m) {
      if (tr.theta[m] == 0.0) {
        minus[m] = plus[m] = sides[m + 1];
      } else {
        minus[m] = describe_side(*eos_, tr.minus[m], phi_ext_[m + 1]);
        plus[m] = describe_side(*eos_, tr.plus[m], phi_ext_[m + 1]);
      }
    }
  }

  // Fan form: the sources enter through the intermediate states, so an
  // interface at equilibrium contributes exactly zero.
  std::vector<ConservedState> toward_left(n + 1), toward_right(n + 1);
  if (interfaces) interfaces->resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    const InterfaceSide& L = plus[j];
    const InterfaceSide& R = minus[j + 1];
    const InterfaceSolution sol = solve_interface(*eos_, L, R, dx, config_.Lambda, config_.psi);
    if (sol.fallback) ++fallbacks_;
    doublings_ += sol.lambda_doublings;
    toward_left[j] = sol.lambda * (sol.WLstar - L.w);
    toward_right[j] = sol.lambda * (sol.WRstar - R.w);
    if (interfaces) (*interfaces)[j] = sol;
  }

  std::vector<ConservedState> out(n);
  for (int i = 0; i < n; ++i) {
    ConservedState d = (toward_left[i + 1] + toward_right[i]) / dx;
    const InterfaceSide& lo_side = minus[i + 1];
    const InterfaceSide& hi_side = plus[i + 1];
    if (order > 1 && tr.theta[i + 1] > 0.0)
      d -= (physical_flux(hi_side.w, hi_side.p) - physical_flux(lo_side.w, lo_side.p)) / dx;
    const int m = i + 1;
    if (order == 3 && tr.theta[m] > 0.0) {
      // Simpson completion of the trapezoidal face source.
      const int k = i + kGhostCells;
      const double gm = (phi_ext_[k] - phi_ext_[k - 1]) / dx;
      const double gp = (phi_ext_[k + 1] - phi_ext_[k]) / dx;
      const double gc = 0.5 * (gm + gp);
      const ConservedState& lo = tr.minus[m];
      const ConservedState& hi = tr.plus[m];
      const ConservedState wc = (6.0 * w[i] - lo - hi) / 4.0;
      d.q -= (2.0 / 3.0) * (wc.rho * gc - 0.5 * (lo.rho * gm + hi.rho * gp));
      d.E -= (2.0 / 3.0) * (wc.q * gc - 0.5 * (lo.q * gm + hi.q * gp));
    }
    out[i] = d;
  }
  return out;
}

std::vector<ConservedState> Solver::step_first_order(const std::vector<ConservedState>& w,
                                                     double dt, double t,
                                                     std::vector<InterfaceSolution>* interfaces) {
  const auto L = rhs(w, t, 1, interfaces);
  std::vector<ConservedState> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] + dt * L[i];
  check_admissible(out, "first-order step");
  return out;
}

std::vector<ConservedState> Solver::step_high_order(const std::vector<ConservedState>& w,
                                                    double dt, double t) {
  // SSP stages written as increments of w: identical to the convex-combination
  // form, but a vanishing operator leaves w unchanged bit for bit.
  const int order = config_.order;
  const std::size_t n = w.size();
  std::vector<ConservedState> w1(n), out(n);
  const auto L0 = rhs(w, t, order);
  for (std::size_t i = 0; i < n; ++i) w1[i] = w[i] + dt * L0[i];
  check_admissible(w1, "RK stage 1");
  const auto L1 = rhs(w1, t + dt, order);
  if (order == 2) {
    for (std::size_t i = 0; i < n; ++i) out[i] = w[i] + (0.5 * dt) * (L0[i] + L1[i]);
    check_admissible(out, "RK stage 2");
    return out;
  }
  std::vector<ConservedState> w2(n);
  for (std::size_t i = 0; i < n; ++i) w2[i] = w[i] + (0.25 * dt) * (L0[i] + L1[i]);
  check_admissible(w2, "RK stage 2");
  const auto L2 = rhs(w2, t + 0.5 * dt, order);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = w[i] + (dt / 6.0) * (L0[i] + L1[i] + 4.0 * L2[i]);
  check_admissible(out, "RK stage 3");
  return out;
}

std::vector<ConservedState> Solver::step(const std::vector<ConservedState>& w, double dt,
                                         double t) {
  return config_.order == 1 ? step_first_order(w, dt, t) : step_high_order(w, dt, t);
}

RunResult Solver::run(std::vector<ConservedState> w0, double t_final,
                      const std::function<void(const StepRecord&)>& on_step,
                      const Stepper& stepper) {
  const auto start = std::chrono::steady_clock::now();
  if (static_cast<int>(w0.size()) != grid_.n_cells)
    throw ConfigError("run: field size does not match the grid");
  check_admissible(w0, "initial data");
  if (!refs_set_) {
    refs_ = detector_refs_from(w0);
    refs_set_ = true;
  }
  if (!comp_refs_set_) {
    for (std::size_t c = 0; c < 3; ++c) {
      double m = 0.0;
      for (const auto& s : w0) m = std::max(m, std::abs(s[c]));
      comp_refs_[c] = m > 0.0 ? m : 1.0;
    }
    comp_refs_set_ = true;
  }
  fallbacks_ = doublings_ = reverted_ = 0;

  RunResult res;
  res.w = std::move(w0);
  std::tie(res.stats.min_rho, res.stats.min_p) = min_rho_p(*eos_, res.w);
  double t = 0.0;
  std::vector<InterfaceSolution> ifs;
  while (t < t_final) {
    double dt = compute_dt(res.w, t);
    bool last = false;
    if (t + dt >= t_final * (1.0 - 1e-14)) {
      dt = t_final - t;
      last = true;
    }
    std::vector<ConservedState> next;
    const bool record_ifs = on_step && !stepper && config_.order == 1;
    if (stepper) {
      next = stepper(res.w, dt, t);
    } else if (config_.order == 1) {
      next = step_first_order(res.w, dt, t, record_ifs ? &ifs : nullptr);
    } else {
      next = step_high_order(res.w, dt, t);
    }
    const auto [rmin, pmin] = min_rho_p(*eos_, next);
    res.stats.min_rho = std::min(res.stats.min_rho, rmin);
    res.stats.min_p = std::min(res.stats.min_p, pmin);
    ++res.stats.steps;
    if (on_step) {
      StepRecord rec;
      rec.step = res.stats.steps;
      rec.t = t;
      rec.dt = dt;
      rec.before = &res.w;
      rec.after = &next;
      rec.interfaces = record_ifs ? &ifs : nullptr;
      on_step(rec);
    }
    res.w = std::move(next);
    t = last ? t_final : t + dt;
  }
  res.t = t;
  res.stats.interface_fallbacks = fallbacks_;
  res.stats.lambda_doublings = doublings_;
  res.stats.reverted_cells = reverted_;
  res.stats.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace fwb
