#include "fwb/diagnostics.hpp"

#include <cmath>
#include <limits>

#include "fwb/errors.hpp"

namespace fwb {

std::vector<ConservedState> plain_hll_step(const Solver& solver,
                                           const std::vector<ConservedState>& w, double dt,
                                           double t) {
  const Eos& eos = solver.eos();
  const Grid1D& grid = solver.grid();
  const double dx = grid.dx();
  const int n = grid.n_cells;
  const auto ext = apply_boundary(w, solver.boundary(), grid, t);
  const auto& phi = solver.phi_extended();

  std::vector<double> p(ext.size()), speed(ext.size());
  std::vector<ConservedState> F(ext.size());
  for (std::size_t k = 0; k < ext.size(); ++k) {
    const ConservedState& c = ext[k];
    const ThermoState th = eos.thermo(1.0 / c.rho, c.internal_energy());
    const double u = c.q / c.rho;
    p[k] = th.p;
    speed[k] = std::abs(u) + th.c;
    F[k] = {c.q, c.q * u + th.p, (c.E + th.p) * u};
  }

  std::vector<ConservedState> flux(n + 1);
  for (int j = 0; j <= n; ++j) {
    const int l = j + kGhostCells - 1, r = j + kGhostCells;
    double lambda = solver.config().Lambda * std::max(speed[l], speed[r]);
    for (int d = 0; d < 3; ++d) {
      const double rho_hll =
          0.5 * (ext[l].rho + ext[r].rho) - (F[r].rho - F[l].rho) / (2.0 * lambda);
      if (rho_hll > 0.0) break;
      lambda *= 2.0;
    }
    for (std::size_t c = 0; c < 3; ++c)
      flux[j][c] = 0.5 * (F[l][c] + F[r][c]) - 0.5 * lambda * (ext[r][c] - ext[l][c]);
  }

  std::vector<ConservedState> out(n);
  for (int i = 0; i < n; ++i) {
    const int k = i + kGhostCells;
    const double dphi = (phi[k + 1] - phi[k - 1]) / (2.0 * dx);
    ConservedState next = w[i];
    for (std::size_t c = 0; c < 3; ++c) next[c] -= dt / dx * (flux[i + 1][c] - flux[i][c]);
    next.q -= dt * w[i].rho * dphi;
    next.E -= dt * w[i].q * dphi;
    if (!(next.rho > 0.0) || !eos.admissible(1.0 / next.rho, next.internal_energy()))
      throw PositivityLoss("plain HLL: inadmissible state in cell " + std::to_string(i), i);
    out[i] = next;
  }
  return out;
}

RunResult run_plain_hll(Solver& solver, std::vector<ConservedState> w0, double t_final) {
  const Stepper stepper = [&solver](const std::vector<ConservedState>& w, double dt, double t) {
    return plain_hll_step(solver, w, dt, t);
  };
  return solver.run(std::move(w0), t_final, {}, stepper);
}

std::string to_string(EntropyFunction f) {
  return f == EntropyFunction::linear ? "s" : "exp(s/10)";
}

double eta(EntropyFunction f, double s) {
  return f == EntropyFunction::linear ? s : std::exp(s / 10.0);
}

double eta_d1(EntropyFunction f, double s) {
  return f == EntropyFunction::linear ? 1.0 : std::exp(s / 10.0) / 10.0;
}

double eta_d2(EntropyFunction f, double s) {
  return f == EntropyFunction::linear ? 0.0 : std::exp(s / 10.0) / 100.0;
}

void EntropyReport::merge(const EntropyReport& other, long step) {
  cells_checked += other.cells_checked;
  violations += other.violations;
  unverifiable_interfaces += other.unverifiable_interfaces;
  if (other.worst > worst || worst_step < 0) {
    worst = std::max(worst, other.worst);
    if (other.worst >= worst) {
      worst_cell = other.worst_cell;
      worst_step = step;
    }
  }
  scaled = other.scaled;
}

EntropyReport entropy_monitor(const Eos& eos, const std::vector<ConservedState>& before,
                              const std::vector<ConservedState>& after,
                              const std::vector<InterfaceSolution>& interfaces, double dt,
                              double dx, EntropyFunction f, double tol) {
  const std::size_t n = before.size();
  if (after.size() != n || interfaces.size() != n + 1)
    throw ConfigError("entropy monitor: inconsistent step data");
  EntropyReport rep;
  rep.eta = f;
  rep.tolerance = tol;
  rep.worst = -std::numeric_limits<double>::infinity();

  const auto density = [&](const ConservedState& w) {
    return w.rho * eta(f, eos.entropy(1.0 / w.rho, w.internal_energy()));
  };
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> G(n + 1, nan);
  for (std::size_t j = 0; j <= n; ++j) {
    const InterfaceSolution& s = interfaces[j];
    try {
      if (s.WLstar.q >= 0.0) {
        const double UL = density(s.wl);
        G[j] = UL * s.wl.q / s.wl.rho - s.lambda * (density(s.WLstar) - UL);
      } else {
        const double UR = density(s.wr);
        G[j] = UR * s.wr.q / s.wr.rho + s.lambda * (density(s.WRstar) - UR);
      }
    } catch (const DomainError&) {
      ++rep.unverifiable_interfaces;
    }
  }

  rep.scaled.assign(n, 0.0);
  const double r = dt / dx;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(G[i]) || std::isnan(G[i + 1])) continue;
    const double U0 = density(before[i]);
    const double U1 = density(after[i]);
    const double res = U1 - U0 + r * (G[i + 1] - G[i]);
    const double lam = std::max(interfaces[i].lambda, interfaces[i + 1].lambda);
    // eta(s) + c changes rho eta by c rho, which the residual cancels; rho eta'(s)
    // keeps the scale from collapsing where eta(s) crosses zero.
    const double s0 = eos.entropy(1.0 / before[i].rho, before[i].internal_energy());
    const double offset = before[i].rho * std::abs(eta_d1(f, s0));
    const double scale = std::max({std::abs(U0), std::abs(U1), r * std::abs(G[i]),
                                   r * std::abs(G[i + 1]), r * lam * std::abs(U0), offset,
                                   std::numeric_limits<double>::min()});
    const double v = res / scale;
    rep.scaled[i] = v;
    ++rep.cells_checked;
    if (v > tol) ++rep.violations;
    if (v > rep.worst) {
      rep.worst = v;
      rep.worst_cell = static_cast<long>(i);
    }
  }
  return rep;
}

std::string ConvexityReport::label() const {
  if (certified()) return "convex (all conditions hold)";
  return "convexity not certified (condition " + std::to_string(first_failing + 1) + ")";
}

ConvexityReport convexity_check(const Eos& eos, const ConservedState& w, double eta1,
                                double eta2) {
  const double rho = w.rho;
  const double tau = 1.0 / rho;
  const double u = w.q / w.rho;
  const double e = w.internal_energy();
  const double E = w.E;
  const double T = eos.temperature(tau, e);
  const double p = eos.pressure(tau, e);

  const double ht = 1e-6 * tau;
  const double he = 1e-6 * std::max(std::abs(e), 1.0);
  const double Tt = (eos.temperature(tau + ht, e) - eos.temperature(tau - ht, e)) / (2 * ht);
  const double Te = (eos.temperature(tau, e + he) - eos.temperature(tau, e - he)) / (2 * he);
  const double pt = (eos.pressure(tau + ht, e) - eos.pressure(tau - ht, e)) / (2 * ht);

  const double u2 = u * u;
  const double A = -Tt * Tt + Te * (p * Tt - T * pt);
  const double B = p * p * Te - p * Tt - T * pt;
  const double ke = rho * e - 0.5 * rho * u2;

  ConvexityReport rep;
  rep.bracket[0][0] = A;
  rep.bracket[0][1] = B;
  rep.bracket[1][0] =
      Tt * (2 * rho * e - rho * u2) + Te * ke * ke + (p * Tt - T * pt) + u2 * rho * rho * T;
  rep.bracket[1][1] = (p - 0.5 * rho * u2 + rho * e) * (p - 0.5 * rho * u2 + rho * e);
  rep.bracket[2][0] = u2 * A + T * (Tt * (2 * E + p) + Te * E * E - T * pt);
  rep.bracket[2][1] = u2 * B + T * (E + p) * (E + p);
  for (int k = 0; k < 3; ++k) {
    rep.value[k] = rep.bracket[k][0] * eta1 + rep.bracket[k][1] * eta2;
    rep.holds[k] = rep.value[k] >= 0.0;
    if (!rep.holds[k] && rep.first_failing < 0) rep.first_failing = k;
  }
  return rep;
}

ErrorNorms error_norms(const std::vector<ConservedState>& field,
                       const std::vector<ConservedState>& reference, double dx) {
  if (field.size() != reference.size()) throw ConfigError("error_norms: grid mismatch");
  ErrorNorms n;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const ConservedState d = field[i] - reference[i];
    n.rho += d.rho * d.rho;
    n.q += d.q * d.q;
    n.E += d.E * d.E;
  }
  n.rho = std::sqrt(dx * n.rho);
  n.q = std::sqrt(dx * n.q);
  n.E = std::sqrt(dx * n.E);
  return n;
}

double eoc(const std::vector<double>& errors, const std::vector<int>& n_cells) {
  if (errors.size() != n_cells.size() || errors.size() < 2)
    throw ConfigError("eoc: need at least two matching (error, n) pairs");
  const std::size_t m = errors.size();
  double sx = 0.0, sy = 0.0;
  std::vector<double> x(m), y(m);
  for (std::size_t k = 0; k < m; ++k) {
    if (!(errors[k] > 0.0) || n_cells[k] <= 0) throw ConfigError("eoc: nonpositive input");
    x[k] = -std::log(static_cast<double>(n_cells[k]));
    y[k] = std::log(errors[k]);
    sx += x[k];
    sy += y[k];
  }
  sx /= m;
  sy /= m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    sxy += (x[k] - sx) * (y[k] - sy);
    sxx += (x[k] - sx) * (x[k] - sx);
  }
  if (sxx == 0.0) throw ConfigError("eoc: all grids identical");
  return sxy / sxx;
}

}  // namespace fwb
