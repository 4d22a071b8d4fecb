#include "nhsense/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nhsense/errors.hpp"

namespace nhsense {

ChainParams ScenarioSpec::chain() const {
  return has_hopping ? from_hopping(n, j, a, kappa) : derive_params(n, w, delta, kappa);
}

DriveSpec ScenarioSpec::drive() const { return DriveSpec(beta, theta, m, n_th); }

PerturbationSpec ScenarioSpec::perturbation() const {
  return PerturbationSpec(kind, epsilon, varphi);
}

HomodyneSpec ScenarioSpec::homodyne() const { return HomodyneSpec(phi, tau); }

SensingReport evaluate_scenario(const ScenarioSpec& s) {
  const ChainParams c = s.chain();
  const DriveSpec d = s.drive();
  check_site(c, d.m);
  return snr_report(c, d, s.perturbation(), s.homodyne(), s.regime);
}

namespace {

// Golden-section maximization of f on [lo, hi] down to width tol.
template <class F>
std::pair<double, double> golden_max(F&& f, double lo, double hi, double tol) {
  const double inv_gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_gr * (hi - lo);
  double d = lo + inv_gr * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > tol) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_gr * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_gr * (hi - lo);
      fd = f(d);
    }
  }
  const double mid = 0.5 * (lo + hi);
  return {mid, f(mid)};
}

// Coarse grid over [lo, hi] followed by refinement around the best point.
// The grid value is kept unless the refined one is strictly larger.
template <class F>
std::pair<double, double> grid_then_refine(F&& f, double lo, double hi, int grid_size, double tol) {
  const double step = (hi - lo) / (grid_size - 1);
  int best = 0;
  double best_val = f(lo);
  for (int i = 1; i < grid_size; ++i) {
    const double v = f(lo + i * step);
    if (v > best_val) {
      best = i;
      best_val = v;
    }
  }
  const double b_lo = lo + std::max(0, best - 1) * step;
  const double b_hi = lo + std::min(grid_size - 1, best + 1) * step;
  const auto [x, v] = golden_max(f, b_lo, b_hi, tol);
  if (v > best_val) return {x, v};
  return {lo + best * step, best_val};
}

}  // namespace

AngleResult best_measurement_angle(const ChainParams& chain, const DriveSpec& drive,
                                   const PerturbationSpec& pert, double tau, int grid_size,
                                   Regime regime) {
  if (grid_size < 3) throw DomainError("grid_size must be >= 3");
  const double hi = std::numbers::pi / 2;
  auto f = [&](double phi) {
    return snr_report(chain, drive, pert, HomodyneSpec(std::clamp(phi, 0.0, hi), tau), regime)
        .snr_per_photon;
  };
  const auto [phi, v] = grid_then_refine(f, 0.0, hi, grid_size, 1e-6);
  return {phi, v};
}

AmplificationResult best_amplification(const ScenarioSpec& base, double eta_lo, double eta_hi,
                                       int grid_size) {
  if (grid_size < 3) throw DomainError("grid_size must be >= 3");
  if (!(eta_lo >= 1.0) || !(eta_hi > eta_lo)) throw DomainError("need 1 <= eta_lo < eta_hi");
  ScenarioSpec s = base;
  s.has_hopping = true;
  if (s.m == -1) s.m = s.n;
  auto f = [&](double log_eta) {
    s.a = log_eta / (s.n - 1);
    return evaluate_scenario(s).snr_per_photon;
  };
  const auto [x, v] = grid_then_refine(f, std::log(eta_lo), std::log(eta_hi), grid_size, 1e-8);
  return {std::exp(x), v};
}

double optimal_eta_vn(double kappa, double epsilon0) {
  if (!(kappa > 0)) throw DomainError("kappa must be > 0");
  if (!(epsilon0 > 0) || !(epsilon0 < kappa))
    throw DomainError("optimal_eta_vn requires 0 < eps0 < kappa");
  return std::pow(kappa * kappa / (8.0 * epsilon0 * epsilon0), 0.25);
}

namespace {

void apply_axis(ScenarioSpec& s, const std::string& name, double v) {
  if (name == "theta") {
    s.theta = v;
  } else if (name == "phi") {
    s.phi = v;
  } else if (name == "varphi") {
    s.varphi = v;
  } else if (name == "m") {
    s.m = (v == kLastSite) ? -1 : static_cast<int>(std::lround(v));
  } else if (name == "N") {
    s.n = static_cast<int>(std::lround(v));
  } else if (name == "A") {
    s.has_hopping = true;
    s.a = v;
  } else if (name == "epsilon") {
    s.epsilon = v;
  } else if (name == "eta") {
    if (!(v >= 1.0)) throw DomainError("eta must be >= 1");
    s.has_hopping = true;
    s.a = std::log(v) / (s.n - 1);
  } else {
    throw DomainError("unknown sweep axis '" + name + "'");
  }
}

void check_axis(const SweepAxis& ax) {
  static const char* names[] = {"theta", "phi", "varphi", "m", "N", "A", "epsilon", "eta"};
  bool ok = false;
  for (const char* n : names) ok = ok || ax.name == n;
  if (!ok) throw DomainError("unknown sweep axis '" + ax.name + "'");
  if (ax.values.empty()) throw DomainError("sweep axis '" + ax.name + "' has no values");
}

}  // namespace

std::vector<SweepRow> sweep(const SweepGrid& grid) {
  for (const auto& ax : grid.axes) check_axis(ax);
  // eta depends on N, so it is applied after every other axis.
  std::size_t total = 1;
  for (const auto& ax : grid.axes) total *= ax.values.size();
  std::vector<SweepRow> rows;
  rows.reserve(total);
  std::vector<std::size_t> idx(grid.axes.size(), 0);
  for (std::size_t k = 0; k < total; ++k) {
    SweepRow row{grid.base, std::nullopt, {}, ErrorClass::None};
    bool last_site = grid.base.m == -1;
    try {
      for (std::size_t a = 0; a < grid.axes.size(); ++a) {
        const auto& ax = grid.axes[a];
        if (ax.name == "eta") continue;
        if (ax.name == "m") last_site = ax.values[idx[a]] == kLastSite;
        apply_axis(row.point, ax.name, ax.values[idx[a]]);
      }
      if (last_site) row.point.m = row.point.n;
      for (std::size_t a = 0; a < grid.axes.size(); ++a)
        if (grid.axes[a].name == "eta") apply_axis(row.point, "eta", grid.axes[a].values[idx[a]]);
      row.report = evaluate_scenario(row.point);
    } catch (const NumericalError& e) {
      row.error = e.what();
      row.error_class = ErrorClass::Numerical;
    } catch (const Error& e) {
      row.error = e.what();
      row.error_class = ErrorClass::Validation;
    }
    rows.push_back(std::move(row));
    for (std::size_t a = grid.axes.size(); a-- > 0;) {
      if (++idx[a] < grid.axes[a].values.size()) break;
      idx[a] = 0;
    }
  }
  return rows;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0) || !(hi > 0)) throw DomainError("log range needs positive bounds");
  if (count < 1) throw DomainError("log range needs count >= 1");
  if (count == 1) return {lo};
  std::vector<double> v(count);
  const double l0 = std::log10(lo), l1 = std::log10(hi);
  for (int i = 0; i < count; ++i) v[i] = std::pow(10.0, l0 + (l1 - l0) * i / (count - 1));
  v.front() = lo;
  v.back() = hi;
  return v;
}

FitResult fit_scaling_exponent(const std::vector<std::pair<double, double>>& points) {
  const int k = static_cast<int>(points.size());
  if (k < 3) throw DomainError("fit needs at least 3 points");
  double sx = 0, sy = 0;
  for (const auto& [x, y] : points) {
    if (!(y > 0) || !std::isfinite(y)) throw DomainError("fit values must be positive and finite");
    sx += x;
    sy += std::log(y);
  }
  const double mx = sx / k, my = sy / k;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : points) {
    const double dx = x - mx, dy = std::log(y) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0) throw DomainError("fit needs at least two distinct N");
  FitResult r;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  r.points = k;
  double sse = 0;
  for (const auto& [x, y] : points) {
    const double e = std::log(y) - (r.intercept + r.slope * x);
    sse += e * e;
  }
  if (syy == 0) {
    r.r_squared = 1.0;
  } else {
    r.r_squared = std::clamp(1.0 - sse / syy, 0.0, 1.0);
  }
  return r;
}

}  // namespace nhsense
