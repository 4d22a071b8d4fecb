#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nhsense/metrics.hpp"
#include "nhsense/model.hpp"

namespace nhsense {

// Flat, unvalidated description of one evaluation point. Chain geometry is
// given either as (w, delta) or as (J, A); has_hopping selects the latter.
struct ScenarioSpec {
  int n = 3;
  bool has_hopping = true;
  double w = 0, delta = 0;
  double j = 1.0, a = 1.0;
  double kappa = 1.0;
  double theta = 0;
  int m = 1;
  double beta = 1e3;
  double n_th = 0;
  PerturbationKind kind = PerturbationKind::Nhse;
  double epsilon = 1e-8;
  double varphi = 0;
  double phi = 0;
  double tau = 1.0;
  Regime regime = Regime::Linear;

  ChainParams chain() const;
  DriveSpec drive() const;
  PerturbationSpec perturbation() const;
  HomodyneSpec homodyne() const;
};

SensingReport evaluate_scenario(const ScenarioSpec& s);

struct AngleResult {
  double phi_star;
  double value;
};

// Maximizes snr_per_photon over phi in [0, pi/2]: coarse grid then
// golden-section refinement to 1e-6.
AngleResult best_measurement_angle(const ChainParams& chain, const DriveSpec& drive,
                                   const PerturbationSpec& pert, double tau, int grid_size = 91,
                                   Regime regime = Regime::Linear);

struct AmplificationResult {
  double eta_star;
  double value;
};

// Maximizes snr_per_photon over eta = e^{A(N-1)} in [eta_lo, eta_hi] at the
// base N: coarse grid in ln(eta) then golden-section refinement.
AmplificationResult best_amplification(const ScenarioSpec& base, double eta_lo, double eta_hi,
                                       int grid_size = 121);

// eta* = (kappa^2 / (8 eps0^2))^(1/4)
double optimal_eta_vn(double kappa, double epsilon0);

struct SweepAxis {
  std::string name;  // theta, phi, varphi, m, N, A, epsilon, eta
  std::vector<double> values;
};

// m value that stands for the last site when sweeping N.
inline constexpr double kLastSite = -1.0;

struct SweepGrid {
  std::vector<SweepAxis> axes;
  ScenarioSpec base;
};

enum class ErrorClass { None, Validation, Numerical };

struct SweepRow {
  ScenarioSpec point;
  std::optional<SensingReport> report;
  std::string error;
  ErrorClass error_class = ErrorClass::None;
};

// Axis-major enumeration: the first axis varies slowest.
std::vector<SweepRow> sweep(const SweepGrid& grid);

std::vector<double> log_spaced(double lo, double hi, int count);

struct FitResult {
  double slope;
  double intercept;
  double r_squared;
  int points;
};

// Least-squares fit of ln(value) against N.
FitResult fit_scaling_exponent(const std::vector<std::pair<double, double>>& points);

}  // namespace nhsense
