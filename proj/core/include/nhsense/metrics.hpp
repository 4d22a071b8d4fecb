#pragma once

#include "nhsense/dynamics.hpp"
#include "nhsense/model.hpp"

namespace nhsense {

enum class Regime { Linear, Beyond };

const char* to_string(Regime r);

struct PhotonCount {
  double n_tot = 0;
  double n_tot_dominant = 0;
};

struct SensingReport {
  double signal = 0;
  double noise = 0;
  double n_tot = 0;
  double n_tot_dominant = 0;
  double snr = 0;
  double snr_per_photon = 0;
  double snr_per_photon_dominant = 0;
  Regime regime = Regime::Linear;
  ChainParams chain;
  DriveSpec drive;
  PerturbationSpec pert;
  HomodyneSpec homodyne;

  SensingReport(const ChainParams& c, const DriveSpec& d, const PerturbationSpec& p,
                const HomodyneSpec& h, Regime r)
      : regime(r), chain(c), drive(d), pert(p), homodyne(h) {}
};

// S = 2 kappa tau |Re[exp(-i phi) (<a_m>_eps - <a_m>_0)]|^2
double signal_power(const ChainParams& chain, const DriveSpec& drive,
                    const PerturbationSpec& pert, const HomodyneSpec& homodyne);

double noise_from_coeffs(const OutputCoeffs& c, double phi, double n_th);

// Noise at the perturbation strength in pert.
double noise_power(const ChainParams& chain, const DriveSpec& drive,
                   const PerturbationSpec& pert, const HomodyneSpec& homodyne);

// (N(0) + N(eps)) / 2
double noise_power_averaged(const ChainParams& chain, const DriveSpec& drive,
                            const PerturbationSpec& pert, const HomodyneSpec& homodyne);

// (<x_N>^2 + <p_1>^2) / 2, the leading photon contribution for large A.
double dominant_photons(const SteadyMeans& means);

double total_photons(const SteadyMeans& means);

// Linear: photons at eps = 0. Beyond: average of eps = 0 and eps.
PhotonCount photon_total(const ChainParams& chain, const DriveSpec& drive,
                         const PerturbationSpec& pert, Regime regime);

// Throws DegenerateError when the noise vanishes and NumericalError when any
// reported quantity is not finite.
SensingReport snr_report(const ChainParams& chain, const DriveSpec& drive,
                         const PerturbationSpec& pert, const HomodyneSpec& homodyne,
                         Regime regime);

enum class ClosedCaseKind {
  NhseDriveReal,  // NHSE, theta = 0, m = N
  NhseDriveImag,  // NHSE, theta = pi/2, m = 1
  LocalGeneral,   // local perturbation at site N, any theta and m
  BeyondNhse,     // NHSE beyond linear response, theta = 0, m = N, phi = 0, varphi = pi/2
};

struct ClosedCase {
  ClosedCaseKind kind;
  double theta = 0;  // LocalGeneral only
  int m = 1;         // LocalGeneral only
};

// Dominant-term SNR per photon from the closed expressions.
double snr_dominant_closed(const ChainParams& chain, const ClosedCase& c,
                           const PerturbationSpec& pert, const HomodyneSpec& homodyne);

// kappa tau G1/G2 with eta = exp(A (N - 1)).
double beyond_nhse_ratio(double kappa, double tau, double epsilon0, double eta);

}  // namespace nhsense
