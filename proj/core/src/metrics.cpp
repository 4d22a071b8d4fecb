#include "nhsense/metrics.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "nhsense/closedform.hpp"
#include "nhsense/errors.hpp"

namespace nhsense {
namespace {

// Everything a report needs from one pair of factorizations.
struct Evaluation {
  SteadyMeans m0;
  SteadyMeans me;
  std::complex<double> shift_m;
  OutputCoeffs c0;
  OutputCoeffs ce;
};

Evaluation evaluate(const ChainParams& chain, const DriveSpec& drive,
                    const PerturbationSpec& pert) {
  check_site(chain, drive.m);
  const int n = chain.sites();
  const Eigen::VectorXd d = drive_vector(chain, drive);
  const DynMatrix inv0 = invert(build_htilde(chain, pert.with_epsilon(0.0), drive.m));
  const Eigen::VectorXd q0 = -(inv0.data * d);

  Evaluation ev;
  ev.m0 = unsqueeze(chain, q0);
  ev.c0 = output_fluct_coeffs(chain, drive.m, inv0);
  if (pert.epsilon == 0.0) {
    ev.me = ev.m0;
    ev.ce = ev.c0;
    ev.shift_m = 0.0;
    return ev;
  }
  const DynMatrix inve = invert(build_htilde(chain, pert, drive.m));
  ev.me = unsqueeze(chain, -(inve.data * d));
  ev.ce = output_fluct_coeffs(chain, drive.m, inve);
  Eigen::VectorXd vq = Eigen::VectorXd::Zero(2 * n);
  for (const auto& e : perturbation_entries(chain, pert)) vq(e.row - 1) += e.value * q0(e.col - 1);
  ev.shift_m = unsqueeze(chain, -(inve.data * vq)).a(drive.m - 1);
  return ev;
}

double signal_from_shift(const ChainParams& chain, std::complex<double> shift,
                         const HomodyneSpec& h) {
  const double proj = std::real(std::exp(std::complex<double>(0.0, -h.phi)) * shift);
  return 2.0 * chain.coupling() * h.tau * proj * proj;
}

}  // namespace

const char* to_string(Regime r) { return r == Regime::Linear ? "linear" : "beyond"; }

double signal_power(const ChainParams& chain, const DriveSpec& drive,
                    const PerturbationSpec& pert, const HomodyneSpec& homodyne) {
  const Eigen::VectorXcd shift = mean_shift(chain, drive, pert);
  return signal_from_shift(chain, shift(drive.m - 1), homodyne);
}

double noise_from_coeffs(const OutputCoeffs& c, double phi, double n_th) {
  const double cs = std::cos(phi), sn = std::sin(phi);
  const double u = cs * c.cxx + sn * c.cpx;
  const double v = cs * c.cxp + sn * c.cpp;
  return (n_th + 0.5) * (u * u + v * v);
}

double noise_power(const ChainParams& chain, const DriveSpec& drive,
                   const PerturbationSpec& pert, const HomodyneSpec& homodyne) {
  return noise_from_coeffs(output_fluct_coeffs(chain, drive, pert), homodyne.phi, drive.n_th);
}

double noise_power_averaged(const ChainParams& chain, const DriveSpec& drive,
                            const PerturbationSpec& pert, const HomodyneSpec& homodyne) {
  return 0.5 * (noise_power(chain, drive, pert.with_epsilon(0.0), homodyne) +
                noise_power(chain, drive, pert, homodyne));
}

double dominant_photons(const SteadyMeans& means) {
  const double xn = means.x(means.x.size() - 1);
  const double p1 = means.p(0);
  return 0.5 * (xn * xn + p1 * p1);
}

double total_photons(const SteadyMeans& means) { return means.a.squaredNorm(); }

PhotonCount photon_total(const ChainParams& chain, const DriveSpec& drive,
                         const PerturbationSpec& pert, Regime regime) {
  const SteadyMeans m0 = steady_means(chain, drive, pert.with_epsilon(0.0));
  PhotonCount out{total_photons(m0), dominant_photons(m0)};
  if (regime == Regime::Beyond) {
    const SteadyMeans me = steady_means(chain, drive, pert);
    out.n_tot = 0.5 * (out.n_tot + total_photons(me));
    out.n_tot_dominant = 0.5 * (out.n_tot_dominant + dominant_photons(me));
  }
  return out;
}

SensingReport snr_report(const ChainParams& chain, const DriveSpec& drive,
                         const PerturbationSpec& pert, const HomodyneSpec& homodyne,
                         Regime regime) {
  const Evaluation ev = evaluate(chain, drive, pert);
  SensingReport r(chain, drive, pert, homodyne, regime);
  r.signal = signal_from_shift(chain, ev.shift_m, homodyne);
  const double n0 = noise_from_coeffs(ev.c0, homodyne.phi, drive.n_th);
  if (regime == Regime::Linear) {
    r.noise = n0;
    r.n_tot = total_photons(ev.m0);
    r.n_tot_dominant = dominant_photons(ev.m0);
  } else {
    r.noise = 0.5 * (n0 + noise_from_coeffs(ev.ce, homodyne.phi, drive.n_th));
    r.n_tot = 0.5 * (total_photons(ev.m0) + total_photons(ev.me));
    r.n_tot_dominant = 0.5 * (dominant_photons(ev.m0) + dominant_photons(ev.me));
  }
  if (!(r.noise > 0)) throw DegenerateError("noise power vanishes");
  r.snr = r.signal / r.noise;
  r.snr_per_photon = r.snr / r.n_tot;
  r.snr_per_photon_dominant = r.signal / (r.noise * r.n_tot_dominant);
  for (double v : {r.signal, r.noise, r.n_tot, r.n_tot_dominant, r.snr, r.snr_per_photon,
                   r.snr_per_photon_dominant})
    if (!std::isfinite(v)) throw NumericalError("report quantity is not finite");
  return r;
}

double beyond_nhse_ratio(double kappa, double tau, double epsilon0, double eta) {
  const double e = epsilon0, e2 = e * e;
  const double eta2 = eta * eta, eta3 = eta2 * eta, eta4 = eta2 * eta2;
  const double g1f = eta * kappa + 2.0 * e - 2.0 * eta2 * e;
  const double g1 = 16.0 * e2 * (1.0 - eta2) * (1.0 - eta2) * g1f * g1f;
  const double g2 = (4.0 * e2 + 4.0 * eta4 * e2 + eta2 * (kappa * kappa - 8.0 * e2)) *
                    (2.0 * eta * kappa * e - 2.0 * eta3 * kappa * e + 2.0 * e2 + 2.0 * eta4 * e2 +
                     eta2 * (kappa * kappa - 4.0 * e2));
  if (g2 == 0.0) throw DegenerateError("G2 vanishes");
  return kappa * tau * g1 / g2;
}

double snr_dominant_closed(const ChainParams& chain, const ClosedCase& c,
                           const PerturbationSpec& pert, const HomodyneSpec& homodyne) {
  const double k = chain.coupling();
  const double tau = homodyne.tau;
  const double eps = pert.epsilon;
  const double eta = amplification_eta(chain);
  const std::complex<double> rot = std::exp(std::complex<double>(0.0, -homodyne.phi));
  const std::complex<double> i1(0.0, 1.0);

  switch (c.kind) {
    case ClosedCaseKind::NhseDriveReal: {
      const double s = std::sin(pert.varphi), cs = std::cos(pert.varphi);
      const std::complex<double> z =
          (eps / k) * s * (1.0 / eta - eta) + i1 * (2.0 * eps / k) * cs / eta;
      const double re = std::real(rot * z);
      return 16.0 * k * tau * re * re;
    }
    case ClosedCaseKind::NhseDriveImag: {
      const double s = std::sin(pert.varphi), cs = std::cos(pert.varphi);
      const std::complex<double> z =
          (2.0 * eps / k) * cs / eta + i1 * (eps / k) * s * (1.0 / eta - eta);
      const double re = std::real(rot * z);
      return 16.0 * k * tau * re * re;
    }
    case ClosedCaseKind::LocalGeneral: {
      const int n = chain.sites();
      check_site(chain, c.m);
      const double a = chain.amplification();
      const Eigen::VectorXd col_m = h_inverse_column(chain, c.m, c.m);
      const Eigen::VectorXd col_n = h_inverse_column(chain, c.m, n);
      const double h_mn = col_n(c.m - 1);
      const double h_nm = col_m(n - 1);
      const double h_1m = col_m(0);
      const double st = std::sin(c.theta), ct = std::cos(c.theta);
      const double sp = std::sin(homodyne.phi), cp = std::cos(homodyne.phi);
      const double gap = 2.0 * a * (n - c.m);
      const double num = -eps * st * cp * std::exp(-gap) + eps * ct * sp * std::exp(gap);
      const double den = h_nm * h_nm * ct * ct * std::exp(gap) +
                         h_1m * h_1m * st * st * std::exp(2.0 * a * (c.m - 1));
      if (den == 0.0) throw DegenerateError("photon term vanishes");
      const double prod = h_mn * h_nm;
      return 4.0 * k * tau * prod * prod * num * num / den;
    }
    case ClosedCaseKind::BeyondNhse:
      return beyond_nhse_ratio(k, tau, eps, eta);
  }
  throw DomainError("unknown closed case");
}

}  // namespace nhsense
