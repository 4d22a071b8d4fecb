#include "nhsense/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nhsense/errors.hpp"

namespace nhsense {
namespace {

constexpr double kExponentBudget = 600.0;

double wrap_angle(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(a, two_pi);
  if (r < 0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

void check_size(int n) {
  if (n < 3 || n % 2 == 0)
    throw DomainError("N must be odd and >= 3, got " + std::to_string(n));
}

void check_budget(int n, double a) {
  if (4.0 * a * (n - 1) > kExponentBudget)
    throw OverflowError("4*A*(N-1) = " + std::to_string(4.0 * a * (n - 1)) +
                        " exceeds 600; exponential factors are not representable");
}

}  // namespace

ChainParams derive_params(int n, double w, double delta, double kappa) {
  check_size(n);
  if (!std::isfinite(w) || !std::isfinite(delta) || !std::isfinite(kappa))
    throw DomainError("rates must be finite");
  if (!(kappa > 0)) throw DomainError("kappa must be > 0");
  if (!(delta >= 0)) throw DomainError("delta must be >= 0");
  if (!(w > delta)) throw DomainError("w must exceed delta");
  ChainParams c;
  c.n_ = n;
  c.w_ = w;
  c.delta_ = delta;
  c.kappa_ = kappa;
  c.j_ = std::sqrt((w - delta) * (w + delta));
  c.a_ = 0.5 * std::log((w + delta) / (w - delta));
  check_budget(n, c.a_);
  return c;
}

ChainParams from_hopping(int n, double j, double a, double kappa) {
  check_size(n);
  if (!std::isfinite(j) || !std::isfinite(a) || !std::isfinite(kappa))
    throw DomainError("rates must be finite");
  if (!(kappa > 0)) throw DomainError("kappa must be > 0");
  if (!(j >= 0)) throw DomainError("J must be >= 0");
  if (!(a >= 0)) throw DomainError("A must be >= 0");
  check_budget(n, a);
  ChainParams c;
  c.n_ = n;
  c.j_ = j;
  c.a_ = a;
  c.kappa_ = kappa;
  c.w_ = j * std::cosh(a);
  c.delta_ = j * std::sinh(a);
  return c;
}

double amplification_eta(const ChainParams& chain) {
  return std::exp(chain.amplification() * (chain.sites() - 1));
}

DriveSpec::DriveSpec(double beta_abs_, double theta_, int m_, double n_th_)
    : beta_abs(beta_abs_), theta(wrap_angle(theta_)), m(m_), n_th(n_th_) {
  if (!(beta_abs > 0) || !std::isfinite(beta_abs))
    throw DomainError("beta must be > 0");
  if (!std::isfinite(theta_)) throw DomainError("theta must be finite");
  if (m < 1 || m % 2 == 0)
    throw DomainError("drive site m must be odd and >= 1, got " + std::to_string(m));
  if (!(n_th >= 0) || !std::isfinite(n_th)) throw DomainError("n_th must be >= 0");
}

void check_site(const ChainParams& chain, int m) {
  if (m < 1 || m > chain.sites() || m % 2 == 0)
    throw DomainError("drive site m must be odd with 1 <= m <= N, got m=" +
                      std::to_string(m) + " N=" + std::to_string(chain.sites()));
}

PerturbationSpec::PerturbationSpec(PerturbationKind kind_, double epsilon_, double varphi_)
    : kind(kind_), epsilon(epsilon_), varphi(0.0) {
  if (!(epsilon >= 0) || !std::isfinite(epsilon))
    throw DomainError("epsilon must be >= 0");
  if (!std::isfinite(varphi_)) throw DomainError("varphi must be finite");
  if (kind == PerturbationKind::Nhse) varphi = wrap_angle(varphi_);
}

PerturbationSpec PerturbationSpec::with_epsilon(double eps) const {
  return PerturbationSpec(kind, eps, varphi);
}

HomodyneSpec::HomodyneSpec(double phi_, double tau_) : phi(phi_), tau(tau_) {
  if (!(phi >= 0 && phi <= std::numbers::pi / 2))
    throw DomainError("phi must lie in [0, pi/2]");
  if (!(tau > 0) || !std::isfinite(tau)) throw DomainError("tau must be > 0");
}

const char* to_string(PerturbationKind kind) {
  return kind == PerturbationKind::Nhse ? "nhse" : "localn";
}

}  // namespace nhsense
