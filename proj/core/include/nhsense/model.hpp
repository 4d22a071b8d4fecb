#pragma once

#include <cstddef>

namespace nhsense {

// Two Hatano-Nelson chains (x and p quadratures) with nearest-neighbour
// hopping w, two-photon drive delta and waveguide coupling kappa.
class ChainParams {
 public:
  int sites() const { return n_; }
  double hopping() const { return w_; }
  double pair_drive() const { return delta_; }
  double coupling() const { return kappa_; }
  // J = sqrt(w^2 - delta^2)
  double effective_hopping() const { return j_; }
  // A with exp(2A) = (w + delta) / (w - delta)
  double amplification() const { return a_; }

  friend ChainParams derive_params(int n, double w, double delta, double kappa);
  friend ChainParams from_hopping(int n, double j, double a, double kappa);

 private:
  ChainParams() = default;
  int n_ = 0;
  double w_ = 0, delta_ = 0, kappa_ = 0, j_ = 0, a_ = 0;
};

ChainParams derive_params(int n, double w, double delta, double kappa);

// Same chain parameterized by (J, A); w = J cosh A, delta = J sinh A.
// J = 0 (decoupled sites) is accepted here only.
ChainParams from_hopping(int n, double j, double a, double kappa);

// eta = exp(A (N - 1))
double amplification_eta(const ChainParams& chain);

struct DriveSpec {
  double beta_abs;
  double theta;
  int m;
  double n_th;

  DriveSpec(double beta_abs, double theta, int m, double n_th = 0.0);
};

// Validates m against a chain (odd, 1 <= m <= N).
void check_site(const ChainParams& chain, int m);

enum class PerturbationKind { Nhse, LocalN };

struct PerturbationSpec {
  PerturbationKind kind;
  double epsilon;
  double varphi;

  PerturbationSpec(PerturbationKind kind, double epsilon, double varphi = 0.0);
  PerturbationSpec with_epsilon(double eps) const;
};

struct HomodyneSpec {
  double phi;
  double tau;

  HomodyneSpec(double phi, double tau = 1.0);
};

const char* to_string(PerturbationKind kind);

}  // namespace nhsense
