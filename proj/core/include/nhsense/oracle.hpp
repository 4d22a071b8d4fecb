#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nhsense/dynamics.hpp"
#include "nhsense/model.hpp"

namespace nhsense {

struct OdeRun {
  double t_end = 0;    // time actually reached
  double dt = 0;
  std::vector<Eigen::VectorXd> trajectory;  // sampled squeezed-basis states
  bool converged = false;
  double residual = 0;  // max |dq/dt| at the final time
  Eigen::VectorXd state;
};

struct OdeOptions {
  double t_end = 0;
  double dt = 0;
  // Stop early once residual <= stop_tolerance * scale.
  double stop_tolerance = 1e-13;
  // Drive contribution to the convergence scale (sqrt(2 kappa) |beta|).
  double drive_scale = 0;
  int max_samples = 200;
};

// Classic RK4 on dq/dt = H q + d from q = 0. Throws DivergenceError when
// max|q| exceeds 1e12. converged iff residual <= 1e-10 (kappa max|q| + drive_scale).
OdeRun integrate_linear(const Eigen::MatrixXd& h, const Eigen::VectorXd& d, double kappa,
                        const OdeOptions& opt);

// Largest step allowed for the chain: 0.05 / max(J e^A, kappa, eps e^{A(N-1)}).
double max_stable_step(const ChainParams& chain, const PerturbationSpec& pert);

// Integrates the mean-field equations for a driven chain. Throws StepSizeError
// unless dt <= max_stable_step and t_end >= 20 / kappa.
OdeRun integrate_means(const ChainParams& chain, const DriveSpec& drive,
                       const PerturbationSpec& pert, double t_end, double dt);

// Forcing produced by a static input-quadrature offset injected at site m.
Eigen::VectorXd input_forcing(const ChainParams& chain, int m, double dx_in, double dp_in);

// Output coefficients from finite differences of integrated responses to
// input offsets of size `offset` on top of the drive.
OutputCoeffs finite_difference_coeffs(const ChainParams& chain, const DriveSpec& drive,
                                      const PerturbationSpec& pert, double offset,
                                      double t_end, double dt);

// Gauss-Jordan with complete pivoting, one right-hand side e_j at a time.
Eigen::MatrixXd column_solve_inverse(const Eigen::MatrixXd& m);

}  // namespace nhsense
