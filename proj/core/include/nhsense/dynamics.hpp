#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nhsense/model.hpp"

namespace nhsense {

// Dense 2N x 2N matrix in the squeezed (x~, p~) basis. Rows and columns
// 0..N-1 are x~_1..x~_N, N..2N-1 are p~_1..p~_N.
struct DynMatrix {
  int n = 0;
  Eigen::MatrixXd data;
};

struct MatrixEntry {
  int row;  // 1-based
  int col;  // 1-based
  double value;
};

struct SteadyMeans {
  Eigen::VectorXd xt;
  Eigen::VectorXd pt;
  Eigen::VectorXd x;
  Eigen::VectorXd p;
  Eigen::VectorXcd a;
};

struct OutputCoeffs {
  double cxx = 0, cxp = 0, cpx = 0, cpp = 0;
};

// h = J sum(|n+1><n| - |n><n+1|) - (kappa/2)|m><m|
Eigen::MatrixXd build_h_block(const ChainParams& chain, int m);

// Nonzero entries of the perturbation part of H~[eps], 1-based.
std::vector<MatrixEntry> perturbation_entries(const ChainParams& chain,
                                              const PerturbationSpec& pert);

DynMatrix build_htilde(const ChainParams& chain, const PerturbationSpec& pert, int m);

DynMatrix invert(const DynMatrix& m);

// Forcing term d of dq/dt = H~ q + d in the squeezed basis.
Eigen::VectorXd drive_vector(const ChainParams& chain, const DriveSpec& drive);

// Unsqueezes a squeezed-basis state vector of length 2N.
SteadyMeans unsqueeze(const ChainParams& chain, const Eigen::VectorXd& q);

SteadyMeans steady_means(const ChainParams& chain, const DriveSpec& drive,
                         const PerturbationSpec& pert);

// <a>_eps - <a>_0 for every site, via dq = -H~[eps]^-1 (H~[eps] - H~[0]) q_0.
Eigen::VectorXcd mean_shift(const ChainParams& chain, const DriveSpec& drive,
                            const PerturbationSpec& pert);

OutputCoeffs output_fluct_coeffs(const ChainParams& chain, const DriveSpec& drive,
                                 const PerturbationSpec& pert);

// Same coefficients from an already inverted H~.
OutputCoeffs output_fluct_coeffs(const ChainParams& chain, int m, const DynMatrix& inverse);

}  // namespace nhsense
