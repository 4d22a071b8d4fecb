#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "nhsense/model.hpp"

namespace nhsense {

// Column j of h^-1 (1-based j, damping at odd site m), by back-substitution.
Eigen::VectorXd h_inverse_column(const ChainParams& chain, int m, int j);

// Three-class structure of column 1 of h^-1.
struct ColumnPattern {
  double odd_value = 0;       // rows 1, 3, ..., N
  double even_low_value = 0;  // rows 2, 4, ..., m-1
  int zero_first = 0;         // rows zero_first..zero_last (even only) are 0
  int zero_last = -1;
  Eigen::VectorXd full;
};

ColumnPattern column_pattern(const ChainParams& chain, int m);

// Zeroth plus first order Dyson terms of H~[eps]^-1 at the requested
// (row, col) pairs (1-based, within 1..2N).
std::vector<double> dyson_first_order(const ChainParams& chain, const PerturbationSpec& pert,
                                      int m, const std::vector<std::pair<int, int>>& pairs);

// All-orders values of column 1 of H~[eps]^-1 for the NHSE perturbation with
// damping at m = N. Each value is shared by a family of rows.
struct ExactFirstColumn {
  double x_odd;   // rows 1, 3, ..., N
  double x_even;  // rows 2, 4, ..., N-1
  double p_even;  // rows N+2, N+4, ..., 2N-1
  double p_odd;   // rows N+1, N+3, ..., 2N
};

ExactFirstColumn htilde_inverse_exact_first_column(const ChainParams& chain, double epsilon,
                                                   double varphi);

// Expands the families to a length-2N column.
Eigen::VectorXd expand_first_column(const ChainParams& chain, const ExactFirstColumn& f);

}  // namespace nhsense
