#include "nhsense/closedform.hpp"

#include <cmath>

#include "nhsense/dynamics.hpp"
#include "nhsense/errors.hpp"

namespace nhsense {

Eigen::VectorXd h_inverse_column(const ChainParams& chain, int m, int j) {
  const int n = chain.sites();
  check_site(chain, m);
  if (j < 1 || j > n) throw DomainError("column index out of range");
  const double jh = chain.effective_hopping();
  const double k = chain.coupling();
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };

  // v is 1-based here; v[0] and v[n+1] stay zero.
  std::vector<double> v(n + 2, 0.0);

  // Odd rows telescope to -(kappa/2) v_m = [j odd].
  const double vm = (j % 2 == 1) ? -2.0 / k : 0.0;
  // Even rows fix odd entries: v_{i+1} = v_{i-1} - delta_ij / J.
  v[1] = vm + ((j % 2 == 0 && j < m) ? 1.0 / jh : 0.0);
  for (int i = 2; i + 1 <= n; i += 2) v[i + 1] = v[i - 1] - delta(i, j) / jh;
  // Odd rows fix even entries: v_{i+1} = v_{i-1} - (delta_ij + (kappa/2) delta_im v_m) / J.
  for (int i = 1; i + 1 <= n; i += 2)
    v[i + 1] = v[i - 1] - (delta(i, j) + 0.5 * k * delta(i, m) * v[m]) / jh;

  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out(i) = v[i + 1];
  return out;
}

ColumnPattern column_pattern(const ChainParams& chain, int m) {
  ColumnPattern p;
  p.full = h_inverse_column(chain, m, 1);
  p.odd_value = -2.0 / chain.coupling();
  p.even_low_value = -1.0 / chain.effective_hopping();
  p.zero_first = m + 1;
  p.zero_last = chain.sites() - 1;
  return p;
}

std::vector<double> dyson_first_order(const ChainParams& chain, const PerturbationSpec& pert,
                                      int m, const std::vector<std::pair<int, int>>& pairs) {
  const int n = chain.sites();
  check_site(chain, m);
  Eigen::MatrixXd hinv(n, n);
  for (int j = 1; j <= n; ++j) hinv.col(j - 1) = h_inverse_column(chain, m, j);

  // Unperturbed inverse is block diagonal with two copies of h^-1.
  auto g0 = [&](int r, int c) {
    const bool rp = r > n, cp = c > n;
    if (rp != cp) return 0.0;
    return hinv((rp ? r - n : r) - 1, (cp ? c - n : c) - 1);
  };

  const auto entries = perturbation_entries(chain, pert);
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& [r, c] : pairs) {
    if (r < 1 || r > 2 * n || c < 1 || c > 2 * n)
      throw DomainError("dyson_first_order: index out of range");
    double v = g0(r, c);
    if (pert.epsilon != 0.0)
      for (const auto& e : entries) v -= g0(r, e.row) * e.value * g0(e.col, c);
    out.push_back(v);
  }
  return out;
}

ExactFirstColumn htilde_inverse_exact_first_column(const ChainParams& chain, double epsilon,
                                                   double varphi) {
  if (!(epsilon >= 0)) throw DomainError("epsilon must be >= 0");
  const double k = chain.coupling();
  const double jh = chain.effective_hopping();
  const double eta = amplification_eta(chain);
  const double eta2 = eta * eta, eta3 = eta2 * eta;
  const double e = epsilon;
  const double s = std::sin(varphi), c = std::cos(varphi);

  const double den = -eta2 * k * k - 16.0 * eta2 * e * e * c * c +
                     4.0 * (eta2 - 1.0) * (eta2 - 1.0) * e * e * s * s;
  if (std::abs(den) < 1e-14 * k * k)
    throw DegenerateError("perturbed matrix is singular (closed-form denominator vanishes)");

  ExactFirstColumn f;
  f.x_odd = (2.0 * k * eta2 + 4.0 * eta * (eta2 - 1.0) * e * s) / den;
  f.x_even = (eta2 * k * k + 8.0 * eta2 * e * e * c * c + 2.0 * eta3 * k * e * s +
              4.0 * (eta2 - 1.0) * e * e * s * s) /
             (jh * den);
  f.p_even = -2.0 * eta2 * e * c * (eta * k + 2.0 * (1.0 + eta2) * e * s) / (jh * den);
  f.p_odd = -8.0 * eta3 * e * c / den;
  return f;
}

Eigen::VectorXd expand_first_column(const ChainParams& chain, const ExactFirstColumn& f) {
  const int n = chain.sites();
  Eigen::VectorXd col(2 * n);
  for (int i = 1; i <= n; ++i) {
    col(i - 1) = (i % 2 == 1) ? f.x_odd : f.x_even;
    col(n + i - 1) = (i % 2 == 1) ? f.p_odd : f.p_even;
  }
  return col;
}

}  // namespace nhsense
