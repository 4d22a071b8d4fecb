#include "nhsense/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nhsense/errors.hpp"

namespace nhsense {
namespace {

struct Sparse {
  std::vector<int> row, col;
  std::vector<double> val;

  explicit Sparse(const Eigen::MatrixXd& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r)
        if (m(r, c) != 0.0) {
          row.push_back(static_cast<int>(r));
          col.push_back(static_cast<int>(c));
          val.push_back(m(r, c));
        }
  }

  // out = M q + d
  void apply(const Eigen::VectorXd& q, const Eigen::VectorXd& d, Eigen::VectorXd& out) const {
    out = d;
    for (std::size_t k = 0; k < val.size(); ++k) out(row[k]) += val[k] * q(col[k]);
  }
};

double output_x(const ChainParams& chain, int m, const Eigen::VectorXd& q, double x_in) {
  return x_in + std::sqrt(chain.coupling()) * std::exp(chain.amplification() * (m - 1)) * q(m - 1);
}

double output_p(const ChainParams& chain, int m, const Eigen::VectorXd& q, double p_in) {
  const int n = chain.sites();
  return p_in +
         std::sqrt(chain.coupling()) * std::exp(-chain.amplification() * (m - 1)) * q(n + m - 1);
}

}  // namespace

OdeRun integrate_linear(const Eigen::MatrixXd& h, const Eigen::VectorXd& d, double kappa,
                        const OdeOptions& opt) {
  if (h.rows() != h.cols() || h.rows() != d.size())
    throw DomainError("integrate_linear: dimension mismatch");
  if (!(opt.dt > 0) || !(opt.t_end > 0)) throw StepSizeError("dt and t_end must be > 0");

  const Sparse a(h);
  const Eigen::Index dim = d.size();
  Eigen::VectorXd q = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  const double dt = opt.dt;
  const long steps = static_cast<long>(std::ceil(opt.t_end / dt));
  const long sample_every = std::max(1L, steps / std::max(1, opt.max_samples));

  OdeRun run;
  run.dt = dt;
  run.trajectory.push_back(q);
  auto scale = [&] { return kappa * q.cwiseAbs().maxCoeff() + opt.drive_scale; };
  long s = 0;
  for (; s < steps; ++s) {
    a.apply(q, d, k1);
    if (s > 0 && k1.cwiseAbs().maxCoeff() <= opt.stop_tolerance * scale()) break;
    tmp = q + 0.5 * dt * k1;
    a.apply(tmp, d, k2);
    tmp = q + 0.5 * dt * k2;
    a.apply(tmp, d, k3);
    tmp = q + dt * k3;
    a.apply(tmp, d, k4);
    q += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double norm = q.cwiseAbs().maxCoeff();
    if (!(norm <= 1e12))
      throw DivergenceError("trajectory diverged at t = " + std::to_string((s + 1) * dt));
    if ((s + 1) % sample_every == 0) run.trajectory.push_back(q);
  }
  a.apply(q, d, k1);
  run.t_end = s * dt;
  run.residual = k1.cwiseAbs().maxCoeff();
  run.converged = run.residual <= 1e-10 * scale();
  run.state = q;
  if (run.trajectory.size() == 0 || !run.trajectory.back().isApprox(q)) run.trajectory.push_back(q);
  return run;
}

double max_stable_step(const ChainParams& chain, const PerturbationSpec& pert) {
  const double rate =
      std::max({chain.effective_hopping() * std::exp(chain.amplification()), chain.coupling(),
                pert.epsilon * amplification_eta(chain)});
  return 0.05 / rate;
}

OdeRun integrate_means(const ChainParams& chain, const DriveSpec& drive,
                       const PerturbationSpec& pert, double t_end, double dt) {
  check_site(chain, drive.m);
  if (!(dt > 0) || dt > max_stable_step(chain, pert))
    throw StepSizeError("dt exceeds 0.05 / max(J e^A, kappa, eps e^{A(N-1)})");
  if (!(t_end >= 20.0 / chain.coupling())) throw StepSizeError("t_end must be >= 20 / kappa");
  OdeOptions opt;
  opt.t_end = t_end;
  opt.dt = dt;
  opt.drive_scale = std::sqrt(2.0 * chain.coupling()) * drive.beta_abs;
  return integrate_linear(build_htilde(chain, pert, drive.m).data, drive_vector(chain, drive),
                          chain.coupling(), opt);
}

Eigen::VectorXd input_forcing(const ChainParams& chain, int m, double dx_in, double dp_in) {
  check_site(chain, m);
  const int n = chain.sites();
  const double sk = std::sqrt(chain.coupling());
  const double shift = chain.amplification() * (m - 1);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(2 * n);
  f(m - 1) = -sk * dx_in * std::exp(-shift);
  f(n + m - 1) = -sk * dp_in * std::exp(shift);
  return f;
}

OutputCoeffs finite_difference_coeffs(const ChainParams& chain, const DriveSpec& drive,
                                      const PerturbationSpec& pert, double offset,
                                      double t_end, double dt) {
  if (!(offset > 0)) throw DomainError("offset must be > 0");
  check_site(chain, drive.m);
  if (!(dt > 0) || dt > max_stable_step(chain, pert))
    throw StepSizeError("dt exceeds 0.05 / max(J e^A, kappa, eps e^{A(N-1)})");
  const int m = drive.m;
  const Eigen::MatrixXd h = build_htilde(chain, pert, m).data;
  const double x0 = std::sqrt(2.0) * drive.beta_abs * std::cos(drive.theta);
  const double p0 = std::sqrt(2.0) * drive.beta_abs * std::sin(drive.theta);
  OdeOptions opt;
  opt.t_end = t_end;
  opt.dt = dt;
  opt.drive_scale = std::sqrt(2.0 * chain.coupling()) * drive.beta_abs;

  auto solve = [&](double xi, double pi_) {
    const OdeRun r = integrate_linear(h, input_forcing(chain, m, xi, pi_), chain.coupling(), opt);
    if (!r.converged) throw DivergenceError("finite-difference run did not converge");
    return std::pair{output_x(chain, m, r.state, xi), output_p(chain, m, r.state, pi_)};
  };
  const auto base = solve(x0, p0);
  const auto dx = solve(x0 + offset, p0);
  const auto dp = solve(x0, p0 + offset);
  OutputCoeffs c;
  c.cxx = (dx.first - base.first) / offset;
  c.cpx = (dx.second - base.second) / offset;
  c.cxp = (dp.first - base.first) / offset;
  c.cpp = (dp.second - base.second) / offset;
  return c;
}

Eigen::MatrixXd column_solve_inverse(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw DomainError("column_solve_inverse: matrix must be square");
  Eigen::MatrixXd inv(n, n);
  for (int j = 0; j < n; ++j) {
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) a[r][c] = m(r, c);
      a[r][n] = (r == j) ? 1.0 : 0.0;
    }
    std::vector<int> var(n);
    std::iota(var.begin(), var.end(), 0);
    for (int k = 0; k < n; ++k) {
      int pr = k, pc = k;
      double best = 0.0;
      for (int r = k; r < n; ++r)
        for (int c = k; c < n; ++c)
          if (std::abs(a[r][c]) > best) {
            best = std::abs(a[r][c]);
            pr = r;
            pc = c;
          }
      if (best < 1e-300) throw SingularError("column_solve_inverse: matrix is singular");
      std::swap(a[k], a[pr]);
      if (pc != k) {
        for (int r = 0; r < n; ++r) std::swap(a[r][k], a[r][pc]);
        std::swap(var[k], var[pc]);
      }
      const double piv = a[k][k];
      for (int c = k; c <= n; ++c) a[k][c] /= piv;
      for (int r = 0; r < n; ++r) {
        if (r == k || a[r][k] == 0.0) continue;
        const double f = a[r][k];
        for (int c = k; c <= n; ++c) a[r][c] -= f * a[k][c];
      }
    }
    for (int k = 0; k < n; ++k) inv(var[k], j) = a[k][n];
  }
  return inv;
}

}  // namespace nhsense
