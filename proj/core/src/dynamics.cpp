#include "nhsense/dynamics.hpp"

#include <cmath>

#include "nhsense/errors.hpp"

namespace nhsense {

Eigen::MatrixXd build_h_block(const ChainParams& chain, int m) {
  const int n = chain.sites();
  if (m < 1 || m > n) throw DomainError("site m out of range");
  const double j = chain.effective_hopping();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    h(i + 1, i) = j;
    h(i, i + 1) = -j;
  }
  h(m - 1, m - 1) = -0.5 * chain.coupling();
  return h;
}

std::vector<MatrixEntry> perturbation_entries(const ChainParams& chain,
                                              const PerturbationSpec& pert) {
  const int n = chain.sites();
  const double e = pert.epsilon;
  const double l = chain.amplification() * (n - 1);
  if (pert.kind == PerturbationKind::LocalN) {
    return {{n, 2 * n, e * std::exp(-2.0 * l)}, {2 * n, n, -e * std::exp(2.0 * l)}};
  }
  const double s = std::sin(pert.varphi), c = std::cos(pert.varphi);
  const double up = std::exp(l), down = std::exp(-l);
  return {
      {1, n, e * s * up},          {1, 2 * n, e * c * down},
      {n, 1, -e * s * down},       {n, n + 1, e * c * down},
      {n + 1, n, -e * c * up},     {n + 1, 2 * n, e * s * down},
      {2 * n, 1, -e * c * up},     {2 * n, n + 1, -e * s * up},
  };
}

DynMatrix build_htilde(const ChainParams& chain, const PerturbationSpec& pert, int m) {
  const int n = chain.sites();
  DynMatrix out{n, Eigen::MatrixXd::Zero(2 * n, 2 * n)};
  const Eigen::MatrixXd h = build_h_block(chain, m);
  out.data.topLeftCorner(n, n) = h;
  out.data.bottomRightCorner(n, n) = h;
  if (pert.epsilon != 0.0) {
    for (const auto& e : perturbation_entries(chain, pert)) {
      if (!std::isfinite(e.value)) throw OverflowError("perturbation entry is not finite");
      out.data(e.row - 1, e.col - 1) += e.value;
    }
  }
  return out;
}

DynMatrix invert(const DynMatrix& m) {
  const Eigen::Index dim = m.data.rows();
  if (dim != m.data.cols()) throw DomainError("invert: matrix must be square");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m.data);
  const auto& packed = lu.matrixLU();
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (!(std::abs(packed(i, i)) >= 1e-300))
      throw SingularError("dynamical matrix is singular (pivot below 1e-300)");
  }
  DynMatrix out{m.n, lu.inverse()};
  if (!out.data.allFinite()) throw SingularError("inverse has non-finite entries");
  return out;
}

Eigen::VectorXd drive_vector(const ChainParams& chain, const DriveSpec& drive) {
  check_site(chain, drive.m);
  const int n = chain.sites();
  const double amp = std::sqrt(2.0 * chain.coupling()) * drive.beta_abs;
  const double shift = chain.amplification() * (drive.m - 1);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(2 * n);
  d(drive.m - 1) = -amp * std::cos(drive.theta) * std::exp(-shift);
  d(n + drive.m - 1) = -amp * std::sin(drive.theta) * std::exp(shift);
  return d;
}

SteadyMeans unsqueeze(const ChainParams& chain, const Eigen::VectorXd& q) {
  const int n = chain.sites();
  if (q.size() != 2 * n) throw DomainError("state vector must have length 2N");
  SteadyMeans s;
  s.xt = q.head(n);
  s.pt = q.tail(n);
  s.x.resize(n);
  s.p.resize(n);
  s.a.resize(n);
  const double a = chain.amplification();
  for (int i = 0; i < n; ++i) {
    s.x(i) = std::exp(a * i) * s.xt(i);
    s.p(i) = std::exp(-a * i) * s.pt(i);
    s.a(i) = std::complex<double>(s.x(i), s.p(i)) / std::sqrt(2.0);
  }
  return s;
}

SteadyMeans steady_means(const ChainParams& chain, const DriveSpec& drive,
                         const PerturbationSpec& pert) {
  const DynMatrix inv = invert(build_htilde(chain, pert, drive.m));
  return unsqueeze(chain, -(inv.data * drive_vector(chain, drive)));
}

Eigen::VectorXcd mean_shift(const ChainParams& chain, const DriveSpec& drive,
                            const PerturbationSpec& pert) {
  const int n = chain.sites();
  const DynMatrix h0 = build_htilde(chain, pert.with_epsilon(0.0), drive.m);
  const Eigen::VectorXd d = drive_vector(chain, drive);
  const Eigen::VectorXd q0 = -(invert(h0).data * d);
  if (pert.epsilon == 0.0) return Eigen::VectorXcd::Zero(n);
  const DynMatrix he = build_htilde(chain, pert, drive.m);
  Eigen::VectorXd vq = Eigen::VectorXd::Zero(2 * n);
  for (const auto& e : perturbation_entries(chain, pert))
    vq(e.row - 1) += e.value * q0(e.col - 1);
  const Eigen::VectorXd dq = -(invert(he).data * vq);
  return unsqueeze(chain, dq).a;
}

OutputCoeffs output_fluct_coeffs(const ChainParams& chain, int m, const DynMatrix& inverse) {
  check_site(chain, m);
  const int n = chain.sites();
  const double k = chain.coupling();
  const double g = 2.0 * chain.amplification() * (m - 1);
  const int i = m - 1, j = n + m - 1;
  OutputCoeffs c;
  c.cxx = 1.0 + k * inverse.data(i, i);
  c.cxp = k * inverse.data(i, j) * std::exp(g);
  c.cpx = k * inverse.data(j, i) * std::exp(-g);
  c.cpp = 1.0 + k * inverse.data(j, j);
  return c;
}

OutputCoeffs output_fluct_coeffs(const ChainParams& chain, const DriveSpec& drive,
                                 const PerturbationSpec& pert) {
  return output_fluct_coeffs(chain, drive.m, invert(build_htilde(chain, pert, drive.m)));
}

}  // namespace nhsense
