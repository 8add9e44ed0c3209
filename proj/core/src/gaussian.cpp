#include "bgmac/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace bgmac {

double thermal_entropy(double mean_photons) {
  if (mean_photons < -1e-9) {
    throw std::domain_error("thermal_entropy: negative mean photon number " +
                            std::to_string(mean_photons));
  }
  // Evaluate through the x->0 limit to avoid 0*log(0).
  if (mean_photons < 1e-15) return 0.0;
  const double x = mean_photons;
  return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

CovarianceMatrix::CovarianceMatrix(const Eigen::MatrixXd& v) {
  if (v.rows() != v.cols() || v.rows() % 2 != 0) {
    throw std::invalid_argument("CovarianceMatrix: need a square 2m x 2m matrix");
  }
  const double asym = (v - v.transpose()).cwiseAbs().maxCoeff();
  if (v.size() > 0 && asym > tol::symmetry * std::max(1.0, v.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("CovarianceMatrix: matrix not symmetric, max deviation " +
                                std::to_string(asym));
  }
  mat_ = 0.5 * (v + v.transpose());
}

CovarianceMatrix CovarianceMatrix::vacuum(int modes) {
  return CovarianceMatrix(Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

CovarianceMatrix thermal_cm(double mean_photons, int modes) {
  if (mean_photons < 0) {
    throw std::invalid_argument("thermal_cm: negative mean photon number");
  }
  return CovarianceMatrix((2.0 * mean_photons + 1.0) *
                          Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

CovarianceMatrix tmsv_cm(double mean_photons) {
  if (mean_photons < 0) {
    throw std::invalid_argument("tmsv_cm: negative mean photon number");
  }
  const double d = 2.0 * mean_photons + 1.0;
  const double c = 2.0 * std::sqrt(mean_photons * (mean_photons + 1.0));
  Eigen::Matrix4d v;
  v << d, 0, c, 0,
       0, d, 0, -c,
       c, 0, d, 0,
       0, -c, 0, d;
  return CovarianceMatrix(v);
}

Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int i = 0; i < modes; ++i) {
    w(2 * i, 2 * i + 1) = 1.0;
    w(2 * i + 1, 2 * i) = -1.0;
  }
  return w;
}

namespace {

// Raw symplectic spectrum: singular values of V^{1/2} Omega V^{1/2}, one per
// mode (they come in equal pairs). No clamping or physicality checks.
std::vector<double> raw_symplectic_eigenvalues(const CovarianceMatrix& v) {
  const int m = v.modes();
  if (m == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(v.matrix());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("symplectic_eigenvalues: eigensolver failed");
  }
  Eigen::VectorXd lam = es.eigenvalues();
  if (lam.minCoeff() < -1e-9 * std::max(1.0, lam.cwiseAbs().maxCoeff())) {
    throw unphysical_error("symplectic_eigenvalues: covariance matrix not positive semidefinite");
  }
  const Eigen::MatrixXd sqrt_v =
      es.eigenvectors() * lam.cwiseMax(0.0).cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
  const Eigen::MatrixXd k = sqrt_v * symplectic_form(m) * sqrt_v;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(k);
  const Eigen::VectorXd sv = svd.singularValues();  // sorted descending
  std::vector<double> nu(m);
  for (int i = 0; i < m; ++i) nu[i] = 0.5 * (sv(2 * i) + sv(2 * i + 1));
  return nu;
}

}  // namespace

std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& v) {
  std::vector<double> nu = raw_symplectic_eigenvalues(v);
  for (double& x : nu) {
    if (x < 1.0 - tol::physicality) {
      throw unphysical_error("symplectic_eigenvalues: unphysical state, nu = " +
                             std::to_string(x));
    }
    if (x < 1.0) {
      // Pure states sit on the boundary; round pair-splitting noise up.
      if (x >= 1.0 - tol::pure_clamp) x = 1.0;
    }
  }
  return nu;
}

bool is_physical(const CovarianceMatrix& v, double tol) {
  try {
    const std::vector<double> nu = raw_symplectic_eigenvalues(v);
    for (double x : nu) {
      if (x < 1.0 - tol) return false;
    }
    return true;
  } catch (const unphysical_error&) {
    return false;
  }
}

double von_neumann_entropy(const CovarianceMatrix& v) {
  double s = 0.0;
  for (double nu : symplectic_eigenvalues(v)) {
    s += thermal_entropy(std::max(0.0, 0.5 * (nu - 1.0)));
  }
  return s;
}

SymplecticTransform::SymplecticTransform(Eigen::MatrixXd m) : mat(std::move(m)) {
  if (mat.rows() % 2 != 0 || mat.cols() % 2 != 0) {
    throw std::invalid_argument("SymplecticTransform: dimensions must be even");
  }
}

bool is_symplectic(const SymplecticTransform& t, double eps) {
  if (t.mat.rows() != t.mat.cols()) return false;
  const Eigen::MatrixXd w = symplectic_form(t.out_modes());
  return (t.mat * w * t.mat.transpose() - w).cwiseAbs().maxCoeff() <= eps;
}

namespace {

// 2x2 block implementing multiplication of a mode operator by exp(i phi).
Eigen::Matrix2d rotation_block(double phi) {
  Eigen::Matrix2d r;
  r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return r;
}

}  // namespace

SymplecticTransform squeezer(double r, double theta) {
  Eigen::Matrix2d s = Eigen::Matrix2d::Zero();
  s(0, 0) = std::exp(-r);
  s(1, 1) = std::exp(r);
  return SymplecticTransform(rotation_block(-theta) * s);
}

SymplecticTransform phase_rotation(double theta) {
  return SymplecticTransform(rotation_block(-theta));
}

SymplecticTransform beamsplitter_array(const std::vector<std::complex<double>>& weights) {
  const int s = static_cast<int>(weights.size());
  if (s == 0) throw std::invalid_argument("beamsplitter_array: no weights");
  double norm2 = 0.0;
  for (const auto& c : weights) norm2 += std::norm(c);
  if (std::abs(norm2 - 1.0) > 1e-12) {
    throw std::invalid_argument("beamsplitter_array: weights must have unit norm");
  }
  Eigen::MatrixXd t(2, 2 * s);
  for (int k = 0; k < s; ++k) {
    t.block<2, 2>(0, 2 * k) = std::abs(weights[k]) * rotation_block(std::arg(weights[k]));
  }
  return SymplecticTransform(std::move(t));
}

SymplecticTransform passive_transform(const Eigen::MatrixXcd& u) {
  const int n = static_cast<int>(u.rows());
  if (u.cols() != n) throw std::invalid_argument("passive_transform: unitary must be square");
  Eigen::MatrixXd t(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const double re = u(j, k).real();
      const double im = u(j, k).imag();
      t(2 * j, 2 * k) = re;
      t(2 * j, 2 * k + 1) = -im;
      t(2 * j + 1, 2 * k) = im;
      t(2 * j + 1, 2 * k + 1) = re;
    }
  }
  return SymplecticTransform(std::move(t));
}

SymplecticTransform direct_sum(const SymplecticTransform& a, const SymplecticTransform& b) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(a.mat.rows() + b.mat.rows(),
                                            a.mat.cols() + b.mat.cols());
  t.topLeftCorner(a.mat.rows(), a.mat.cols()) = a.mat;
  t.bottomRightCorner(b.mat.rows(), b.mat.cols()) = b.mat;
  return SymplecticTransform(std::move(t));
}

CovarianceMatrix direct_sum(const CovarianceMatrix& a, const CovarianceMatrix& b) {
  const int na = 2 * a.modes(), nb = 2 * b.modes();
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(na + nb, na + nb);
  v.topLeftCorner(na, na) = a.matrix();
  v.bottomRightCorner(nb, nb) = b.matrix();
  return CovarianceMatrix(v);
}

CovarianceMatrix apply_transform(const SymplecticTransform& t, const CovarianceMatrix& v,
                                 const CovarianceMatrix& appended_env) {
  const int in_modes = v.modes() + appended_env.modes();
  if (t.in_modes() != in_modes) {
    throw std::invalid_argument("apply_transform: transform expects " +
                                std::to_string(t.in_modes()) + " input modes, got " +
                                std::to_string(in_modes));
  }
  Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(2 * in_modes, 2 * in_modes);
  joint.topLeftCorner(2 * v.modes(), 2 * v.modes()) = v.matrix();
  if (appended_env.modes() > 0) {
    joint.bottomRightCorner(2 * appended_env.modes(), 2 * appended_env.modes()) =
        appended_env.matrix();
  }
  Eigen::MatrixXd out = t.mat * joint * t.mat.transpose();
  return CovarianceMatrix(0.5 * (out + out.transpose()));
}

CovarianceMatrix subsystem_cm(const CovarianceMatrix& v, const std::vector<int>& mode_indices) {
  const int m = static_cast<int>(mode_indices.size());
  Eigen::MatrixXd sub(2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (mode_indices[i] < 0 || mode_indices[i] >= v.modes()) {
        throw std::out_of_range("subsystem_cm: mode index out of range");
      }
      sub.block<2, 2>(2 * i, 2 * j) = v.matrix().block<2, 2>(2 * mode_indices[i], 2 * mode_indices[j]);
    }
  }
  return CovarianceMatrix(sub);
}

double mean_photon(const CovarianceMatrix& v, int mode_index) {
  if (mode_index < 0 || mode_index >= v.modes()) {
    throw std::out_of_range("mean_photon: mode index out of range");
  }
  return 0.25 * (v.matrix()(2 * mode_index, 2 * mode_index) +
                 v.matrix()(2 * mode_index + 1, 2 * mode_index + 1)) - 0.5;
}

CovarianceMatrix purify_single_mode(const Eigen::Matrix2d& v) {
  const CovarianceMatrix single(v);
  const double nu = symplectic_eigenvalues(single)[0];
  // Any det-1 positive symmetric 2x2 matrix is symplectic, so V^{1/2}/sqrt(nu)
  // brings the two-mode-squeezed purification of the thermal core onto V.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(single.matrix());
  const Eigen::Matrix2d sqrt_v =
      es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
      es.eigenvectors().transpose();
  const Eigen::Matrix2d s = sqrt_v / std::sqrt(nu);
  const double c = std::sqrt(std::max(0.0, nu * nu - 1.0));
  Eigen::Matrix4d pure;
  pure << nu, 0, c, 0,
          0, nu, 0, -c,
          c, 0, nu, 0,
          0, -c, 0, nu;
  Eigen::Matrix4d local = Eigen::Matrix4d::Identity();
  local.topLeftCorner<2, 2>() = s;
  Eigen::Matrix4d out = local * pure * local.transpose();
  return CovarianceMatrix(0.5 * (out + out.transpose()));
}

ModeLayout::ModeLayout(std::vector<std::string> names) : labels(std::move(names)) {
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw std::invalid_argument("ModeLayout: duplicate label " + l);
    }
  }
}

int ModeLayout::index_of(const std::string& label) const {
  for (int i = 0; i < modes(); ++i) {
    if (labels[i] == label) return i;
  }
  throw std::out_of_range("ModeLayout: no label " + label);
}

ModeLayout ModeLayout::ea_input(int senders) {
  std::vector<std::string> names;
  for (int k = 1; k <= senders; ++k) {
    names.push_back("A" + std::to_string(k));
    names.push_back("A" + std::to_string(k) + "'");
  }
  return ModeLayout(std::move(names));
}

ModeLayout ModeLayout::ea_output(int senders) {
  std::vector<std::string> names{"B"};
  for (int k = 1; k <= senders; ++k) names.push_back("A" + std::to_string(k) + "'");
  return ModeLayout(std::move(names));
}

}  // namespace bgmac
