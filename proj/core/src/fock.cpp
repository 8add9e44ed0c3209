#include "bgmac/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bgmac {

int FockState::total_dim() const {
  int d = 1;
  for (int x : dims) d *= x;
  return d;
}

FockState fock_tmsv(double ns, int dim) {
  if (ns < 0.0) throw std::invalid_argument("fock_tmsv: negative brightness");
  if (dim < 1) throw std::invalid_argument("fock_tmsv: empty truncation");
  FockState st;
  st.dims = {dim, dim};
  st.amplitudes = Eigen::VectorXcd::Zero(dim * dim);
  double mass = 0.0;
  for (int n = 0; n < dim; ++n) {
    const double p = (ns == 0.0) ? (n == 0 ? 1.0 : 0.0)
                                 : std::pow(ns / (ns + 1.0), n) / (ns + 1.0);
    st.amplitudes(n * dim + n) = std::sqrt(p);
    mass += p;
  }
  st.tail_mass = 1.0 - mass;
  return st;
}

namespace {

// Beamsplitter on (signal, environment) restricted to each total-photon
// sector, where the hopping generator is tridiagonal and its exponential is
// exactly orthogonal. Sectors clipped by the truncation box stay unitary, so
// the map preserves trace; the physical error is bounded by the clipped mass.
std::vector<Eigen::MatrixXd> sector_beamsplitters(int d_sig, int d_env, double theta) {
  std::vector<Eigen::MatrixXd> sectors;
  for (int n = 0; n <= d_sig + d_env - 2; ++n) {
    const int a_min = std::max(0, n - (d_env - 1));
    const int a_max = std::min(d_sig - 1, n);
    const int size = a_max - a_min + 1;
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(size, size);
    for (int i = 0; i + 1 < size; ++i) {
      const int a = a_min + i;  // transition |a, n-a> -> |a+1, n-a-1>
      const double amp = theta * std::sqrt(static_cast<double>(a + 1) * (n - a));
      gen(i + 1, i) = amp;
      gen(i, i + 1) = -amp;
    }
    sectors.push_back(gen.exp());
  }
  return sectors;
}

}  // namespace

FockState fock_thermal_loss_apply(const FockState& state, int signal_mode, double tau,
                                  double env_photons, int env_dim) {
  if (!state.pure) {
    throw std::invalid_argument("fock_thermal_loss_apply: pure input states only");
  }
  if (signal_mode < 0 || signal_mode >= static_cast<int>(state.dims.size())) {
    throw std::out_of_range("fock_thermal_loss_apply: signal mode out of range");
  }
  if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("transmissivity must lie in [0, 1]");
  if (env_photons < 0.0 || env_dim < 1) {
    throw std::invalid_argument("fock_thermal_loss_apply: bad environment");
  }

  int pre = 1, post = 1;
  const int m = static_cast<int>(state.dims.size());
  for (int i = 0; i < signal_mode; ++i) pre *= state.dims[i];
  for (int i = signal_mode + 1; i < m; ++i) post *= state.dims[i];
  const int ds = state.dims[signal_mode];
  const int total = state.total_dim();

  const double theta = std::acos(std::sqrt(tau));
  const std::vector<Eigen::MatrixXd> bs = sector_beamsplitters(ds, env_dim, theta);

  std::vector<double> env_p(env_dim);
  double env_mass = 0.0;
  for (int e = 0; e < env_dim; ++e) {
    env_p[e] = (env_photons == 0.0)
                   ? (e == 0 ? 1.0 : 0.0)
                   : std::pow(env_photons / (env_photons + 1.0), e) / (env_photons + 1.0);
    env_mass += env_p[e];
  }

  FockState out;
  out.dims = state.dims;
  out.pure = false;
  out.density = Eigen::MatrixXcd::Zero(total, total);
  out.tail_mass = state.tail_mass + (1.0 - env_mass);

  Eigen::MatrixXcd columns(total, env_dim);  // post-beamsplitter state per kept env level
  for (int env_in = 0; env_in < env_dim; ++env_in) {
    if (env_p[env_in] <= 0.0) continue;
    columns.setZero();
    for (int p = 0; p < pre; ++p) {
      for (int a_in = 0; a_in < ds; ++a_in) {
        const int n = a_in + env_in;
        const Eigen::MatrixXd& u = bs[n];
        const int a_min = std::max(0, n - (env_dim - 1));
        const int col = a_in - a_min;
        for (int q = 0; q < post; ++q) {
          const std::complex<double> c = state.amplitudes((p * ds + a_in) * post + q);
          if (c == std::complex<double>(0.0, 0.0)) continue;
          for (int row = 0; row < u.rows(); ++row) {
            const int a_out = a_min + row;
            const int e_out = n - a_out;
            columns((p * ds + a_out) * post + q, e_out) += u(row, col) * c;
          }
        }
      }
    }
    out.density.selfadjointView<Eigen::Lower>().rankUpdate(columns, env_p[env_in]);
  }
  out.density = Eigen::MatrixXcd(out.density.selfadjointView<Eigen::Lower>());
  return out;
}

namespace {

std::vector<int> complement_modes(int m, const std::vector<int>& keep) {
  std::vector<bool> used(m, false);
  for (int k : keep) used[k] = true;
  std::vector<int> rest;
  for (int i = 0; i < m; ++i) {
    if (!used[i]) rest.push_back(i);
  }
  return rest;
}

double entropy_of_density(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (double lam : es.eigenvalues()) {
    if (lam > 1e-15) s -= lam * std::log2(lam);
  }
  return s;
}

}  // namespace

Eigen::MatrixXcd reduced_density(const FockState& state, const std::vector<int>& keep) {
  const int m = static_cast<int>(state.dims.size());
  for (int k : keep) {
    if (k < 0 || k >= m) throw std::out_of_range("reduced_density: mode out of range");
  }
  const std::vector<int> rest = complement_modes(m, keep);

  // Strides of each mode in the row-major full index.
  std::vector<int> stride(m, 1);
  for (int i = m - 2; i >= 0; --i) stride[i] = stride[i + 1] * state.dims[i + 1];

  int dim_keep = 1, dim_rest = 1;
  for (int k : keep) dim_keep *= state.dims[k];
  for (int r : rest) dim_rest *= state.dims[r];

  const auto full_index = [&](int keep_idx, int rest_idx) {
    int idx = 0;
    for (int i = static_cast<int>(keep.size()) - 1; i >= 0; --i) {
      idx += (keep_idx % state.dims[keep[i]]) * stride[keep[i]];
      keep_idx /= state.dims[keep[i]];
    }
    for (int i = static_cast<int>(rest.size()) - 1; i >= 0; --i) {
      idx += (rest_idx % state.dims[rest[i]]) * stride[rest[i]];
      rest_idx /= state.dims[rest[i]];
    }
    return idx;
  };

  if (state.pure) {
    Eigen::MatrixXcd mat(dim_keep, dim_rest);
    for (int i = 0; i < dim_keep; ++i) {
      for (int r = 0; r < dim_rest; ++r) mat(i, r) = state.amplitudes(full_index(i, r));
    }
    return mat * mat.adjoint();
  }
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim_keep, dim_keep);
  for (int i = 0; i < dim_keep; ++i) {
    for (int j = 0; j < dim_keep; ++j) {
      std::complex<double> sum = 0.0;
      for (int r = 0; r < dim_rest; ++r) {
        sum += state.density(full_index(i, r), full_index(j, r));
      }
      rho(i, j) = sum;
    }
  }
  return rho;
}

double fock_mutual_information(const FockState& state, const std::vector<int>& partition) {
  const int m = static_cast<int>(state.dims.size());
  const std::vector<int> rest = complement_modes(m, partition);
  if (partition.empty() || rest.empty()) return 0.0;
  std::vector<int> all(m);
  for (int i = 0; i < m; ++i) all[i] = i;
  const double s_joint = entropy_of_density(reduced_density(state, all));
  return entropy_of_density(reduced_density(state, partition)) +
         entropy_of_density(reduced_density(state, rest)) - s_joint;
}

double fock_mean_photon(const FockState& state, int mode) {
  const Eigen::MatrixXcd rho = reduced_density(state, {mode});
  double n = 0.0;
  for (int i = 0; i < rho.rows(); ++i) n += i * rho(i, i).real();
  return n;
}

double fock_trace(const FockState& state) {
  if (state.pure) return state.amplitudes.squaredNorm();
  return state.density.trace().real();
}

}  // namespace bgmac
