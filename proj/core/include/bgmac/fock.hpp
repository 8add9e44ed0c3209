#pragma once

#include <Eigen/Dense>

#include <vector>

// Truncated Fock-space oracle: small-instance brute force against which the
// covariance-matrix pipeline is validated. States live on a few modes with
// per-mode truncation; channels act by explicit beamsplitter unitaries with a
// thermal environment that is traced out afterwards.

namespace bgmac {

struct FockState {
  std::vector<int> dims;        // per-mode truncation
  bool pure = true;
  Eigen::VectorXcd amplitudes;  // pure states, row-major over dims
  Eigen::MatrixXcd density;     // mixed states
  double tail_mass = 0.0;       // probability mass lost to truncation so far

  int total_dim() const;
};

/// Two-mode squeezed vacuum over modes [reference, signal], both truncated at
/// `dim`. Amplitudes sqrt(N^n / (N+1)^{n+1}) on |n,n>.
FockState fock_tmsv(double ns, int dim);

/// Thermal-loss action on one mode of a pure state: a beamsplitter of
/// transmissivity tau couples the mode to a thermal environment with mean
/// photon number env_photons (truncated at env_dim), which is then traced
/// out. Returns a density-matrix state on the original modes.
FockState fock_thermal_loss_apply(const FockState& state, int signal_mode, double tau,
                                  double env_photons, int env_dim);

/// Reduced density matrix on the listed modes (in the listed order).
Eigen::MatrixXcd reduced_density(const FockState& state, const std::vector<int>& keep);

/// Mutual information I(X; Y) in bits between the listed modes X and the
/// complement Y.
double fock_mutual_information(const FockState& state, const std::vector<int>& partition);

double fock_mean_photon(const FockState& state, int mode);

double fock_trace(const FockState& state);

}  // namespace bgmac
