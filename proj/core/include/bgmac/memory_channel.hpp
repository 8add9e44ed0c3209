#pragma once

#include "bgmac/capacities.hpp"
#include "bgmac/channel.hpp"

#include <Eigen/Dense>

// N-fold causal memory thermal-loss interference channels: a memory mode
// couples successive environments (transmissivity epsilon) and signals
// (transmissivity gamma). The N-use channel unravels into N independent
// single-mode thermal-loss channels through the SVD of its signal transfer
// matrix; the total EA rate is then an energy-allocation problem across the
// unravelled channels.

namespace bgmac {

struct CausalMemoryParams {
  double epsilon = 0.5;  // noise-memory coupling transmissivity, in [0,1]
  double gamma = 0.5;    // signal-memory coupling transmissivity, in [0,1]
  int uses = 1;          // N >= 1
  double dark_photons = 0.0;  // thermal photons of environment and memory modes
};

void require_valid(const CausalMemoryParams& params);

/// Signal transfer W' (N x N, lower triangular) and environment coupling K
/// (N x (N+1); columns are the N local environments followed by the initial
/// memory mode). Satisfies W' W'^T + K K^T = I.
struct UnrolledTransform {
  Eigen::MatrixXd signal;
  Eigen::MatrixXd environment;
};

UnrolledTransform unroll(const CausalMemoryParams& params);

/// Closed form of the Gram matrix W' W'^T.
Eigen::MatrixXd commutation_matrix(const CausalMemoryParams& params);

/// SVD unravelling: with beta = output_rotation * b and alpha =
/// input_rotation * a, the N uses decouple into beta_d = sqrt(tau_d) alpha_d
/// plus thermal noise with dark count dark(d) = (1 - tau_d) * N_B.
struct UnravelledChannels {
  Eigen::VectorXd tau;
  Eigen::VectorXd dark;
  Eigen::MatrixXd input_rotation;   // orthonormal N x N
  Eigen::MatrixXd output_rotation;  // orthonormal N x N
};

UnravelledChannels unravel(const CausalMemoryParams& params);

struct AllocationConfig {
  int max_rounds = 80;
  double tol = 1e-11;  // objective improvement per round at convergence
  int starts = 3;      // equal split plus random restarts
  unsigned seed = 0;
};

struct MemoryRateResult {
  double bits = 0.0;
  /// senders x uses matrix of assigned brightness; rows sum to the budget.
  Eigen::MatrixXd allocation;
  bool converged = false;
};

/// Total EA rate of the N-use memory interference channel, optimized over the
/// distribution of each sender's energy across the unravelled sub-channels.
MemoryRateResult memory_total_rate(const CausalMemoryParams& params,
                                   const std::vector<double>& eta, const EnergyBudget& budget,
                                   const AllocationConfig& config = {});

/// Same allocation optimization with the coherent-state total rate per
/// sub-channel as the objective.
MemoryRateResult memory_coherent_benchmark(const CausalMemoryParams& params,
                                           const std::vector<double>& eta,
                                           const EnergyBudget& budget,
                                           const AllocationConfig& config = {});

}  // namespace bgmac
