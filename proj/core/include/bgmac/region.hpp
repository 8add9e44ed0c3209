#pragma once

#include "bgmac/capacities.hpp"
#include "bgmac/channel.hpp"
#include "bgmac/simplex.hpp"

#include <vector>

// One-shot Gaussian-state rate regions: the 2^s conditional-mutual-information
// boundaries evaluated from covariance matrices, ray-based union optimization
// over squeezed-TMSV encodings, finite-difference gradients, and a sampler for
// the two-use subadditivity of the total rate.

namespace bgmac {

/// Per-sender single-mode squeezing applied on top of TMSV sources:
/// sender k prepares S(r_k, theta_k) zeta(N'_k) with N'_k chosen so the
/// signal brightness meets the budget exactly.
struct GaussianEncoding {
  Eigen::VectorXd r;
  Eigen::VectorXd theta;

  int senders() const { return static_cast<int>(r.size()); }
  static GaussianEncoding tmsv(int senders) {
    return {Eigen::VectorXd::Zero(senders), Eigen::VectorXd::Zero(senders)};
  }
};

/// Largest squeezing magnitude keeping the source brightness nonnegative:
/// r* = log(1 + 2 N_S + 2 sqrt(N_S (N_S + 1))) / 2.
double max_squeezing(double ns);

/// Source brightness N' that a squeezer of strength r turns into signal
/// brightness ns: N' = (ns - sinh^2 r) / cosh(2r).
double squeezed_tmsv_input_photons(double ns, double r);

/// Product of s squeezed-TMSV pairs over [A_1, A'_1, ..., A_s, A'_s].
CovarianceMatrix gaussian_input_cm(const GaussianEncoding& encoding, const EnergyBudget& budget);

/// Boundary value I(A'[J]; B | A'[J^c]) of the one-shot region at the given
/// encoding, in bits.
double rate_functional(const PhaseInsensitiveBgmac& channel, const GaussianEncoding& encoding,
                       const EnergyBudget& budget, SenderSet j);

/// All 2^s boundary values, indexed by the sender-set bitmask.
struct RegionConstraints {
  int s = 0;
  std::vector<double> bound;

  double bound_for(SenderSet j) const { return bound.at(j.mask); }
};

RegionConstraints one_shot_region(const PhaseInsensitiveBgmac& channel,
                                  const GaussianEncoding& encoding, const EnergyBudget& budget);

struct RatePoint {
  Eigen::VectorXd rates;
};

/// sum_{k in J} R_k <= bound(J) for every J, within `slack`.
bool feasible(const RatePoint& point, const RegionConstraints& constraints, double slack = 1e-9);

struct RayConfig {
  int max_iterations = 200;
  double rel_tol = 1e-8;
  int starts = 5;  // r = 0 plus random restarts
  unsigned seed = 0;
};

struct RayResult {
  Eigen::VectorXd direction;
  GaussianEncoding encoding;
  RatePoint point;
  double norm = 0.0;               // |R| along the ray
  RegionConstraints constraints;   // region of the winning encoding
  std::vector<double> squeeze_trace;  // |r| per iteration of the winning start
  int iterations = 0;
  bool converged = false;
};

/// Maximizes the feasible step length along `direction` (componentwise >= 0,
/// nonzero) over encodings, with theta_1 gauge-fixed to 0. Ties in |R| within
/// 1e-9 relative resolve toward the smaller ||r||_2.
RayResult ray_maximize(const PhaseInsensitiveBgmac& channel, const EnergyBudget& budget,
                       const Eigen::VectorXd& direction, const RayConfig& config = {});

struct UnionRegionResult {
  std::vector<RayResult> rays;
  std::vector<RatePoint> hull;  // convex hull vertices including the origin
};

/// Two-sender union region over n rays whose polar angle
/// arctan((R_2/C_2^coh) / (R_1/C_1^coh)) is uniform in [0, pi/2).
UnionRegionResult union_region(const PhaseInsensitiveBgmac& channel, const EnergyBudget& budget,
                               int n_rays = 20, const RayConfig& config = {});

/// Central finite-difference gradient of the boundary value with respect to
/// (r_1..r_s, theta_1..theta_s); steps that would cross the squeezing bound
/// fall back to one-sided differences.
Eigen::VectorXd rate_gradient(const PhaseInsensitiveBgmac& channel,
                              const GaussianEncoding& encoding, const EnergyBudget& budget,
                              SenderSet j, double h = 1e-4);

/// Correlated input for two parallel channel uses: one pure 4-mode state per
/// sender over [use 1 signal, use 2 signal, idler, idler].
struct TwoUseInput {
  std::vector<CovarianceMatrix> per_sender;
};

struct SubadditivitySample {
  double joint_bits = 0.0;  // I(A'; B1 B2) of the correlated strategy
  double split_bits = 0.0;  // sum of single-use rates at the matching reduced states
};

/// Evaluates both sides of the total-rate subadditivity for two parallel
/// channel uses; the contract is joint_bits <= split_bits.
SubadditivitySample subadditivity_sample(const PhaseInsensitiveBgmac& channel_1,
                                         const PhaseInsensitiveBgmac& channel_2,
                                         const TwoUseInput& input);

}  // namespace bgmac
