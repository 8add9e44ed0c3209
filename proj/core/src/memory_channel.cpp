#include "bgmac/memory_channel.hpp"

#include "bgmac/region.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace bgmac {

void require_valid(const CausalMemoryParams& params) {
  if (params.epsilon < 0.0 || params.epsilon > 1.0 || params.gamma < 0.0 || params.gamma > 1.0) {
    throw std::invalid_argument("memory channel: couplings must lie in [0, 1]");
  }
  if (params.uses < 1) throw std::invalid_argument("memory channel: need at least one use");
  if (params.dark_photons < 0.0) {
    throw std::invalid_argument("memory channel: negative thermal photon number");
  }
}

UnrolledTransform unroll(const CausalMemoryParams& params) {
  require_valid(params);
  const int n = params.uses;
  const double eps = params.epsilon, gam = params.gamma;
  const double hop = std::sqrt(eps * gam);  // memory survival per use

  UnrolledTransform t;
  t.signal = Eigen::MatrixXd::Zero(n, n);
  t.environment = Eigen::MatrixXd::Zero(n, n + 1);
  for (int k = 0; k < n; ++k) {
    t.signal(k, k) = std::sqrt(gam);
    t.environment(k, k) = -std::sqrt((1.0 - eps) * (1.0 - gam));
    // Paths through the memory mode: enter at use l, survive k-1-l hops,
    // leave into output k.
    const double leave = -std::sqrt(eps * (1.0 - gam));
    for (int l = 0; l < k; ++l) {
      const double survive = std::pow(hop, k - 1 - l);
      t.signal(k, l) = leave * survive * std::sqrt(1.0 - gam);
      t.environment(k, l) = leave * survive * std::sqrt(gam * (1.0 - eps));
    }
    t.environment(k, n) = leave * std::pow(hop, k);  // initial memory mode
  }
  return t;
}

Eigen::MatrixXd commutation_matrix(const CausalMemoryParams& params) {
  require_valid(params);
  const int n = params.uses;
  const double eps = params.epsilon, gam = params.gamma;
  const double hop = std::sqrt(eps * gam);

  const auto gamma_k = [&](int k) {  // k is 1-based
    if (std::abs(1.0 - eps * gam) < 1e-9) {
      return gam + (k - 1) * eps * (1.0 - gam) * (1.0 - gam);
    }
    return gam + (1.0 - std::pow(eps * gam, k - 1)) * eps * (1.0 - gam) * (1.0 - gam) /
                     (1.0 - eps * gam);
  };

  Eigen::MatrixXd omega(n, n);
  for (int k = 1; k <= n; ++k) {
    for (int kp = 1; kp <= n; ++kp) {
      const double delta = (k == kp) ? 1.0 : 0.0;
      omega(k - 1, kp - 1) =
          delta - (1.0 - gamma_k(std::min(k, kp))) * std::pow(hop, std::abs(k - kp));
    }
  }
  return omega;
}

UnravelledChannels unravel(const CausalMemoryParams& params) {
  const UnrolledTransform t = unroll(params);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(t.signal, Eigen::ComputeFullU | Eigen::ComputeFullV);
  UnravelledChannels u;
  u.output_rotation = svd.matrixU().transpose();
  u.input_rotation = svd.matrixV().transpose();
  const int n = params.uses;
  u.tau.resize(n);
  u.dark.resize(n);
  for (int d = 0; d < n; ++d) {
    const double sv = svd.singularValues()(d);
    u.tau(d) = std::min(1.0, sv * sv);
    u.dark(d) = (1.0 - u.tau(d)) * params.dark_photons;
  }
  return u;
}

namespace {

// Maximizes sum_d rate(d, column d of the allocation) over per-sender
// distributions of the budget across the N sub-channels, by cyclic pairwise
// golden-section transfers. rate() must be concave and non-decreasing in each
// entry, so spending the whole budget is optimal and every pairwise slice is
// unimodal.
MemoryRateResult optimize_allocation(
    int senders, int uses, const EnergyBudget& budget,
    const std::function<double(int, const Eigen::VectorXd&)>& rate, const AllocationConfig& config) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

  const auto column_rates = [&](const Eigen::MatrixXd& alloc) {
    Eigen::VectorXd r(uses);
    for (int d = 0; d < uses; ++d) r(d) = rate(d, alloc.col(d));
    return r;
  };

  std::mt19937 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  MemoryRateResult best;
  best.bits = -1.0;

  for (int start = 0; start < std::max(1, config.starts); ++start) {
    Eigen::MatrixXd alloc(senders, uses);
    for (int k = 0; k < senders; ++k) {
      if (start == 0) {
        alloc.row(k).setConstant(budget.photons[k] / uses);
      } else {
        Eigen::VectorXd p(uses);
        for (int d = 0; d < uses; ++d) p(d) = -std::log(std::max(1e-12, unit(rng)));
        alloc.row(k) = budget.photons[k] * (p / p.sum()).transpose();
      }
    }

    Eigen::VectorXd rates = column_rates(alloc);
    bool converged = uses == 1;
    for (int round = 0; round < config.max_rounds && !converged; ++round) {
      const double before = rates.sum();
      for (int k = 0; k < senders; ++k) {
        if (budget.photons[k] <= 0.0) continue;
        for (int d1 = 0; d1 < uses; ++d1) {
          for (int d2 = d1 + 1; d2 < uses; ++d2) {
            const double mass = alloc(k, d1) + alloc(k, d2);
            if (mass <= 0.0) continue;
            const auto pair_value = [&](double x) {
              Eigen::VectorXd c1 = alloc.col(d1), c2 = alloc.col(d2);
              c1(k) = x;
              c2(k) = mass - x;
              return rate(d1, c1) + rate(d2, c2);
            };
            double lo = 0.0, hi = mass;
            double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
            double f1 = pair_value(x1), f2 = pair_value(x2);
            for (int it = 0; it < 60 && (hi - lo) > 1e-13 * std::max(1.0, mass); ++it) {
              if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = pair_value(x2);
              } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = pair_value(x1);
              }
            }
            const double x = 0.5 * (lo + hi);
            alloc(k, d1) = x;
            alloc(k, d2) = mass - x;
            rates(d1) = rate(d1, alloc.col(d1));
            rates(d2) = rate(d2, alloc.col(d2));
          }
        }
      }
      if (rates.sum() - before <= config.tol * std::max(1.0, std::abs(before))) {
        converged = true;
      }
    }

    // Pairwise transfers conserve row sums up to rounding; pin them exactly.
    for (int k = 0; k < senders; ++k) {
      const double sum = alloc.row(k).sum();
      if (sum > 0.0) alloc.row(k) *= budget.photons[k] / sum;
    }
    const double value = column_rates(alloc).sum();
    if (value > best.bits) {
      best.bits = value;
      best.allocation = alloc;
      best.converged = converged;
    }
  }
  return best;
}

}  // namespace

MemoryRateResult memory_total_rate(const CausalMemoryParams& params,
                                   const std::vector<double>& eta, const EnergyBudget& budget,
                                   const AllocationConfig& config) {
  const UnravelledChannels u = unravel(params);
  const int s = static_cast<int>(eta.size());
  if (budget.senders() != s) throw std::invalid_argument("memory_total_rate: budget size mismatch");
  std::vector<PhaseInsensitiveBgmac> sub;
  for (int d = 0; d < params.uses; ++d) {
    sub.push_back(interference_bgmac(eta, PointToPointBgc{false, u.tau(d), u.dark(d)}));
  }
  const auto rate = [&](int d, const Eigen::VectorXd& column) {
    std::vector<double> ns(column.data(), column.data() + column.size());
    return ea_total_rate_capacity(sub[d], EnergyBudget{ns});
  };
  return optimize_allocation(s, params.uses, budget, rate, config);
}

MemoryRateResult memory_coherent_benchmark(const CausalMemoryParams& params,
                                           const std::vector<double>& eta,
                                           const EnergyBudget& budget,
                                           const AllocationConfig& config) {
  const UnravelledChannels u = unravel(params);
  const int s = static_cast<int>(eta.size());
  if (budget.senders() != s) {
    throw std::invalid_argument("memory_coherent_benchmark: budget size mismatch");
  }
  std::vector<PhaseInsensitiveBgmac> sub;
  for (int d = 0; d < params.uses; ++d) {
    sub.push_back(interference_bgmac(eta, PointToPointBgc{false, u.tau(d), u.dark(d)}));
  }
  const auto rate = [&](int d, const Eigen::VectorXd& column) {
    std::vector<double> ns(column.data(), column.data() + column.size());
    return coherent_bound(sub[d], EnergyBudget{ns}, SenderSet::universe(s));
  };
  return optimize_allocation(s, params.uses, budget, rate, config);
}

}  // namespace bgmac
