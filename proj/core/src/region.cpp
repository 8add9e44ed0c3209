#include "bgmac/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace bgmac {

double max_squeezing(double ns) {
  if (ns < 0.0) throw std::invalid_argument("max_squeezing: negative brightness");
  return 0.5 * std::log(1.0 + 2.0 * ns + 2.0 * std::sqrt(ns * (ns + 1.0)));
}

double squeezed_tmsv_input_photons(double ns, double r) {
  const double value = (ns - std::sinh(r) * std::sinh(r)) / std::cosh(2.0 * r);
  return value;
}

CovarianceMatrix gaussian_input_cm(const GaussianEncoding& encoding, const EnergyBudget& budget) {
  const int s = encoding.senders();
  if (budget.senders() != s || encoding.theta.size() != s) {
    throw std::invalid_argument("gaussian_input_cm: encoding/budget size mismatch");
  }
  CovarianceMatrix input;
  for (int k = 0; k < s; ++k) {
    const double ns = budget.photons[k];
    if (ns < 0.0) throw std::invalid_argument("gaussian_input_cm: negative brightness");
    const double r_star = max_squeezing(ns);
    if (std::abs(encoding.r(k)) > r_star + 1e-12) {
      throw std::invalid_argument("gaussian_input_cm: squeezing " +
                                  std::to_string(encoding.r(k)) +
                                  " exceeds the brightness bound " + std::to_string(r_star));
    }
    const double source = std::max(0.0, squeezed_tmsv_input_photons(ns, encoding.r(k)));
    const SymplecticTransform local =
        direct_sum(squeezer(encoding.r(k), encoding.theta(k)),
                   SymplecticTransform(Eigen::MatrixXd::Identity(2, 2)));
    const CovarianceMatrix pair = apply_transform(local, tmsv_cm(source));
    input = (k == 0) ? pair : direct_sum(input, pair);
  }
  return input;
}

namespace {

// Shares the channel output and the J-independent entropies across the 2^s
// boundary evaluations of one encoding.
class RegionEvaluator {
 public:
  RegionEvaluator(const PhaseInsensitiveBgmac& channel, const GaussianEncoding& encoding,
                  const EnergyBudget& budget)
      : s_(channel.senders()),
        output_(apply_to_cm(channel, gaussian_input_cm(encoding, budget))) {
    std::vector<int> idlers(s_);
    for (int k = 0; k < s_; ++k) idlers[k] = 1 + k;
    entropy_idlers_ = von_neumann_entropy(subsystem_cm(output_, idlers));
    entropy_joint_ = von_neumann_entropy(output_);
  }

  double bound(SenderSet j) const {
    if (j.is_empty()) return 0.0;
    std::vector<int> complement_idlers;
    for (int k = 0; k < s_; ++k) {
      if (!j.contains(k)) complement_idlers.push_back(1 + k);
    }
    const double s_jc = complement_idlers.empty()
                            ? 0.0
                            : von_neumann_entropy(subsystem_cm(output_, complement_idlers));
    std::vector<int> with_b{0};
    with_b.insert(with_b.end(), complement_idlers.begin(), complement_idlers.end());
    const double s_b_jc = von_neumann_entropy(subsystem_cm(output_, with_b));
    return entropy_idlers_ + s_b_jc - entropy_joint_ - s_jc;
  }

 private:
  int s_;
  CovarianceMatrix output_;
  double entropy_idlers_ = 0.0;
  double entropy_joint_ = 0.0;
};

}  // namespace

double rate_functional(const PhaseInsensitiveBgmac& channel, const GaussianEncoding& encoding,
                       const EnergyBudget& budget, SenderSet j) {
  if (j.s != channel.senders()) throw std::invalid_argument("rate_functional: sender set mismatch");
  if (j.is_empty()) return 0.0;
  return RegionEvaluator(channel, encoding, budget).bound(j);
}

RegionConstraints one_shot_region(const PhaseInsensitiveBgmac& channel,
                                  const GaussianEncoding& encoding, const EnergyBudget& budget) {
  const int s = channel.senders();
  if (s > 16) throw std::invalid_argument("one_shot_region: more than 16 senders");
  const RegionEvaluator eval(channel, encoding, budget);
  RegionConstraints rc;
  rc.s = s;
  rc.bound.resize(std::size_t{1} << s);
  for (std::uint32_t mask = 0; mask < rc.bound.size(); ++mask) {
    rc.bound[mask] = eval.bound(SenderSet{mask, s});
  }
  return rc;
}

bool feasible(const RatePoint& point, const RegionConstraints& constraints, double slack) {
  for (std::uint32_t mask = 0; mask < constraints.bound.size(); ++mask) {
    double sum = 0.0;
    for (int k = 0; k < constraints.s; ++k) {
      if ((mask >> k) & 1u) sum += point.rates(k);
    }
    if (sum > constraints.bound[mask] + slack) return false;
  }
  return true;
}

namespace {

// Largest step t with t * sum_{k in J} d_k <= bound(J) for all J. The
// constraints are linear in t, so the minimum ratio is exact.
double max_step(const RegionConstraints& rc, const Eigen::VectorXd& direction) {
  double t = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < rc.bound.size(); ++mask) {
    double d = 0.0;
    for (int k = 0; k < rc.s; ++k) {
      if ((mask >> k) & 1u) d += direction(k);
    }
    if (d > 0.0) t = std::min(t, std::max(0.0, rc.bound[mask]) / d);
  }
  return std::isfinite(t) ? t : 0.0;
}

GaussianEncoding encoding_from_params(const Eigen::VectorXd& x, const EnergyBudget& budget) {
  const int s = budget.senders();
  GaussianEncoding enc = GaussianEncoding::tmsv(s);
  for (int k = 0; k < s; ++k) {
    const double r_star = max_squeezing(budget.photons[k]);
    enc.r(k) = std::clamp(x(k), -r_star, r_star);
  }
  for (int k = 1; k < s; ++k) enc.theta(k) = x(s + k - 1);  // theta_1 gauge-fixed to 0
  return enc;
}

}  // namespace

RayResult ray_maximize(const PhaseInsensitiveBgmac& channel, const EnergyBudget& budget,
                       const Eigen::VectorXd& direction, const RayConfig& config) {
  const int s = channel.senders();
  if (direction.size() != s || direction.minCoeff() < 0.0 || direction.maxCoeff() <= 0.0) {
    throw std::invalid_argument("ray_maximize: direction must be nonnegative and nonzero");
  }
  const int dim = 2 * s - 1;

  const auto objective = [&](const Eigen::VectorXd& x) {
    const GaussianEncoding enc = encoding_from_params(x, budget);
    return -max_step(one_shot_region(channel, enc, budget), direction);
  };

  std::mt19937 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Eigen::VectorXd steps(dim);
  for (int k = 0; k < s; ++k) {
    steps(k) = std::max(1e-3, 0.25 * max_squeezing(budget.photons[k]));
  }
  for (int k = s; k < dim; ++k) steps(k) = 0.5;

  SimplexOptions opts;
  opts.max_iterations = config.max_iterations;
  opts.rel_tol = config.rel_tol;

  struct Candidate {
    SimplexResult result;
    std::vector<double> trace;
  };
  Candidate best;
  bool have_best = false;

  for (int start = 0; start < std::max(1, config.starts); ++start) {
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(dim);
    if (start > 0) {
      for (int k = 0; k < s; ++k) {
        x0(k) = (unit(rng) - 0.5) * max_squeezing(budget.photons[k]);
      }
      for (int k = s; k < dim; ++k) x0(k) = unit(rng) * 2.0 * M_PI;
    }
    Candidate cand;
    const auto record = [&](int, const Eigen::VectorXd& x, double) {
      cand.trace.push_back(x.head(s).norm());
    };
    cand.result = nelder_mead(objective, x0, steps, opts, record);

    if (!have_best) {
      best = cand;
      have_best = true;
      continue;
    }
    const double tie = std::max(1e-9 * std::abs(best.result.value), 1e-12);
    if (cand.result.value < best.result.value - tie) {
      best = cand;
    } else if (cand.result.value < best.result.value + tie &&
               cand.result.x.head(s).norm() < best.result.x.head(s).norm()) {
      best = cand;
    }
  }

  RayResult out;
  out.direction = direction;
  out.encoding = encoding_from_params(best.result.x, budget);
  out.constraints = one_shot_region(channel, out.encoding, budget);
  const double t = max_step(out.constraints, direction);
  out.point.rates = t * direction;
  out.norm = t * direction.norm();
  out.squeeze_trace = std::move(best.trace);
  out.iterations = best.result.iterations;
  out.converged = best.result.converged;
  return out;
}

namespace {

// Andrew monotone chain on 2D points; returns hull vertices counterclockwise.
std::vector<Eigen::Vector2d> convex_hull_2d(std::vector<Eigen::Vector2d> pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const auto& a, const auto& b) {
                          return (a - b).norm() <= 1e-13;
                        }),
            pts.end());
  const auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a,
                        const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  if (pts.size() < 3) return pts;
  std::vector<Eigen::Vector2d> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

UnionRegionResult union_region(const PhaseInsensitiveBgmac& channel, const EnergyBudget& budget,
                               int n_rays, const RayConfig& config) {
  if (channel.senders() != 2) {
    throw std::invalid_argument("union_region: implemented for two senders");
  }
  if (n_rays < 1) throw std::invalid_argument("union_region: need at least one ray");

  const double c1 = coherent_bound(channel, budget, SenderSet::single(0, 2));
  const double c2 = coherent_bound(channel, budget, SenderSet::single(1, 2));

  UnionRegionResult out;
  for (int i = 0; i < n_rays; ++i) {
    const double phi = (M_PI / 2.0) * i / n_rays;
    Eigen::Vector2d dir;
    if (c1 > 0.0 && c2 > 0.0) {
      // Uniform polar angle in the coherent-capacity-normalized plane.
      dir = Eigen::Vector2d(1.0, std::tan(phi) * c2 / c1).normalized();
    } else {
      dir = Eigen::Vector2d(std::cos(phi), std::sin(phi));
    }
    RayConfig ray_config = config;
    std::seed_seq seq{config.seed, static_cast<unsigned>(i)};
    std::vector<std::uint32_t> derived(1);
    seq.generate(derived.begin(), derived.end());
    ray_config.seed = derived[0];
    out.rays.push_back(ray_maximize(channel, budget, dir, ray_config));
  }

  std::vector<Eigen::Vector2d> pts{Eigen::Vector2d::Zero()};
  for (const auto& ray : out.rays) pts.emplace_back(ray.point.rates(0), ray.point.rates(1));
  for (const auto& v : convex_hull_2d(std::move(pts))) {
    out.hull.push_back(RatePoint{v});
  }
  return out;
}

Eigen::VectorXd rate_gradient(const PhaseInsensitiveBgmac& channel,
                              const GaussianEncoding& encoding, const EnergyBudget& budget,
                              SenderSet j, double h) {
  const int s = channel.senders();
  Eigen::VectorXd grad(2 * s);
  const auto value = [&](const GaussianEncoding& enc) {
    return rate_functional(channel, enc, budget, j);
  };
  for (int i = 0; i < 2 * s; ++i) {
    GaussianEncoding up = encoding, down = encoding;
    double width = 2.0 * h;
    if (i < s) {
      const double r_star = max_squeezing(budget.photons[i]);
      double hi = encoding.r(i) + h, lo = encoding.r(i) - h;
      if (hi > r_star) hi = encoding.r(i);    // one-sided at the box edge
      if (lo < -r_star) lo = encoding.r(i);
      width = hi - lo;
      if (width <= 0.0) {
        grad(i) = 0.0;
        continue;
      }
      up.r(i) = hi;
      down.r(i) = lo;
    } else {
      up.theta(i - s) += h;
      down.theta(i - s) -= h;
    }
    grad(i) = (value(up) - value(down)) / width;
  }
  return grad;
}

SubadditivitySample subadditivity_sample(const PhaseInsensitiveBgmac& channel_1,
                                         const PhaseInsensitiveBgmac& channel_2,
                                         const TwoUseInput& input) {
  const int s = channel_1.senders();
  if (channel_2.senders() != s) {
    throw std::invalid_argument("subadditivity_sample: channels must share the sender count");
  }
  if (static_cast<int>(input.per_sender.size()) != s) {
    throw std::invalid_argument("subadditivity_sample: one 4-mode state per sender");
  }
  for (const auto& v : input.per_sender) {
    if (v.modes() != 4) {
      throw std::invalid_argument("subadditivity_sample: per-sender states must have 4 modes");
    }
    for (double nu : symplectic_eigenvalues(v)) {
      if (nu > 1.0 + tol::physicality) {
        throw std::invalid_argument(
            "subadditivity_sample: per-sender states must be pure (idlers included)");
      }
    }
  }

  // Joint experiment. Sender k occupies modes [4k .. 4k+3].
  CovarianceMatrix joint = input.per_sender[0];
  for (int k = 1; k < s; ++k) joint = direct_sum(joint, input.per_sender[k]);

  std::vector<int> use1(s), use2_after(s);
  for (int k = 0; k < s; ++k) use1[k] = 4 * k;
  const CovarianceMatrix after_1 = apply_on(channel_1, joint, use1);
  // apply_on keeps non-signal modes in order: [B1, u2_0, i_0, i'_0, u2_1, ...]
  for (int k = 0; k < s; ++k) use2_after[k] = 1 + 3 * k;
  const CovarianceMatrix after_both = apply_on(channel_2, after_1, use2_after);
  // Layout now [B2, B1, i_0, i'_0, i_1, i'_1, ...].
  std::vector<int> outputs{0, 1};
  std::vector<int> idlers;
  for (int k = 0; k < 2 * s; ++k) idlers.push_back(2 + k);

  SubadditivitySample sample;
  sample.joint_bits = von_neumann_entropy(subsystem_cm(after_both, idlers)) +
                      von_neumann_entropy(subsystem_cm(after_both, outputs)) -
                      von_neumann_entropy(after_both);

  // Single-use rates at the matching reduced states, each freshly purified.
  for (int use = 0; use < 2; ++use) {
    CovarianceMatrix in;
    for (int k = 0; k < s; ++k) {
      const Eigen::Matrix2d reduced =
          input.per_sender[k].matrix().block<2, 2>(2 * use, 2 * use);
      const CovarianceMatrix pair = purify_single_mode(reduced);
      in = (k == 0) ? pair : direct_sum(in, pair);
    }
    const CovarianceMatrix out = apply_to_cm(use == 0 ? channel_1 : channel_2, in);
    std::vector<int> out_idlers;
    for (int k = 0; k < s; ++k) out_idlers.push_back(1 + k);
    sample.split_bits += von_neumann_entropy(subsystem_cm(out, out_idlers)) +
                         von_neumann_entropy(subsystem_cm(out, {0})) -
                         von_neumann_entropy(out);
  }
  return sample;
}

}  // namespace bgmac
