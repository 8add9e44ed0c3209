#pragma once

#include <Eigen/Dense>

#include <functional>

// Derivative-free Nelder-Mead simplex minimization for small dimensions.

namespace bgmac {

struct SimplexOptions {
  int max_iterations = 200;
  double rel_tol = 1e-8;  // relative spread of simplex values at convergence
};

struct SimplexResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes f starting from x0 with per-dimension initial steps. The
/// optional callback observes (iteration, best point, best value) once per
/// iteration.
SimplexResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
    const Eigen::VectorXd& steps, const SimplexOptions& options = {},
    const std::function<void(int, const Eigen::VectorXd&, double)>& on_iteration = {});

}  // namespace bgmac
