#include "bgmac/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace bgmac {

SimplexResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
    const Eigen::VectorXd& steps, const SimplexOptions& options,
    const std::function<void(int, const Eigen::VectorXd&, double)>& on_iteration) {
  const int n = static_cast<int>(x0.size());
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  std::vector<Eigen::VectorXd> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  for (int i = 0; i < n; ++i) xs[i + 1](i) += steps(i);
  for (int i = 0; i <= n; ++i) fs[i] = f(xs[i]);

  std::vector<int> order(n + 1);
  SimplexResult res;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    const int best = order[0], worst = order[n], second_worst = order[n - 1];

    if (on_iteration) on_iteration(iter, xs[best], fs[best]);

    const double spread = fs[worst] - fs[best];
    if (spread <= options.rel_tol * std::max(1e-12, std::abs(fs[best]))) {
      res.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i) {
      if (i != worst) centroid += xs[i];
    }
    centroid /= n;

    const Eigen::VectorXd reflected = centroid + alpha * (centroid - xs[worst]);
    const double f_reflected = f(reflected);

    if (f_reflected < fs[best]) {
      const Eigen::VectorXd expanded = centroid + gamma * (reflected - centroid);
      const double f_expanded = f(expanded);
      if (f_expanded < f_reflected) {
        xs[worst] = expanded;
        fs[worst] = f_expanded;
      } else {
        xs[worst] = reflected;
        fs[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < fs[second_worst]) {
      xs[worst] = reflected;
      fs[worst] = f_reflected;
      continue;
    }

    const Eigen::VectorXd contracted = centroid + rho * (xs[worst] - centroid);
    const double f_contracted = f(contracted);
    if (f_contracted < fs[worst]) {
      xs[worst] = contracted;
      fs[worst] = f_contracted;
      continue;
    }

    for (int i = 0; i <= n; ++i) {
      if (i == best) continue;
      xs[i] = xs[best] + sigma * (xs[i] - xs[best]);
      fs[i] = f(xs[i]);
    }
  }

  const auto it = std::min_element(fs.begin(), fs.end());
  res.x = xs[static_cast<int>(it - fs.begin())];
  res.value = *it;
  res.iterations = iter;
  return res;
}

}  // namespace bgmac
