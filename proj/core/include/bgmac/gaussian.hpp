#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

// Covariance-matrix calculus for bosonic Gaussian states.
//
// Conventions used across the whole library:
//   - quadrature ordering (x_1, p_1, ..., x_m, p_m)
//   - vacuum covariance matrix = identity; a thermal state with mean photon
//     number N has covariance (2N+1) I per mode
//   - the squeezer S(r) maps x -> exp(-r) x, p -> exp(r) p
//   - all entropies and rates are in bits (log base 2)

namespace bgmac {

/// Thrown when a state or channel fails a physicality check.
class unphysical_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace tol {
inline constexpr double symmetry = 1e-12;       // CM symmetry
inline constexpr double pure_clamp = 1e-9;      // nu in [1-pure_clamp, 1) -> 1
inline constexpr double physicality = 1e-6;     // nu below 1-physicality is an error
inline constexpr double symplectic = 1e-10;     // T Omega T^T deviation
}  // namespace tol

/// Entropy of a thermal state with mean photon number x,
/// (x+1)log2(x+1) - x log2(x). Exactly 0 at x = 0.
double thermal_entropy(double mean_photons);

/// Real symmetric second-moment matrix of m modes (2m x 2m).
class CovarianceMatrix {
 public:
  CovarianceMatrix() = default;

  /// Takes any 2m x 2m matrix symmetric within tol::symmetry and stores the
  /// symmetrized part.
  explicit CovarianceMatrix(const Eigen::MatrixXd& v);

  static CovarianceMatrix vacuum(int modes);

  int modes() const { return static_cast<int>(mat_.rows()) / 2; }
  const Eigen::MatrixXd& matrix() const { return mat_; }

 private:
  Eigen::MatrixXd mat_;
};

CovarianceMatrix thermal_cm(double mean_photons, int modes);

/// Two-mode squeezed vacuum with mean photon number per arm `mean_photons`:
/// diagonal blocks (2N+1) I, off-diagonal 2 sqrt(N(N+1)) diag(1,-1).
CovarianceMatrix tmsv_cm(double mean_photons);

/// Standard symplectic form for m modes (block diagonal [[0,1],[-1,0]]).
Eigen::MatrixXd symplectic_form(int modes);

/// One value per mode, >= 1 for physical states. Values within
/// tol::pure_clamp below 1 are clamped to 1; values below 1 - tol::physicality
/// throw unphysical_error.
std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& v);

/// Smallest symplectic eigenvalue >= 1 - tol. Never throws on unphysical input.
bool is_physical(const CovarianceMatrix& v, double tol = tol::pure_clamp);

/// Sum over modes of thermal_entropy((nu_i - 1)/2), in bits. Empty CM -> 0.
double von_neumann_entropy(const CovarianceMatrix& v);

/// Linear quadrature map, 2n x 2m. May be a sub-block of a full symplectic
/// when modes are discarded.
struct SymplecticTransform {
  Eigen::MatrixXd mat;

  SymplecticTransform() = default;
  explicit SymplecticTransform(Eigen::MatrixXd m);

  int in_modes() const { return static_cast<int>(mat.cols()) / 2; }
  int out_modes() const { return static_cast<int>(mat.rows()) / 2; }
};

/// True when T Omega T^T = Omega within `eps` (square transforms only).
bool is_symplectic(const SymplecticTransform& t, double eps = tol::symplectic);

/// Single-mode squeezer S(r, theta) = R(theta) S(r).
SymplecticTransform squeezer(double r, double theta);

/// Phase rotation gate R(theta); maps a -> a exp(-i theta).
SymplecticTransform phase_rotation(double theta);

/// One retained output port of a beamsplitter array combining s modes with
/// complex weights normalized to unit norm: a_out = sum_k c_k a_k. Returns
/// the 2 x 2s sub-block of the underlying full symplectic.
SymplecticTransform beamsplitter_array(const std::vector<std::complex<double>>& weights);

/// Passive (photon-number conserving) transform from a mode-space unitary:
/// a_j -> sum_k U_jk a_k.
SymplecticTransform passive_transform(const Eigen::MatrixXcd& u);

SymplecticTransform direct_sum(const SymplecticTransform& a, const SymplecticTransform& b);
CovarianceMatrix direct_sum(const CovarianceMatrix& a, const CovarianceMatrix& b);

/// T (V + V_env) T^T where + is the direct sum; environment modes are
/// appended after the modes of V.
CovarianceMatrix apply_transform(const SymplecticTransform& t, const CovarianceMatrix& v,
                                 const CovarianceMatrix& appended_env = CovarianceMatrix());

/// Principal submatrix on the given modes, in the given order.
CovarianceMatrix subsystem_cm(const CovarianceMatrix& v, const std::vector<int>& mode_indices);

/// Mean photon number of one mode of a zero-mean state: (V_xx + V_pp)/4 - 1/2.
double mean_photon(const CovarianceMatrix& v, int mode_index);

/// Pure two-mode extension [mode, idler] of a single-mode CM whose reduction
/// to the first mode is the input.
CovarianceMatrix purify_single_mode(const Eigen::Matrix2d& v);

/// Ordered mode labels with label -> position lookup.
struct ModeLayout {
  std::vector<std::string> labels;

  explicit ModeLayout(std::vector<std::string> names);
  int index_of(const std::string& label) const;
  int modes() const { return static_cast<int>(labels.size()); }

  /// [A_1, A'_1, ..., A_s, A'_s]: sender signal modes interleaved with idlers.
  static ModeLayout ea_input(int senders);
  /// [B, A'_1, ..., A'_s]: channel output followed by the retained idlers.
  static ModeLayout ea_output(int senders);
};

}  // namespace bgmac
