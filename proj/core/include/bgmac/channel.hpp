#pragma once

#include "bgmac/gaussian.hpp"

#include <complex>
#include <string>
#include <vector>

// Phase-insensitive bosonic Gaussian multiple-access channels:
// a_B = sum_k w_k ((1-delta_k) a_k + delta_k a_k^dag) + u1 e_1 + u2 e_2^dag
// with two effective vacuum environment modes. delta_k = 1 marks a
// phase-conjugating (contravariant) coupling.

namespace bgmac {

/// Point-to-point phase-insensitive channel: weight modulus squared,
/// conjugation flag, and dark photon count (mean output photons on vacuum).
struct PointToPointBgc {
  bool conjugated = false;
  double weight2 = 1.0;
  double dark_photons = 0.0;
};

enum class BgcClass { ThermalLoss, Awgn, Amplifier, ConjugateAmplifier };

std::string to_string(BgcClass c);

/// ThermalLoss: delta=0, |w|^2 < 1; Awgn: delta=0, |w|^2 = 1;
/// Amplifier: delta=0, |w|^2 > 1; ConjugateAmplifier: delta=1
/// (conventional gain displayed as |w|^2 + 1).
BgcClass classify(const PointToPointBgc& bgc);

/// Displayed gain: |w|^2 for covariant channels, |w|^2 + 1 for conjugating ones.
double display_gain(const PointToPointBgc& bgc);

/// s-sender phase-insensitive BGMAC. Immutable after construction.
struct PhaseInsensitiveBgmac {
  std::vector<std::complex<double>> weights;
  std::vector<int> conjugated;  // delta_k in {0,1}
  double dark_photons = 0.0;    // N_B
  /// Skip strict physicality checks in channel operations (boundary exploration).
  bool relaxed = false;

  int senders() const { return static_cast<int>(weights.size()); }
  double weight2(int k) const { return std::norm(weights[k]); }
  double total_weight2() const;
  /// sum_k (1 - 2 delta_k) |w_k|^2, positive for covariant-dominant channels.
  double covariant_excess() const;
  /// sum_k delta_k |w_k|^2.
  double conjugated_weight2() const;

  static PhaseInsensitiveBgmac from_bgc(const PointToPointBgc& bgc);
};

struct ValidationReport {
  bool ok = true;
  /// How far below the bona fide dark-count floor N_B sits (0 when ok).
  double bona_fide_deficit = 0.0;
  double u1_squared = 0.0;
  double u2_squared = 0.0;
  std::string message;
};

/// Checks the bona fide condition
///   N_B >= max{ -1 + sum |w_k|^2 (1-delta_k), sum |w_k|^2 delta_k }
/// and nonnegativity of the derived environment couplings.
ValidationReport validate(const PhaseInsensitiveBgmac& channel);
ValidationReport validate(const PointToPointBgc& bgc);

struct NoiseParams {
  double u1 = 0.0;
  double u2 = 0.0;
};

/// Environment couplings from the commutation constraint and the dark-count
/// identity: u2^2 = N_B - sum delta_k |w_k|^2, u1^2 = 1 + u2^2 - covariant_excess.
NoiseParams noise_params(const PhaseInsensitiveBgmac& channel);

/// Channel action on a covariance matrix. The listed `signal_modes` (one per
/// sender, in sender order) are consumed and replaced by the single output
/// mode B, which comes first in the result; all remaining modes follow in
/// their original order. Environments enter as vacuum.
CovarianceMatrix apply_on(const PhaseInsensitiveBgmac& channel, const CovarianceMatrix& input,
                          const std::vector<int>& signal_modes);

/// Spec layout: input over [A_1, A'_1, ..., A_s, A'_s], output over
/// [B, A'_1, ..., A'_s].
CovarianceMatrix apply_to_cm(const PhaseInsensitiveBgmac& channel, const CovarianceMatrix& input);

/// Interference BGMAC: beamsplitter with power ratios eta (summing to one)
/// followed by the single-mode channel `bgc`. Weights are w_k = sqrt(eta_k |w|^2)
/// with the conjugation flag and dark count inherited from `bgc`.
PhaseInsensitiveBgmac interference_bgmac(const std::vector<double>& eta,
                                         const PointToPointBgc& bgc);

/// Parse a channel description, either
///   {"s": int, "w": [[re, im], ...], "delta": [0|1, ...], "nb": float}
/// or
///   {"interference": {"eta": [...], "bgc": {"class": str, "w2": float, "nb": float}}}
/// with class one of thermal_loss | awgn | amplifier | conjugate_amplifier.
PhaseInsensitiveBgmac channel_from_json(const std::string& json_text);

PointToPointBgc bgc_from_json(const std::string& json_text);

}  // namespace bgmac
