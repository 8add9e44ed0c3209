#pragma once

#include "bgmac/channel.hpp"

#include <cstdint>
#include <optional>
#include <vector>

// Closed-form rate limits: the coherent-state region boundaries, outer bounds
// for unassisted communication, entanglement-assisted point-to-point
// capacities, EA outer bounds, and the EA total-rate capacity.

namespace bgmac {

/// Per-sender mean photon number constraints.
struct EnergyBudget {
  std::vector<double> photons;

  int senders() const { return static_cast<int>(photons.size()); }
  double total() const;
  static EnergyBudget zero(int senders) { return EnergyBudget{std::vector<double>(senders, 0.0)}; }
};

/// Subset of the s senders, as a bitmask (sender k <-> bit k).
struct SenderSet {
  std::uint32_t mask = 0;
  int s = 0;

  static SenderSet empty(int s) { return {0, s}; }
  static SenderSet universe(int s) { return {(s >= 32 ? ~0u : (1u << s) - 1u), s}; }
  static SenderSet single(int k, int s) { return {1u << k, s}; }

  bool contains(int k) const { return (mask >> k) & 1u; }
  SenderSet complement() const { return {~mask & SenderSet::universe(s).mask, s}; }
  int count() const;
  bool is_empty() const { return mask == 0; }
};

/// Coherent-state region boundary for sender set J:
/// g(sum_{k in J} |w_k|^2 N_{S,k} + N_B) - g(N_B).
double coherent_bound(const PhaseInsensitiveBgmac& channel, const EnergyBudget& budget,
                      SenderSet j);

/// The two noise regimes under which the outer bounds apply:
///   A: N_B >= max{|w|^2 - 1, 0} + sum_k delta_k |w_k|^2
///   B: N_B >= |w|^2 + sum_k (1 - delta_k) |w_k|^2
enum class NoiseCondition { A, B };

bool condition_holds(const PhaseInsensitiveBgmac& channel, NoiseCondition c);

struct OuterBounds {
  std::vector<double> individual;         // per-sender rate caps, bits
  double total = 0.0;                     // total-rate cap, bits
  NoiseCondition condition_used = NoiseCondition::A;
  std::vector<double> sender_dark_counts; // effective dark counts per sender
};

/// Bounds under every condition that holds. `tightest()` picks the smaller
/// total cap, preferring condition A for covariant-dominant channels on ties.
struct OuterBoundsReport {
  std::optional<OuterBounds> condition_a;
  std::optional<OuterBounds> condition_b;

  bool any() const { return condition_a.has_value() || condition_b.has_value(); }
  const OuterBounds* tightest() const;
};

/// Unassisted outer bounds (super-receiver construction). Returns an empty
/// report if neither noise condition holds.
OuterBoundsReport unassisted_outer(const PhaseInsensitiveBgmac& channel,
                                   const EnergyBudget& budget);

/// EA capacity of a point-to-point phase-insensitive BGC, achieved by a TMSV
/// input of brightness ns.
double ea_bgc_capacity(bool conjugated, double ns, double w2, double nb);
double ea_bgc_capacity(const PointToPointBgc& bgc, double ns);

/// EA outer bounds through the same super-receiver/bottleneck construction,
/// each cap evaluated via ea_bgc_capacity.
OuterBoundsReport ea_outer(const PhaseInsensitiveBgmac& channel, const EnergyBudget& budget);

/// EA capacity of the total rate, achieved by an s-partite product of TMSV
/// states at full budget. Evaluated through the covariance-matrix pipeline.
double ea_total_rate_capacity(const PhaseInsensitiveBgmac& channel, const EnergyBudget& budget);

}  // namespace bgmac
