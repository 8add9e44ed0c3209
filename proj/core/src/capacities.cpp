#include "bgmac/capacities.hpp"

#include "bgmac/region.hpp"

#include <bit>
#include <cmath>

namespace bgmac {

double EnergyBudget::total() const {
  double t = 0.0;
  for (double n : photons) t += n;
  return t;
}

int SenderSet::count() const { return std::popcount(mask); }

namespace {

void require_budget(const PhaseInsensitiveBgmac& channel, const EnergyBudget& budget) {
  if (budget.senders() != channel.senders()) {
    throw std::invalid_argument("budget must list one brightness per sender");
  }
  for (double n : budget.photons) {
    if (n < 0.0) throw std::invalid_argument("negative signal brightness");
  }
}

void require_valid(const PhaseInsensitiveBgmac& channel, const char* where) {
  if (channel.relaxed) return;
  const ValidationReport rep = validate(channel);
  if (!rep.ok) throw unphysical_error(std::string(where) + ": " + rep.message);
}

}  // namespace

double coherent_bound(const PhaseInsensitiveBgmac& channel, const EnergyBudget& budget,
                      SenderSet j) {
  require_valid(channel, "coherent_bound");
  require_budget(channel, budget);
  if (j.s != channel.senders()) throw std::invalid_argument("sender set size mismatch");
  double received = channel.dark_photons;
  for (int k = 0; k < channel.senders(); ++k) {
    if (j.contains(k)) received += channel.weight2(k) * budget.photons[k];
  }
  return thermal_entropy(received) - thermal_entropy(channel.dark_photons);
}

bool condition_holds(const PhaseInsensitiveBgmac& channel, NoiseCondition c) {
  const double w2 = channel.total_weight2();
  const double conj = channel.conjugated_weight2();
  const double floor = (c == NoiseCondition::A)
                           ? std::max(w2 - 1.0, 0.0) + conj
                           : w2 + (w2 - conj);
  return channel.dark_photons >= floor - 1e-12;
}

const OuterBounds* OuterBoundsReport::tightest() const {
  if (condition_a && condition_b) {
    return condition_b->total < condition_a->total ? &*condition_b : &*condition_a;
  }
  if (condition_a) return &*condition_a;
  if (condition_b) return &*condition_b;
  return nullptr;
}

namespace {

// Effective dark count seen by sender k in the super-receiver construction.
double sender_dark_count(const PhaseInsensitiveBgmac& channel, int k, NoiseCondition c) {
  const double w2 = channel.total_weight2();
  if (c == NoiseCondition::A) {
    return channel.dark_photons + w2 * channel.conjugated[k] - channel.conjugated_weight2();
  }
  return channel.dark_photons + w2 * (1 - channel.conjugated[k]) -
         (channel.total_weight2() - channel.conjugated_weight2());
}

OuterBounds unassisted_bounds(const PhaseInsensitiveBgmac& channel, const EnergyBudget& budget,
                              NoiseCondition c) {
  OuterBounds b;
  b.condition_used = c;
  const double w2 = channel.total_weight2();
  for (int k = 0; k < channel.senders(); ++k) {
    const double nbk = sender_dark_count(channel, k, c);
    b.sender_dark_counts.push_back(nbk);
    b.individual.push_back(thermal_entropy(w2 * budget.photons[k] + nbk) - thermal_entropy(nbk));
  }
  double received = channel.dark_photons;
  for (int k = 0; k < channel.senders(); ++k) {
    received += channel.weight2(k) * budget.photons[k];
  }
  const double bottleneck_dark = (c == NoiseCondition::A)
                                     ? channel.dark_photons - channel.conjugated_weight2()
                                     : channel.dark_photons -
                                           (w2 - channel.conjugated_weight2());
  b.total = thermal_entropy(received) - thermal_entropy(bottleneck_dark);
  return b;
}

OuterBounds ea_bounds(const PhaseInsensitiveBgmac& channel, const EnergyBudget& budget,
                      NoiseCondition c) {
  OuterBounds b;
  b.condition_used = c;
  const double w2 = channel.total_weight2();
  for (int k = 0; k < channel.senders(); ++k) {
    const double nbk = sender_dark_count(channel, k, c);
    b.sender_dark_counts.push_back(nbk);
    b.individual.push_back(ea_bgc_capacity(channel.conjugated[k] == 1, budget.photons[k], w2, nbk));
  }
  // Bottleneck channel after the beamsplitter: the injected photon number
  // carries the conjugator contribution delta'_k, which is delta_k under
  // condition A and 1 - delta_k under condition B.
  double injected = 0.0;
  for (int k = 0; k < channel.senders(); ++k) {
    const double delta_prime = (c == NoiseCondition::A) ? channel.conjugated[k]
                                                        : 1 - channel.conjugated[k];
    injected += channel.weight2(k) / w2 * (budget.photons[k] + delta_prime);
  }
  const double bottleneck_dark = (c == NoiseCondition::A)
                                     ? channel.dark_photons - channel.conjugated_weight2()
                                     : channel.dark_photons -
                                           (w2 - channel.conjugated_weight2());
  b.total = ea_bgc_capacity(c == NoiseCondition::B, injected, w2, bottleneck_dark);
  return b;
}

}  // namespace

OuterBoundsReport unassisted_outer(const PhaseInsensitiveBgmac& channel,
                                   const EnergyBudget& budget) {
  require_valid(channel, "unassisted_outer");
  require_budget(channel, budget);
  OuterBoundsReport rep;
  if (condition_holds(channel, NoiseCondition::A)) {
    rep.condition_a = unassisted_bounds(channel, budget, NoiseCondition::A);
  }
  if (condition_holds(channel, NoiseCondition::B)) {
    rep.condition_b = unassisted_bounds(channel, budget, NoiseCondition::B);
  }
  return rep;
}

double ea_bgc_capacity(bool conjugated, double ns, double w2, double nb) {
  if (ns < 0.0) throw std::invalid_argument("ea_bgc_capacity: negative brightness");
  const PointToPointBgc bgc{conjugated, w2, nb};
  const ValidationReport rep = validate(bgc);
  if (!rep.ok) throw unphysical_error("ea_bgc_capacity: " + rep.message);
  const double out = w2 * ns + nb;  // received photon number
  if (!conjugated) {
    const double radicand = (ns + out + 1.0) * (ns + out + 1.0) - 4.0 * w2 * ns * (ns + 1.0);
    if (radicand < -1e-9) {
      throw unphysical_error("ea_bgc_capacity: negative discriminant");
    }
    const double d = std::sqrt(std::max(0.0, radicand));
    const double a_plus = 0.5 * (d - 1.0 + (out - ns));
    const double a_minus = 0.5 * (d - 1.0 - (out - ns));
    return thermal_entropy(ns) + thermal_entropy(out) - thermal_entropy(a_plus) -
           thermal_entropy(a_minus);
  }
  const double radicand = (out - ns) * (out - ns) + 4.0 * w2 * ns * (ns + 1.0);
  const double d = std::sqrt(radicand);
  const double a_plus = 0.5 * (d + out + ns);
  const double a_minus = 0.5 * (-d + out + ns);
  return thermal_entropy(ns) + thermal_entropy(out) - thermal_entropy(a_plus) -
         thermal_entropy(a_minus);
}

double ea_bgc_capacity(const PointToPointBgc& bgc, double ns) {
  return ea_bgc_capacity(bgc.conjugated, ns, bgc.weight2, bgc.dark_photons);
}

OuterBoundsReport ea_outer(const PhaseInsensitiveBgmac& channel, const EnergyBudget& budget) {
  require_valid(channel, "ea_outer");
  require_budget(channel, budget);
  OuterBoundsReport rep;
  if (condition_holds(channel, NoiseCondition::A)) {
    rep.condition_a = ea_bounds(channel, budget, NoiseCondition::A);
  }
  if (condition_holds(channel, NoiseCondition::B)) {
    rep.condition_b = ea_bounds(channel, budget, NoiseCondition::B);
  }
  return rep;
}

double ea_total_rate_capacity(const PhaseInsensitiveBgmac& channel, const EnergyBudget& budget) {
  require_valid(channel, "ea_total_rate_capacity");
  require_budget(channel, budget);
  return rate_functional(channel, GaussianEncoding::tmsv(channel.senders()), budget,
                         SenderSet::universe(channel.senders()));
}

}  // namespace bgmac
