#include "bgmac/channel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bgmac {

std::string to_string(BgcClass c) {
  switch (c) {
    case BgcClass::ThermalLoss: return "thermal_loss";
    case BgcClass::Awgn: return "awgn";
    case BgcClass::Amplifier: return "amplifier";
    case BgcClass::ConjugateAmplifier: return "conjugate_amplifier";
  }
  return "unknown";
}

BgcClass classify(const PointToPointBgc& bgc) {
  if (bgc.conjugated) return BgcClass::ConjugateAmplifier;
  if (std::abs(bgc.weight2 - 1.0) <= 1e-12) return BgcClass::Awgn;
  return bgc.weight2 < 1.0 ? BgcClass::ThermalLoss : BgcClass::Amplifier;
}

double display_gain(const PointToPointBgc& bgc) {
  return bgc.conjugated ? bgc.weight2 + 1.0 : bgc.weight2;
}

double PhaseInsensitiveBgmac::total_weight2() const {
  double t = 0.0;
  for (const auto& w : weights) t += std::norm(w);
  return t;
}

double PhaseInsensitiveBgmac::covariant_excess() const {
  double t = 0.0;
  for (int k = 0; k < senders(); ++k) t += (1.0 - 2.0 * conjugated[k]) * weight2(k);
  return t;
}

double PhaseInsensitiveBgmac::conjugated_weight2() const {
  double t = 0.0;
  for (int k = 0; k < senders(); ++k) t += conjugated[k] * weight2(k);
  return t;
}

PhaseInsensitiveBgmac PhaseInsensitiveBgmac::from_bgc(const PointToPointBgc& bgc) {
  PhaseInsensitiveBgmac ch;
  ch.weights = {std::sqrt(bgc.weight2)};
  ch.conjugated = {bgc.conjugated ? 1 : 0};
  ch.dark_photons = bgc.dark_photons;
  return ch;
}

ValidationReport validate(const PhaseInsensitiveBgmac& channel) {
  ValidationReport rep;
  if (channel.weights.size() != channel.conjugated.size() || channel.weights.empty()) {
    rep.ok = false;
    rep.message = "weights and conjugation flags must be non-empty and equal length";
    return rep;
  }
  for (int d : channel.conjugated) {
    if (d != 0 && d != 1) {
      rep.ok = false;
      rep.message = "conjugation flags must be 0 or 1";
      return rep;
    }
  }
  const double floor_cov = -1.0 + channel.total_weight2() - channel.conjugated_weight2();
  const double floor_con = channel.conjugated_weight2();
  const double floor = std::max({floor_cov, floor_con, 0.0});
  rep.u2_squared = channel.dark_photons - channel.conjugated_weight2();
  rep.u1_squared = 1.0 + rep.u2_squared - channel.covariant_excess();
  if (channel.dark_photons < floor - 1e-12) {
    rep.ok = false;
    rep.bona_fide_deficit = floor - channel.dark_photons;
    std::ostringstream os;
    os << "bona fide condition violated: N_B = " << channel.dark_photons
       << " but the channel requires N_B >= " << floor << " (deficit "
       << rep.bona_fide_deficit << ")";
    rep.message = os.str();
    return rep;
  }
  if (rep.u2_squared < -1e-12 || rep.u1_squared < -1e-12) {
    rep.ok = false;
    std::ostringstream os;
    os << "environment couplings unphysical: u1^2 = " << rep.u1_squared
       << ", u2^2 = " << rep.u2_squared;
    rep.message = os.str();
    return rep;
  }
  rep.message = "ok";
  return rep;
}

ValidationReport validate(const PointToPointBgc& bgc) {
  return validate(PhaseInsensitiveBgmac::from_bgc(bgc));
}

namespace {

void require_valid(const PhaseInsensitiveBgmac& channel, const char* where) {
  if (channel.relaxed) return;
  const ValidationReport rep = validate(channel);
  if (!rep.ok) {
    throw unphysical_error(std::string(where) + ": " + rep.message);
  }
}

Eigen::Matrix2d rotation_block(double phi) {
  Eigen::Matrix2d r;
  r << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  return r;
}

const Eigen::Matrix2d kConjugate = (Eigen::Matrix2d() << 1, 0, 0, -1).finished();

}  // namespace

NoiseParams noise_params(const PhaseInsensitiveBgmac& channel) {
  const ValidationReport rep = validate(channel);
  if (!rep.ok && !channel.relaxed) {
    throw unphysical_error("noise_params: " + rep.message);
  }
  NoiseParams p;
  p.u2 = std::sqrt(std::max(0.0, rep.u2_squared));
  p.u1 = std::sqrt(std::max(0.0, rep.u1_squared));
  return p;
}

CovarianceMatrix apply_on(const PhaseInsensitiveBgmac& channel, const CovarianceMatrix& input,
                          const std::vector<int>& signal_modes) {
  require_valid(channel, "apply_on");
  const int s = channel.senders();
  if (static_cast<int>(signal_modes.size()) != s) {
    throw std::invalid_argument("apply_on: expected one signal mode per sender");
  }
  const int m_in = input.modes();
  std::vector<bool> is_signal(m_in, false);
  for (int idx : signal_modes) {
    if (idx < 0 || idx >= m_in) throw std::out_of_range("apply_on: signal mode out of range");
    if (is_signal[idx]) throw std::invalid_argument("apply_on: duplicate signal mode");
    is_signal[idx] = true;
  }

  const NoiseParams np = noise_params(channel);
  const int m_out = m_in - s + 1;      // B plus the untouched modes
  const int cols = 2 * (m_in + 2);     // two appended environment modes
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(2 * m_out, cols);

  // Output row 0 is B.
  for (int k = 0; k < s; ++k) {
    Eigen::Matrix2d blk = std::abs(channel.weights[k]) * rotation_block(std::arg(channel.weights[k]));
    if (channel.conjugated[k]) blk *= kConjugate;
    t.block<2, 2>(0, 2 * signal_modes[k]) = blk;
  }
  t.block<2, 2>(0, 2 * m_in) = np.u1 * Eigen::Matrix2d::Identity();
  t.block<2, 2>(0, 2 * m_in + 2) = np.u2 * kConjugate;

  int row = 1;
  for (int i = 0; i < m_in; ++i) {
    if (is_signal[i]) continue;
    t.block<2, 2>(2 * row, 2 * i) = Eigen::Matrix2d::Identity();
    ++row;
  }

  return apply_transform(SymplecticTransform(std::move(t)), input, CovarianceMatrix::vacuum(2));
}

CovarianceMatrix apply_to_cm(const PhaseInsensitiveBgmac& channel, const CovarianceMatrix& input) {
  const int s = channel.senders();
  if (input.modes() != 2 * s) {
    throw std::invalid_argument("apply_to_cm: input must interleave one idler per sender");
  }
  std::vector<int> signals(s);
  for (int k = 0; k < s; ++k) signals[k] = 2 * k;
  return apply_on(channel, input, signals);
}

PhaseInsensitiveBgmac interference_bgmac(const std::vector<double>& eta,
                                         const PointToPointBgc& bgc) {
  if (eta.empty()) throw std::invalid_argument("interference_bgmac: empty ratio list");
  double sum = 0.0;
  for (double e : eta) {
    if (e < 0.0) throw std::invalid_argument("interference_bgmac: negative interference ratio");
    sum += e;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("interference_bgmac: ratios must sum to one, got " +
                                std::to_string(sum));
  }
  PhaseInsensitiveBgmac ch;
  for (double e : eta) {
    ch.weights.emplace_back(std::sqrt(e * bgc.weight2), 0.0);
    ch.conjugated.push_back(bgc.conjugated ? 1 : 0);
  }
  ch.dark_photons = bgc.dark_photons;
  return ch;
}

namespace {

PointToPointBgc bgc_from(const nlohmann::json& j) {
  PointToPointBgc bgc;
  const std::string cls = j.at("class").get<std::string>();
  if (cls == "thermal_loss" || cls == "awgn" || cls == "amplifier") {
    bgc.conjugated = false;
  } else if (cls == "conjugate_amplifier") {
    bgc.conjugated = true;
  } else {
    throw std::invalid_argument("unknown channel class '" + cls + "'");
  }
  bgc.weight2 = j.at("w2").get<double>();
  bgc.dark_photons = j.at("nb").get<double>();
  if (bgc.weight2 < 0.0) throw std::invalid_argument("w2 must be nonnegative");
  if (cls == "awgn" && std::abs(bgc.weight2 - 1.0) > 1e-12) {
    throw std::invalid_argument("awgn requires w2 = 1");
  }
  if (cls == "thermal_loss" && bgc.weight2 >= 1.0) {
    throw std::invalid_argument("thermal_loss requires w2 < 1");
  }
  if (cls == "amplifier" && bgc.weight2 <= 1.0) {
    throw std::invalid_argument("amplifier requires w2 > 1");
  }
  return bgc;
}

PhaseInsensitiveBgmac channel_from(const nlohmann::json& j) {
  PhaseInsensitiveBgmac ch;
  if (j.contains("interference")) {
    const auto& spec = j.at("interference");
    const std::vector<double> eta = spec.at("eta").get<std::vector<double>>();
    ch = interference_bgmac(eta, bgc_from(spec.at("bgc")));
  } else {
    const int s = j.at("s").get<int>();
    const auto w = j.at("w").get<std::vector<std::vector<double>>>();
    ch.conjugated = j.at("delta").get<std::vector<int>>();
    ch.dark_photons = j.at("nb").get<double>();
    if (static_cast<int>(w.size()) != s || static_cast<int>(ch.conjugated.size()) != s) {
      throw std::invalid_argument("channel json: w and delta must have length s");
    }
    for (const auto& re_im : w) {
      if (re_im.size() != 2) throw std::invalid_argument("channel json: weights are [re, im] pairs");
      ch.weights.emplace_back(re_im[0], re_im[1]);
    }
  }
  if (j.contains("relaxed")) ch.relaxed = j.at("relaxed").get<bool>();
  return ch;
}

}  // namespace

PhaseInsensitiveBgmac channel_from_json(const std::string& json_text) {
  return channel_from(nlohmann::json::parse(json_text));
}

PointToPointBgc bgc_from_json(const std::string& json_text) {
  return bgc_from(nlohmann::json::parse(json_text));
}

}  // namespace bgmac
