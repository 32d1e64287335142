#include "qsim/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace qsim {

namespace {

void check_p(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("noise: p must lie in [0, 1]");
}

Mat2 pauli_x() { return (Mat2() << 0, 1, 1, 0).finished(); }
Mat2 pauli_y() { return (Mat2() << 0, cxd(0, -1), cxd(0, 1), 0).finished(); }
Mat2 pauli_z() { return (Mat2() << 1, 0, 0, -1).finished(); }

} // namespace

KrausChannel bit_flip(double p) {
  check_p(p);
  KrausChannel ch{{}, ChannelKind::BitFlip, p};
  ch.kraus_ops.push_back(std::sqrt(1 - p) * Mat2::Identity());
  if (p > 0) ch.kraus_ops.push_back(std::sqrt(p) * pauli_x());
  return ch;
}

KrausChannel depolarizing(double p) {
  check_p(p);
  KrausChannel ch{{}, ChannelKind::Depolarizing, p};
  ch.kraus_ops.push_back(std::sqrt(1 - 3 * p / 4) * Mat2::Identity());
  if (p > 0) {
    ch.kraus_ops.push_back(std::sqrt(p / 4) * pauli_x());
    ch.kraus_ops.push_back(std::sqrt(p / 4) * pauli_y());
    ch.kraus_ops.push_back(std::sqrt(p / 4) * pauli_z());
  }
  return ch;
}

KrausChannel amplitude_damping(double p) {
  check_p(p);
  KrausChannel ch{{}, ChannelKind::AmplitudeDamping, p};
  Mat2 e0 = Mat2::Zero(), e1 = Mat2::Zero();
  e0(0, 0) = 1.0;
  e0(1, 1) = std::sqrt(1 - p);
  e1(0, 1) = std::sqrt(p);
  ch.kraus_ops.push_back(e0);
  if (p > 0) ch.kraus_ops.push_back(e1);
  return ch;
}

KrausChannel phase_damping(double p) {
  check_p(p);
  KrausChannel ch{{}, ChannelKind::PhaseDamping, p};
  ch.kraus_ops.push_back(std::sqrt(1 - p / 2) * Mat2::Identity());
  if (p > 0) ch.kraus_ops.push_back(std::sqrt(p / 2) * pauli_z());
  return ch;
}

ChannelValidation validate_channel(const KrausChannel& ch) {
  ChannelValidation v;
  if (ch.kraus_ops.empty() || ch.kraus_ops.size() > 4) {
    v.ok = false;
    v.max_deviation = 1.0;
    v.detail = "operator count outside [1, 4]";
    return v;
  }
  Mat2 sum = Mat2::Zero();
  for (const auto& e : ch.kraus_ops) sum += e.adjoint() * e;
  v.max_deviation = (sum - Mat2::Identity()).cwiseAbs().maxCoeff();
  v.ok = v.max_deviation < kCompletenessTol;
  v.detail = v.ok ? "complete" : "completeness relation violated";
  return v;
}

KrausChannel channel_by_name(const std::string& name, double p) {
  if (name == "bitflip") return bit_flip(p);
  if (name == "depolarizing") return depolarizing(p);
  if (name == "ampdamp") return amplitude_damping(p);
  if (name == "phasedamp") return phase_damping(p);
  throw std::invalid_argument("unknown channel name: " + name);
}

std::string channel_name(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::BitFlip: return "bitflip";
    case ChannelKind::Depolarizing: return "depolarizing";
    case ChannelKind::AmplitudeDamping: return "ampdamp";
    case ChannelKind::PhaseDamping: return "phasedamp";
  }
  return "?";
}

double default_noise_p(ChannelKind kind) {
  return kind == ChannelKind::BitFlip ? 0.005 : 0.01;
}

} // namespace qsim
