#pragma once

#include "qsim/types.hpp"

#include <string>
#include <vector>

namespace qsim {

enum class ChannelKind { BitFlip, Depolarizing, AmplitudeDamping, PhaseDamping };

// Single-qubit Kraus channel. Multi-qubit noise is composed by per-qubit
// application at the executor level.
struct KrausChannel {
  std::vector<Mat2> kraus_ops;
  ChannelKind kind = ChannelKind::BitFlip;
  double p = 0.0;
};

KrausChannel bit_flip(double p);
KrausChannel depolarizing(double p);
KrausChannel amplitude_damping(double p);
KrausChannel phase_damping(double p);

struct ChannelValidation {
  bool ok = false;
  double max_deviation = 0.0; // max |(sum E^dag E - I)_{ij}|
  std::string detail;
};

ChannelValidation validate_channel(const KrausChannel& ch);

// CLI names: bitflip, depolarizing, ampdamp, phasedamp.
KrausChannel channel_by_name(const std::string& name, double p);
std::string channel_name(ChannelKind kind);
// Default strengths: 0.005 for bitflip, 0.01 for the rest.
double default_noise_p(ChannelKind kind);

} // namespace qsim
