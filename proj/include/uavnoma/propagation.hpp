#pragma once

#include <variant>

namespace uavnoma {

// PL(d) = 1 + d^exponent
struct DistancePowerLoss {
  double exponent = 2.0;
  bool operator==(const DistancePowerLoss&) const = default;
};

// Close-in free-space reference distance model (urban micro), carrier in GHz,
// distance in metres: 32.4 + 21 log10(d) + 20 log10(f_c) dB.
struct CloseInLoss {
  double carrier_ghz = 30.0;
  bool operator==(const CloseInLoss&) const = default;
};

using PathLossModel = std::variant<DistancePowerLoss, CloseInLoss>;

struct ChannelModel {
  PathLossModel path_loss = DistancePowerLoss{};
  int antennas = 10;         // M, half-wavelength ULA
  double beam_angle = 0.0;   // boresight azimuth theta_bar (rad)

  void validate() const;
  bool operator==(const ChannelModel&) const = default;
};

// Transmit power and noise in linear milliwatts.
struct LinkBudget {
  double tx_power_mw = 100.0;
  double noise_mw = 1.0;

  static LinkBudget from_dbm(double tx_power_dbm, double noise_dbm);
  double snr() const { return tx_power_mw / noise_mw; }  // rho = P_Tx / N0
  bool operator==(const LinkBudget&) const = default;
};

double dbm_to_mw(double dbm);

// Linear attenuation at 3-D link distance d3 (> 0).
double path_loss(const ChannelModel& model, double d3);

// Fejer kernel F_M(pi x) = (1/M) (sin(M pi x / 2) / sin(pi x / 2))^2, in [0, M].
double fejer_kernel(int antennas, double x);

// Beamforming gain |b^H a(theta)|^2 M towards a user at azimuth theta with the
// small-angle approximation sin(theta) ~ theta; this is what every analytic and
// simulated path uses.
double array_gain(const ChannelModel& model, double theta);

// Same gain without the small-angle approximation.
double array_gain_exact(const ChannelModel& model, double theta);

// P{|h^H b|^2 < eta} for a user at horizontal distance d, azimuth theta, with
// Rayleigh path gain: 1 - exp(-eta PL(sqrt(d^2+h^2)) / F_M(pi (theta_bar - theta))).
double effective_gain_cdf(const ChannelModel& model, double d, double h, double theta, double eta);

}  // namespace uavnoma
