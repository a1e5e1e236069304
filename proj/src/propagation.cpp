#include "uavnoma/propagation.hpp"

#include <cmath>
#include <numbers>

#include "uavnoma/errors.hpp"

namespace uavnoma {

void ChannelModel::validate() const {
  if (antennas < 1) fail(ErrorCode::ValidationError, "channel: antenna count must be >= 1");
  if (const auto* dp = std::get_if<DistancePowerLoss>(&path_loss); dp && !(dp->exponent > 0.0))
    fail(ErrorCode::ValidationError, "channel: path-loss exponent must be > 0");
  if (const auto* ci = std::get_if<CloseInLoss>(&path_loss); ci && !(ci->carrier_ghz > 0.0))
    fail(ErrorCode::ValidationError, "channel: carrier frequency must be > 0");
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

LinkBudget LinkBudget::from_dbm(double tx_power_dbm, double noise_dbm) {
  return LinkBudget{dbm_to_mw(tx_power_dbm), dbm_to_mw(noise_dbm)};
}

double path_loss(const ChannelModel& model, double d3) {
  if (!(d3 > 0.0)) fail(ErrorCode::NonPositiveDistance, "path loss needs a positive link distance");
  if (const auto* dp = std::get_if<DistancePowerLoss>(&model.path_loss)) {
    return 1.0 + std::pow(d3, dp->exponent);
  }
  const auto& ci = std::get<CloseInLoss>(model.path_loss);
  const double db = 32.4 + 21.0 * std::log10(d3) + 20.0 * std::log10(ci.carrier_ghz);
  return std::pow(10.0, db / 10.0);
}

double fejer_kernel(int antennas, double x) {
  const double m = antennas;
  const double y = std::numbers::pi * x / 2.0;
  // distance to the nearest removable singularity y = k pi
  const double t = y - std::numbers::pi * std::nearbyint(y / std::numbers::pi);
  if (std::abs(t) < 1e-6) {
    return m * (1.0 - (m * m - 1.0) * t * t / 3.0);
  }
  const double ratio = std::sin(m * y) / std::sin(y);
  return ratio * ratio / m;
}

double array_gain(const ChannelModel& model, double theta) {
  return fejer_kernel(model.antennas, model.beam_angle - theta);
}

double array_gain_exact(const ChannelModel& model, double theta) {
  return fejer_kernel(model.antennas, std::sin(model.beam_angle) - std::sin(theta));
}

double effective_gain_cdf(const ChannelModel& model, double d, double h, double theta, double eta) {
  if (!(eta > 0.0)) return 0.0;
  const double gain = array_gain(model, theta);
  if (!(gain > 0.0)) return 1.0;
  const double pl = path_loss(model, std::sqrt(d * d + h * h));
  return -std::expm1(-eta * pl / gain);
}

}  // namespace uavnoma
