#include "cpt/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "cpt/counter_rng.hpp"

namespace cpt {

ChannelDraw draw_rayleigh_gains(std::size_t n, double mean, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("channel draw needs at least one channel");
  if (!(mean > 0.0) || !std::isfinite(mean))
    throw std::invalid_argument("mean channel gain must be positive");
  const CounterStream rng(seed);
  ChannelDraw d{std::vector<double>(n), seed, mean};
  for (std::size_t i = 0; i < n; ++i) d.gains[i] = -mean * std::log(rng.uniform(i));
  return d;
}

double db_to_linear(double x_db) {
  if (!std::isfinite(x_db)) throw std::invalid_argument("dB value must be finite");
  return std::pow(10.0, x_db / 10.0);
}

double linear_to_db(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("linear value must be positive to convert to dB");
  return 10.0 * std::log10(x);
}

double dbm_to_watts(double x_dbm, double bandwidth_hz) {
  if (!std::isfinite(x_dbm)) throw std::invalid_argument("dBm value must be finite");
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  return std::pow(10.0, (x_dbm - 30.0) / 10.0) * bandwidth_hz;
}

}  // namespace cpt
