#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cpt {

/// Rayleigh-fading power gains |h|^2 for a set of channels.
struct ChannelDraw {
  std::vector<double> gains;
  std::uint64_t seed = 0;
  double mean = 1.0;
};

/// n exponential(mean) variates; gain i depends only on (seed, i).
ChannelDraw draw_rayleigh_gains(std::size_t n, double mean, std::uint64_t seed);

double db_to_linear(double x_db);
double linear_to_db(double x);

/// Power density in dBm/Hz integrated over `bandwidth_hz`, in watts.
double dbm_to_watts(double x_dbm, double bandwidth_hz = 1.0);

}  // namespace cpt
