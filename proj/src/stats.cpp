#include "fluxsim/stats.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fluxsim {

AutocorrelationResult autocorrelation_time(std::span<const double> samples,
                                           double window_factor) {
  const std::size_t n = samples.size();
  if (n < 100) {
    throw std::invalid_argument(
        "autocorrelation_time: need at least 100 samples, got " +
        std::to_string(n));
  }
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  var /= static_cast<double>(n);
  if (var <= 0.0 || !std::isfinite(var)) {
    return {1.0, true};
  }

  const std::size_t max_lag = n / 4;
  double tau = 1.0;
  double running = 0.0;
  for (std::size_t t = 1; t <= max_lag; ++t) {
    double c = 0.0;
    for (std::size_t i = 0; i + t < n; ++i) {
      c += (samples[i] - mean) * (samples[i + t] - mean);
    }
    c /= static_cast<double>(n - t) * var;
    running += c;
    tau = 1.0 + 2.0 * running;
    if (static_cast<double>(t) >= window_factor * tau) break;
  }
  if (tau < 1.0) tau = 1.0;
  return {tau, false};
}

SeriesStats compute_series_stats(std::span<const double> samples) {
  SeriesStats out;
  out.n_samples = samples.size();
  const auto ac = autocorrelation_time(samples);
  out.tau = ac.tau;
  out.degenerate = ac.degenerate;

  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : samples) var += (x - mean) * (x - mean);
  var /= (n - 1.0);
  out.mean = mean;
  out.std_error = ac.degenerate ? 0.0 : std::sqrt(var * 2.0 * ac.tau / n);
  return out;
}

}  // namespace fluxsim
