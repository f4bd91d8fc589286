#pragma once

#include <cstddef>
#include <span>

namespace fluxsim {

struct AutocorrelationResult {
  double tau = 1.0;       // integrated autocorrelation time, in sample strides
  bool degenerate = false;  // constant series, tau is not defined
};

// Integrated autocorrelation time tau = 1 + 2*sum_t rho(t) with the
// self-consistent window cutoff W: smallest W with W >= window_factor*tau(W).
// Requires at least 100 samples.  A constant series is reported as degenerate.
AutocorrelationResult autocorrelation_time(std::span<const double> samples,
                                           double window_factor = 6.0);

struct SeriesStats {
  double mean = 0.0;
  double std_error = 0.0;  // sample_std * sqrt(2*tau/n)
  double tau = 1.0;
  std::size_t n_samples = 0;
  bool degenerate = false;
};

SeriesStats compute_series_stats(std::span<const double> samples);

}  // namespace fluxsim
