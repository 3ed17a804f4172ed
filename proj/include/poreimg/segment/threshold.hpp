#pragma once

#include <vector>

#include "poreimg/error.hpp"

namespace poreimg::segment {

/// Uniform-bin histogram over [lo, hi].
struct Histogram {
  double lo = 0.0, hi = 1.0;
  std::vector<double> counts;

  static Histogram build(const std::vector<double>& values, int bins, double lo, double hi);

  double bin_width() const { return (hi - lo) / counts.size(); }
  double bin_center(int i) const { return lo + (i + 0.5) * bin_width(); }
  /// Boundary between bins i and i+1 -- the value returned as a threshold.
  double bin_upper_edge(int i) const { return lo + (i + 1) * bin_width(); }
  int nonempty_bins() const;
};

/// Threshold maximizing the between-class variance; ties break toward the
/// lower bin. Needs at least two nonempty bins.
double otsu_threshold(const Histogram& histogram);

struct BimodalityConfig {
  int min_peak_separation_bins = 10;
  double valley_fraction = 0.5;  // valley must dip below this fraction of the lower peak
};

bool is_bimodal(const Histogram& histogram, const BimodalityConfig& config = {});

/// Otsu-like threshold for scenes that may lack a foreground or background:
/// when the histogram passes the bimodality test the Otsu value is returned
/// clamped to prior +- drift_band, otherwise the prior is kept.
double dynamic_threshold(const Histogram& histogram, double prior, double drift_band,
                         const BimodalityConfig& config = {});

}  // namespace poreimg::segment
