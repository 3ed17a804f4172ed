#include "poreimg/segment/threshold.hpp"

#include <algorithm>
#include <cmath>

namespace poreimg::segment {

Histogram Histogram::build(const std::vector<double>& values, int bins, double lo, double hi) {
  require(bins >= 2, "Histogram: at least 2 bins required");
  require(hi > lo, "Histogram: empty value range");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(bins, 0.0);
  for (double v : values) {
    int i = static_cast<int>((v - lo) / (hi - lo) * bins);
    i = std::clamp(i, 0, bins - 1);
    h.counts[i] += 1.0;
  }
  return h;
}

int Histogram::nonempty_bins() const {
  int n = 0;
  for (double c : counts) n += c > 0.0;
  return n;
}

double otsu_threshold(const Histogram& h) {
  require(h.nonempty_bins() >= 2, "otsu_threshold: histogram has fewer than 2 nonempty bins");
  const int n = static_cast<int>(h.counts.size());

  double total = 0.0, total_mean = 0.0;
  for (int i = 0; i < n; ++i) {
    total += h.counts[i];
    total_mean += h.counts[i] * i;
  }

  double w0 = 0.0, sum0 = 0.0;
  double best = -1.0;
  int best_k = 0;
  for (int k = 0; k < n - 1; ++k) {
    w0 += h.counts[k];
    sum0 += h.counts[k] * k;
    double w1 = total - w0;
    if (w0 <= 0.0 || w1 <= 0.0) continue;
    double m0 = sum0 / w0, m1 = (total_mean - sum0) / w1;
    double bcv = w0 * w1 * (m0 - m1) * (m0 - m1);
    if (bcv > best) {  // strict: ties keep the lower bin
      best = bcv;
      best_k = k;
    }
  }
  return h.bin_upper_edge(best_k);
}

namespace {

// Local maxima as plateau runs strictly above both neighbors.
struct Peak {
  int bin;
  double height;
};

std::vector<Peak> find_peaks(const std::vector<double>& c) {
  std::vector<Peak> peaks;
  const int n = static_cast<int>(c.size());
  int i = 0;
  while (i < n) {
    int j = i;
    while (j + 1 < n && c[j + 1] == c[i]) ++j;
    bool left_ok = i == 0 || c[i - 1] < c[i];
    bool right_ok = j == n - 1 || c[j + 1] < c[i];
    bool interior = i > 0 && j < n - 1;  // runs touching the ends are not peaks
    if (c[i] > 0.0 && left_ok && right_ok && interior) peaks.push_back({(i + j) / 2, c[i]});
    i = j + 1;
  }
  return peaks;
}

}  // namespace

bool is_bimodal(const Histogram& h, const BimodalityConfig& cfg) {
  std::vector<Peak> peaks = find_peaks(h.counts);
  if (peaks.size() < 2) return false;
  std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
    return a.height != b.height ? a.height > b.height : a.bin < b.bin;
  });
  Peak p1 = peaks[0], p2 = peaks[1];
  if (std::abs(p1.bin - p2.bin) < cfg.min_peak_separation_bins) return false;
  int lo = std::min(p1.bin, p2.bin), hi = std::max(p1.bin, p2.bin);
  double valley = h.counts[lo];
  for (int i = lo; i <= hi; ++i) valley = std::min(valley, h.counts[i]);
  return valley <= cfg.valley_fraction * std::min(p1.height, p2.height);
}

double dynamic_threshold(const Histogram& h, double prior, double drift_band,
                         const BimodalityConfig& cfg) {
  require(prior >= h.lo && prior <= h.hi, "dynamic_threshold: prior outside histogram support");
  require(drift_band >= 0.0, "dynamic_threshold: negative drift band");
  if (!is_bimodal(h, cfg)) return prior;
  double t = otsu_threshold(h);
  return std::clamp(t, prior - drift_band, prior + drift_band);
}

}  // namespace poreimg::segment
