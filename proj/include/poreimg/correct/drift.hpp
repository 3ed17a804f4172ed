#pragma once

#include "poreimg/image.hpp"

namespace poreimg::correct {

/// Translation of image content relative to a reference, in pixels:
/// +dx is toward higher columns, +dy toward higher rows.
struct DriftEstimate {
  double dx = 0.0;
  double dy = 0.0;
  double peak_ncc = 0.0;
};

/// Translation maximizing normalized cross-correlation over an ROI with
/// static content, refined to subpixel by a quadratic fit at the peak.
/// Satisfies estimate_drift(shift(x, t), x) = t for integer t.
DriftEstimate estimate_drift(const PhysicalImage& image, const PhysicalImage& reference,
                             const PhysRect& drift_roi, int max_shift_px = 32);

/// Resample the image shifted back by the estimate so it registers with
/// the reference.
PhysicalImage apply_drift(const PhysicalImage& image, const DriftEstimate& estimate);

/// Reference-bound convenience wrapper for series processing.
class DriftCorrection {
 public:
  DriftCorrection(PhysicalImage reference, PhysRect drift_roi, int max_shift_px = 32)
      : reference_(std::move(reference)), roi_(drift_roi), max_shift_(max_shift_px) {}

  DriftEstimate estimate(const PhysicalImage& image) const {
    return estimate_drift(image, reference_, roi_, max_shift_);
  }
  PhysicalImage apply(const PhysicalImage& image) const {
    return apply_drift(image, estimate(image));
  }

  const PhysicalImage& reference() const { return reference_; }
  const PhysRect& roi() const { return roi_; }

 private:
  PhysicalImage reference_;
  PhysRect roi_;
  int max_shift_;
};

}  // namespace poreimg::correct
