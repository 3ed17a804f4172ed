#pragma once

#include <limits>
#include <vector>

#include "poreimg/image.hpp"
#include "poreimg/regularize/tv.hpp"
#include "poreimg/segment/threshold.hpp"
#include "poreimg/segment/watershed.hpp"

namespace poreimg::segment {

/// Monochromatic signal selector for image differences.
enum class Channel { R, G, B, Gray, NegKey };

std::string to_string(Channel ch);
Channel channel_from_string(const std::string& name);

/// Single-channel interpretation of an image under the selector.
Tensor signal_channel(const PhysicalImage& image, Channel ch);

/// Reference images of the same quiescent state: one designated base plus
/// secondary shots capturing illumination fluctuations.
struct ReferenceStack {
  PhysicalImage base;
  std::vector<PhysicalImage> others;
};

/// Pointwise maximum over the stack of |signal(ref) - signal(base)|; the
/// systematic-noise floor subtracted from signals before thresholding.
Tensor fuse_references(const ReferenceStack& stack, Channel ch);

/// Per-label thresholding intervals chi_[lower, upper].
struct ThresholdModel {
  struct Interval {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
  };
  enum class Mode { Static, Dynamic };

  std::vector<Interval> intervals;  // indexed by label
  Mode mode = Mode::Static;
  double drift_band = 0.05;  // dynamic updates stay inside prior +- band
  int histogram_bins = 256;
  BimodalityConfig bimodality;
};

struct PhaseConfig {
  Channel channel = Channel::NegKey;
  regularize::RegularizationConfig reg;  // Darcy-scale signal regularization
  /// Connected mask components below this physical area are removed as
  /// speckle; negative = derive (5 * pore_length)^2 from the reg config,
  /// zero = keep everything.
  double min_area_m2 = -1.0;
};

/// Darcy-scale floor-subtracted signal of a secondary image against the
/// reference stack (difference, floor subtraction, clamp at zero, TV).
PhysicalImage phase_signal(const PhysicalImage& secondary, const ReferenceStack& references,
                           Channel channel, const regularize::RegularizationConfig& reg);

/// Binary phase indicator: per-label interval thresholding of the phase
/// signal; dynamic mode recalibrates each label's lower bound from its
/// histogram when it is clearly bimodal.
PhysicalImage binary_concentration(const PhysicalImage& secondary,
                                   const ReferenceStack& references, const LabelMap& labels,
                                   const ThresholdModel& model, const PhaseConfig& config);

/// Drop 4-connected components smaller than min_area pixels from a binary
/// tensor (in place).
void remove_small_components(Tensor& mask, int min_area_px);

}  // namespace poreimg::segment
