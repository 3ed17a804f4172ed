#pragma once

#include <vector>

#include "poreimg/image.hpp"
#include "poreimg/regularize/tv.hpp"

namespace poreimg::segment {

/// Integer facies/region labeling of the physical domain. Labels form the
/// contiguous range 0..label_count-1, every pixel is labeled, and each
/// label's pixel set is 4-connected.
struct LabelMap {
  std::vector<int> labels;
  int rows = 0, cols = 0;
  int label_count = 0;
  CoordinateSystem coords;

  int at(int r, int c) const { return labels[static_cast<size_t>(r) * cols + c]; }
  int& at(int r, int c) { return labels[static_cast<size_t>(r) * cols + c]; }

  /// Constant zero labeling of a whole domain (single region).
  static LabelMap whole_domain(const CoordinateSystem& cs);
};

/// Gradient modulus in pixel units (central differences inside, one-sided
/// at the borders).
Tensor gradient_modulus(const Tensor& single_channel);

/// Gradient/watershed facies segmentation: TV-smooth the image, seed
/// markers in the low-gradient basins below the marker quantile, flood the
/// gradient landscape, and relabel contiguously.
LabelMap watershed_labels(const PhysicalImage& image, double smoothing_mu_m,
                          double marker_quantile = 0.2,
                          const regularize::RegularizationConfig& reg = {});

}  // namespace poreimg::segment
