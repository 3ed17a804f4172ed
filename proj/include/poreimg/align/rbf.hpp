#pragma once

#include <vector>

#include "poreimg/image.hpp"

namespace poreimg::align {

/// Thin-plate spline interpolant with a linear polynomial term; reproduces
/// affine data exactly and interpolates all given points. Coordinates are
/// normalized internally for conditioning.
class ThinPlateSpline {
 public:
  ThinPlateSpline(std::vector<PhysCoord> points, std::vector<double> values);

  double operator()(PhysCoord p) const;

  size_t size() const { return points_.size(); }

 private:
  std::vector<PhysCoord> points_;  // normalized coordinates
  std::vector<double> weights_;    // n kernel weights + 3 affine coefficients
  double x0_ = 0.0, y0_ = 0.0, scale_ = 1.0;
};

}  // namespace poreimg::align
