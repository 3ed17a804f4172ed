#pragma once

#include <memory>
#include <vector>

#include "poreimg/align/rbf.hpp"
#include "poreimg/image.hpp"

namespace poreimg::align {

/// One accepted (or rejected) local translation, in physical units.
struct FieldSample {
  PhysCoord center;
  double du_x = 0.0;  // meters, +x rightward
  double du_y = 0.0;  // meters, +y upward
  bool accepted = true;
};

/// Expert constraint pinning one displacement component at a point, e.g.
/// zero normal displacement on a fixed wall.
struct BoundaryCondition {
  PhysCoord point;
  int component = 0;  // 0 = x, 1 = y
  double value = 0.0;
};

/// Globalized displacement map psi(x) = x + u(x): a smooth RBF interpolant
/// through the accepted samples plus a globally continuous piecewise-affine
/// interpolation of it on a Cartesian node grid, with an approximate
/// inverse built the same way from the displaced nodes.
class DisplacementField {
 public:
  struct NodeGrid {
    int rows = 0, cols = 0;  // node counts, >= 2 each
    std::vector<double> ux, uy;
  };

  static DisplacementField identity(const CoordinateSystem& domain);

  /// Smooth interpolant (exact at accepted samples).
  PhysCoord displacement_smooth(PhysCoord p) const;

  /// Piecewise-affine displacement / map / inverse map.
  PhysCoord displacement(PhysCoord p) const;
  PhysCoord apply(PhysCoord p) const;
  PhysCoord apply_inverse(PhysCoord p) const;

  const CoordinateSystem& domain() const { return domain_; }
  const std::vector<FieldSample>& samples() const { return samples_; }
  const std::vector<BoundaryCondition>& boundary_conditions() const { return bcs_; }
  const NodeGrid& forward_grid() const { return forward_; }
  const NodeGrid& inverse_grid() const { return inverse_; }

  friend DisplacementField build_field(const std::vector<FieldSample>&,
                                       const std::vector<BoundaryCondition>&,
                                       const CoordinateSystem&, int, int);

 private:
  CoordinateSystem domain_;
  std::vector<FieldSample> samples_;
  std::vector<BoundaryCondition> bcs_;
  std::shared_ptr<const ThinPlateSpline> tps_x_, tps_y_;
  NodeGrid forward_, inverse_;
};

/// RBF globalization of local translations: interpolates the accepted
/// samples exactly, honors the boundary conditions, fills in rejected
/// patches continuously, and precomputes the grid maps. Needs >= 3
/// accepted samples.
DisplacementField build_field(const std::vector<FieldSample>& samples,
                              const std::vector<BoundaryCondition>& boundary_conditions,
                              const CoordinateSystem& domain, int grid_rows = 33,
                              int grid_cols = 33);

enum class WarpDirection { Forward, Inverse };

/// Resample the image through psi (forward) or psi^{-1} (inverse); lookups
/// leaving the domain read the fill value.
PhysicalImage warp(const PhysicalImage& image, const DisplacementField& field,
                   WarpDirection direction, double fill = 0.0);

/// Displacement vectors sampled on a stride grid, physical units.
struct GlyphRow {
  double x, y, dx, dy;
};
std::vector<GlyphRow> glyph_export(const DisplacementField& field, int stride);

}  // namespace poreimg::align
