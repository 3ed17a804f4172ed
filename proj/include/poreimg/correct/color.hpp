#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "poreimg/image.hpp"

namespace poreimg::correct {

/// One checker patch: its ROI relative to the checker's lower-left corner
/// plus the RGB value it should map to.
struct Swatch {
  PhysRect roi;  // physical coords relative to the checker ROI
  std::array<double, 3> target{0, 0, 0};
};

/// Affine color map out = M c + b fitted over checker swatches.
class ColorCorrection {
 public:
  ColorCorrection() = default;
  ColorCorrection(const std::array<double, 9>& matrix, const std::array<double, 3>& offset,
                  double residual = 0.0)
      : matrix_(matrix), offset_(offset), residual_(residual) {}

  static ColorCorrection identity() { return ColorCorrection({1, 0, 0, 0, 1, 0, 0, 0, 1}, {0, 0, 0}); }

  const std::array<double, 9>& matrix() const { return matrix_; }
  const std::array<double, 3>& offset() const { return offset_; }
  /// RMS of |M obs + b - target| over the fitted swatches.
  double residual() const { return residual_; }

  std::array<double, 3> map(const std::array<double, 3>& rgb) const;

 private:
  std::array<double, 9> matrix_{1, 0, 0, 0, 1, 0, 0, 0, 1};
  std::array<double, 3> offset_{0, 0, 0};
  double residual_ = 0.0;
};

/// Mean RGB over a swatch ROI (absolute physical coordinates).
std::array<double, 3> measure_swatch(const PhysicalImage& image, const PhysRect& roi);

/// Least-squares affine fit sending observed swatch means onto targets.
/// Needs >= 4 swatches whose observed colors span rank 3 after centering.
ColorCorrection fit_color_correction(const PhysicalImage& image, const PhysRect& swatch_roi,
                                     const std::vector<Swatch>& reference_swatches);

/// Pointwise M c + b, clamped to [0,1]; RGB input only.
PhysicalImage apply_color_correction(const ColorCorrection& correction,
                                     const PhysicalImage& image);

/// The 24 classic color-checker reference values (sRGB in [0,1], row by
/// row from dark skin to black).
std::vector<std::array<double, 3>> classic_color_checker();

/// Targets from a JSON file holding an array of [r, g, b] triples.
std::vector<std::array<double, 3>> load_swatch_targets(const std::filesystem::path& path);

}  // namespace poreimg::correct
