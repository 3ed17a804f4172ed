#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "poreimg/error.hpp"
#include "poreimg/tensor.hpp"

namespace poreimg {

enum class Colorspace { RGB, GRAY, HSV, NEGKEY, BINARY };

std::string to_string(Colorspace cs);
Colorspace colorspace_from_string(const std::string& name);

/// Physical point in meters.
struct PhysCoord {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned physical rectangle, lower-left / upper-right corners.
struct PhysRect {
  PhysCoord ll;
  PhysCoord ur;
  double width() const { return ur.x - ll.x; }
  double height() const { return ur.y - ll.y; }
};

struct PixelIndex {
  int row = 0;
  int col = 0;
};

/// Continuous pixel coordinates; integer values address pixel centers.
struct PixelCoord {
  double row = 0.0;
  double col = 0.0;
};

/// Affine map between matrix indexing (row 0 on top) and a physical
/// Cartesian frame whose origin sits at the lower-left image corner.
class CoordinateSystem {
 public:
  CoordinateSystem() = default;
  CoordinateSystem(int rows, int cols, double width, double height, PhysCoord origin)
      : rows_(rows), cols_(cols), width_(width), height_(height), origin_(origin) {
    require(rows >= 2 && cols >= 2, "CoordinateSystem: needs at least 2x2 pixels");
    require(width > 0.0 && height > 0.0, "CoordinateSystem: non-positive physical size");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double width() const { return width_; }
  double height() const { return height_; }
  PhysCoord origin() const { return origin_; }

  double pitch_x() const { return width_ / cols_; }
  double pitch_y() const { return height_ / rows_; }

  PhysCoord pixel_to_phys(int row, int col) const {
    return {origin_.x + (col + 0.5) * pitch_x(), origin_.y + (rows_ - row - 0.5) * pitch_y()};
  }

  PhysCoord pixel_to_phys_continuous(double row, double col) const {
    return {origin_.x + (col + 0.5) * pitch_x(), origin_.y + (rows_ - row - 0.5) * pitch_y()};
  }

  PixelCoord phys_to_pixel_continuous(PhysCoord p) const {
    return {rows_ - 0.5 - (p.y - origin_.y) / pitch_y(), (p.x - origin_.x) / pitch_x() - 0.5};
  }

  /// Nearest pixel; may lie outside [0,rows)x[0,cols) for points off the domain.
  PixelIndex phys_to_pixel(PhysCoord p) const {
    PixelCoord q = phys_to_pixel_continuous(p);
    return {static_cast<int>(std::lround(q.row)), static_cast<int>(std::lround(q.col))};
  }

  PhysRect domain() const {
    return {origin_, {origin_.x + width_, origin_.y + height_}};
  }

  bool same_geometry(const CoordinateSystem& o, double tol = 1e-9) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && std::abs(width_ - o.width_) <= tol &&
           std::abs(height_ - o.height_) <= tol && std::abs(origin_.x - o.origin_.x) <= tol &&
           std::abs(origin_.y - o.origin_.y) <= tol;
  }

 private:
  int rows_ = 2, cols_ = 2;
  double width_ = 1.0, height_ = 1.0;
  PhysCoord origin_;
};

/// Image array plus the physical geometry it represents. Immutable after
/// construction; operations return new values.
class PhysicalImage {
 public:
  PhysicalImage() = default;
  PhysicalImage(Tensor data, double width, double height, PhysCoord origin = {},
                std::optional<double> timestamp = {},
                std::optional<Colorspace> colorspace = {});

  const Tensor& data() const { return data_; }
  const CoordinateSystem& coords() const { return coords_; }
  Colorspace colorspace() const { return colorspace_; }
  std::optional<double> timestamp() const { return timestamp_; }

  int rows() const { return data_.rows(); }
  int cols() const { return data_.cols(); }
  int channels() const { return data_.channels(); }
  double width() const { return coords_.width(); }
  double height() const { return coords_.height(); }
  PhysCoord origin() const { return coords_.origin(); }

  double operator()(int r, int c, int ch = 0) const { return data_(r, c, ch); }

  /// Same geometry/metadata, different pixel payload (shape must match).
  PhysicalImage with_data(Tensor data) const;
  PhysicalImage with_colorspace(Colorspace cs) const;
  PhysicalImage with_timestamp(std::optional<double> t) const;

  /// Physical-coordinate bilinear sample of channel `ch`.
  double sample_phys(PhysCoord p, int ch = 0, Border border = Border::Clamp,
                     double fill = 0.0) const {
    PixelCoord q = coords_.phys_to_pixel_continuous(p);
    return bilinear_sample(data_, q.row, q.col, ch, border, fill);
  }

 private:
  Tensor data_;
  CoordinateSystem coords_;
  Colorspace colorspace_ = Colorspace::GRAY;
  std::optional<double> timestamp_;
};

/// Validating constructor wrapper mirroring image initialization from an
/// array plus physical dimensions.
PhysicalImage new_image(Tensor data, double width, double height, PhysCoord origin = {},
                        std::optional<double> timestamp = {},
                        std::optional<Colorspace> colorspace = {});

/// Copy of the pixel block rows [r0,r1], cols [c0,c1] (inclusive) with
/// geometry covering exactly that block's footprint.
PhysicalImage crop_pixels(const PhysicalImage& image, int r0, int r1, int c0, int c1);

/// Subimage of the pixels whose centers lie in the ROI, clipped to the
/// image domain. Errors when no pixel center falls inside.
PhysicalImage extract_roi(const PhysicalImage& image, PhysCoord lower_left,
                          PhysCoord upper_right);

/// Pointwise colorspace conversion (RGB -> GRAY/HSV/NEGKEY, GRAY -> GRAY).
PhysicalImage to_colorspace(const PhysicalImage& image, Colorspace target);

/// Copy with 1-px grid lines at physical multiples of (dx, dy) from the origin.
PhysicalImage add_grid(const PhysicalImage& image, double dx, double dy);

}  // namespace poreimg
