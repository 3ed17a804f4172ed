#include "poreimg/patches.hpp"

#include <cmath>

namespace poreimg {

namespace {

std::vector<int> tile_bounds(int total, int n) {
  std::vector<int> b(n + 1);
  for (int i = 0; i <= n; ++i)
    b[i] = static_cast<int>(std::lround(static_cast<double>(i) * total / n));
  return b;
}

}  // namespace

PatchSet::PatchSet(const PhysicalImage& parent, int num_v, int num_h, double overlap)
    : num_v_(num_v),
      num_h_(num_h),
      parent_coords_(parent.coords()),
      parent_colorspace_(parent.colorspace()),
      parent_timestamp_(parent.timestamp()) {
  require(num_v >= 1 && num_h >= 1, "make_patches: patch counts must be >= 1");
  require(overlap >= 0.0 && overlap < 0.5, "make_patches: overlap must lie in [0, 0.5)");

  row_bounds_ = tile_bounds(parent.rows(), num_v);
  col_bounds_ = tile_bounds(parent.cols(), num_h);
  ext_r_ = static_cast<int>(std::lround(overlap * parent.rows() / num_v));
  ext_c_ = static_cast<int>(std::lround(overlap * parent.cols() / num_h));

  patches_.reserve(static_cast<size_t>(num_v) * num_h);
  ranges_.reserve(static_cast<size_t>(num_v) * num_h);
  for (int i = 0; i < num_v; ++i) {
    for (int j = 0; j < num_h; ++j) {
      Range rg;
      rg.r0 = row_bounds_[i] - (i > 0 ? ext_r_ : 0);
      rg.r1 = row_bounds_[i + 1] - 1 + (i < num_v - 1 ? ext_r_ : 0);
      rg.c0 = col_bounds_[j] - (j > 0 ? ext_c_ : 0);
      rg.c1 = col_bounds_[j + 1] - 1 + (j < num_h - 1 ? ext_c_ : 0);
      require(rg.r1 - rg.r0 >= 1 && rg.c1 - rg.c0 >= 1,
              "make_patches: patches would be smaller than 2x2 pixels");
      ranges_.push_back(rg);
      patches_.push_back(crop_pixels(parent, rg.r0, rg.r1, rg.c0, rg.c1));
    }
  }
}

void PatchSet::set_patch(int i, int j, PhysicalImage image) {
  require(i >= 0 && i < num_v_ && j >= 0 && j < num_h_, "set_patch: index out of range");
  PhysicalImage& dst = patches_[index(i, j)];
  require(image.rows() == dst.rows() && image.cols() == dst.cols() &&
              image.channels() == dst.channels(),
          "set_patch: replacement shape differs from the patch shape");
  dst = std::move(image);
}

// Per-axis ramp: 1 on the base tile, linear 0->1 across the 2*ext band that
// this patch shares with its lower neighbor (and 1->0 with its upper one).
double PatchSet::axis_weight(int band_lo, int ext, bool has_lo, int band_hi, bool has_hi,
                             int p) const {
  double t = p + 0.5;  // pixel center in continuous axis units
  if (ext == 0) return 1.0;
  if (has_lo) {
    double a = band_lo - ext, b = band_lo + ext;
    if (t < a) return 0.0;
    if (t < b) return (t - a) / (b - a);
  }
  if (has_hi) {
    double a = band_hi - ext, b = band_hi + ext;
    if (t > b) return 0.0;
    if (t > a) return 1.0 - (t - a) / (b - a);
  }
  return 1.0;
}

double PatchSet::weight(int i, int j, int r, int c) const {
  double wr = axis_weight(row_bounds_[i], ext_r_, i > 0, row_bounds_[i + 1], i < num_v_ - 1, r);
  double wc = axis_weight(col_bounds_[j], ext_c_, j > 0, col_bounds_[j + 1], j < num_h_ - 1, c);
  return wr * wc;
}

PhysicalImage PatchSet::assemble() const {
  int rows = parent_coords_.rows(), cols = parent_coords_.cols();
  int channels = patches_[0].channels();
  Tensor out(rows, cols, channels, 0.0);
  for (int i = 0; i < num_v_; ++i) {
    for (int j = 0; j < num_h_; ++j) {
      const Range& rg = ranges_[index(i, j)];
      const Tensor& p = patches_[index(i, j)].data();
      require(p.rows() == rg.r1 - rg.r0 + 1 && p.cols() == rg.c1 - rg.c0 + 1,
              "assemble: patch shape was mutated inconsistently");
      for (int r = rg.r0; r <= rg.r1; ++r) {
        for (int c = rg.c0; c <= rg.c1; ++c) {
          double w = weight(i, j, r, c);
          if (w == 0.0) continue;
          for (int ch = 0; ch < channels; ++ch)
            out(r, c, ch) += w * p(r - rg.r0, c - rg.c0, ch);
        }
      }
    }
  }
  out.clamp(0.0, 1.0);  // guards against FP dust outside the valid range
  if (parent_colorspace_ == Colorspace::BINARY) {
    // Blending weights sum to 1 only up to rounding; snap back to {0,1}.
    for (double& v : out.data()) {
      if (std::abs(v) < 1e-9) v = 0.0;
      if (std::abs(v - 1.0) < 1e-9) v = 1.0;
    }
  }
  return PhysicalImage(std::move(out), parent_coords_.width(), parent_coords_.height(),
                       parent_coords_.origin(), parent_timestamp_, parent_colorspace_);
}

PatchSet make_patches(const PhysicalImage& image, int num_v, int num_h, double overlap) {
  return PatchSet(image, num_v, num_h, overlap);
}

}  // namespace poreimg
