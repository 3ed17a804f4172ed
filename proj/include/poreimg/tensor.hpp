#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "poreimg/error.hpp"

namespace poreimg {

/// Dense row-major (rows, cols, channels) array of doubles.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int rows, int cols, int channels, double fill = 0.0)
      : rows_(rows), cols_(cols), channels_(channels) {
    require(rows >= 1 && cols >= 1 && channels >= 1, "Tensor: non-positive shape");
    data_.assign(static_cast<size_t>(rows) * cols * channels, fill);
  }
  Tensor(int rows, int cols, int channels, std::vector<double> data)
      : rows_(rows), cols_(cols), channels_(channels), data_(std::move(data)) {
    require(rows >= 1 && cols >= 1 && channels >= 1, "Tensor: non-positive shape");
    require(data_.size() == static_cast<size_t>(rows) * cols * channels,
            "Tensor: data size does not match shape");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int channels() const { return channels_; }
  size_t size() const { return data_.size(); }
  size_t plane_size() const { return static_cast<size_t>(rows_) * cols_; }

  double& operator()(int r, int c, int ch = 0) {
    return data_[(static_cast<size_t>(r) * cols_ + c) * channels_ + ch];
  }
  double operator()(int r, int c, int ch = 0) const {
    return data_[(static_cast<size_t>(r) * cols_ + c) * channels_ + ch];
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_shape(const Tensor& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && channels_ == o.channels_;
  }

  double min_value() const { return *std::min_element(data_.begin(), data_.end()); }
  double max_value() const { return *std::max_element(data_.begin(), data_.end()); }

  double mean() const {
    double s = 0.0;
    for (double v : data_) s += v;
    return s / static_cast<double>(data_.size());
  }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  bool within(double lo, double hi) const {
    for (double v : data_)
      if (!(v >= lo && v <= hi)) return false;
    return true;
  }

  void clamp(double lo, double hi) {
    for (double& v : data_) v = std::clamp(v, lo, hi);
  }

  /// Single-channel view copy of channel `ch`.
  Tensor channel(int ch) const {
    require(ch >= 0 && ch < channels_, "Tensor::channel: index out of range");
    Tensor out(rows_, cols_, 1);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) out(r, c) = (*this)(r, c, ch);
    return out;
  }

 private:
  int rows_ = 0, cols_ = 0, channels_ = 0;
  std::vector<double> data_;
};

enum class Border { Clamp, Fill };

/// Bilinear sample of channel `ch` at continuous pixel coordinates
/// (row, col); integer coordinates address pixel centers.
inline double bilinear_sample(const Tensor& t, double row, double col, int ch,
                              Border border = Border::Clamp, double fill = 0.0) {
  if (border == Border::Fill) {
    if (row < -0.5 || row > t.rows() - 0.5 || col < -0.5 || col > t.cols() - 0.5) return fill;
  }
  double rc = std::clamp(row, 0.0, static_cast<double>(t.rows() - 1));
  double cc = std::clamp(col, 0.0, static_cast<double>(t.cols() - 1));
  int r0 = static_cast<int>(std::floor(rc));
  int c0 = static_cast<int>(std::floor(cc));
  int r1 = std::min(r0 + 1, t.rows() - 1);
  int c1 = std::min(c0 + 1, t.cols() - 1);
  double fr = rc - r0;
  double fc = cc - c0;
  double v00 = t(r0, c0, ch), v01 = t(r0, c1, ch);
  double v10 = t(r1, c0, ch), v11 = t(r1, c1, ch);
  return (1.0 - fr) * ((1.0 - fc) * v00 + fc * v01) + fr * ((1.0 - fc) * v10 + fc * v11);
}

}  // namespace poreimg
