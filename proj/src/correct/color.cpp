#include "poreimg/correct/color.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <fstream>

#include "json.hpp"

namespace poreimg::correct {

std::array<double, 3> ColorCorrection::map(const std::array<double, 3>& rgb) const {
  std::array<double, 3> out;
  for (int i = 0; i < 3; ++i) {
    double v = offset_[i];
    for (int j = 0; j < 3; ++j) v += matrix_[i * 3 + j] * rgb[j];
    out[i] = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

std::array<double, 3> measure_swatch(const PhysicalImage& image, const PhysRect& roi) {
  PhysicalImage sub = extract_roi(image, roi.ll, roi.ur);
  std::array<double, 3> mean{0, 0, 0};
  const Tensor& d = sub.data();
  for (int r = 0; r < d.rows(); ++r)
    for (int c = 0; c < d.cols(); ++c)
      for (int ch = 0; ch < 3; ++ch) mean[ch] += d(r, c, ch);
  double n = static_cast<double>(d.rows()) * d.cols();
  for (double& v : mean) v /= n;
  return mean;
}

ColorCorrection fit_color_correction(const PhysicalImage& image, const PhysRect& swatch_roi,
                                     const std::vector<Swatch>& reference_swatches) {
  require(image.colorspace() == Colorspace::RGB, "fit_color_correction: RGB input required");
  const size_t n = reference_swatches.size();
  require(n >= 4, "fit_color_correction: at least 4 swatches required");

  PhysRect dom = image.coords().domain();
  require(swatch_roi.ll.x >= dom.ll.x - 1e-12 && swatch_roi.ll.y >= dom.ll.y - 1e-12 &&
              swatch_roi.ur.x <= dom.ur.x + 1e-12 && swatch_roi.ur.y <= dom.ur.y + 1e-12,
          "fit_color_correction: swatch ROI outside the image");

  Eigen::MatrixXd obs(n, 3), tgt(n, 3);
  for (size_t k = 0; k < n; ++k) {
    const Swatch& s = reference_swatches[k];
    PhysRect abs{{swatch_roi.ll.x + s.roi.ll.x, swatch_roi.ll.y + s.roi.ll.y},
                 {swatch_roi.ll.x + s.roi.ur.x, swatch_roi.ll.y + s.roi.ur.y}};
    auto mean = measure_swatch(image, abs);
    for (int j = 0; j < 3; ++j) {
      obs(k, j) = mean[j];
      tgt(k, j) = s.target[j];
    }
  }

  Eigen::MatrixXd centered = obs.rowwise() - obs.colwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
  require(svd.singularValues()(2) > 1e-10 * std::max(svd.singularValues()(0), 1e-30),
          "fit_color_correction: observed swatch colors are rank deficient");

  // min || [obs 1] B - tgt ||_F with B = [M^T; b^T].
  Eigen::MatrixXd X(n, 4);
  X.leftCols(3) = obs;
  X.col(3).setOnes();
  Eigen::MatrixXd B = X.colPivHouseholderQr().solve(tgt);

  std::array<double, 9> M;
  std::array<double, 3> b;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) M[i * 3 + j] = B(j, i);
    b[i] = B(3, i);
  }
  double residual = std::sqrt((X * B - tgt).squaredNorm() / static_cast<double>(n));
  return ColorCorrection(M, b, residual);
}

PhysicalImage apply_color_correction(const ColorCorrection& correction,
                                     const PhysicalImage& image) {
  require(image.colorspace() == Colorspace::RGB, "apply_color_correction: RGB input required");
  Tensor out = image.data();
  for (int r = 0; r < out.rows(); ++r)
    for (int c = 0; c < out.cols(); ++c) {
      auto mapped = correction.map({out(r, c, 0), out(r, c, 1), out(r, c, 2)});
      for (int ch = 0; ch < 3; ++ch) out(r, c, ch) = mapped[ch];
    }
  return image.with_data(std::move(out));
}

std::vector<std::array<double, 3>> classic_color_checker() {
  // sRGB 8-bit reference values of the 24-patch classic chart.
  static const int v[24][3] = {
      {115, 82, 68},   {194, 150, 130}, {98, 122, 157},  {87, 108, 67},   {133, 128, 177},
      {103, 189, 170}, {214, 126, 44},  {80, 91, 166},   {193, 90, 99},   {94, 60, 108},
      {157, 188, 64},  {224, 163, 46},  {56, 61, 150},   {70, 148, 73},   {175, 54, 60},
      {231, 199, 31},  {187, 86, 149},  {8, 133, 161},   {243, 243, 242}, {200, 200, 200},
      {160, 160, 160}, {122, 122, 121}, {85, 85, 85},    {52, 52, 52}};
  std::vector<std::array<double, 3>> out(24);
  for (int i = 0; i < 24; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = v[i][j] / 255.0;
  return out;
}

std::vector<std::array<double, 3>> load_swatch_targets(const std::filesystem::path& path) {
  std::ifstream f(path);
  require(f.good(), "load_swatch_targets: cannot open " + path.string());
  nlohmann::json j;
  f >> j;
  require(j.is_array(), "load_swatch_targets: expected a JSON array of [r,g,b] triples");
  std::vector<std::array<double, 3>> out;
  for (const auto& e : j) {
    require(e.is_array() && e.size() == 3, "load_swatch_targets: malformed triple");
    out.push_back({e[0].get<double>(), e[1].get<double>(), e[2].get<double>()});
  }
  return out;
}

}  // namespace poreimg::correct
