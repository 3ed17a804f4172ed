#include "poreimg/correct/drift.hpp"

#include <cmath>

namespace poreimg::correct {

namespace {

Tensor to_single_channel(const PhysicalImage& img) {
  switch (img.colorspace()) {
    case Colorspace::RGB: return to_colorspace(img, Colorspace::GRAY).data();
    case Colorspace::HSV: return img.data().channel(2);
    default: return img.data();
  }
}

struct Stats {
  double mean, var;
};

Stats block_stats(const Tensor& t, int r0, int c0, int h, int w) {
  double s = 0.0, s2 = 0.0;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      double v = t(r0 + r, c0 + c);
      s += v;
      s2 += v * v;
    }
  double n = static_cast<double>(h) * w;
  double mean = s / n;
  return {mean, s2 / n - mean * mean};
}

double ncc(const Tensor& a, int ar, int ac, const Tensor& b, int br, int bc, int h, int w,
           const Stats& sa, const Stats& sb) {
  if (sa.var <= 0.0 || sb.var <= 0.0) return 0.0;
  double cross = 0.0;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) cross += a(ar + r, ac + c) * b(br + r, bc + c);
  double n = static_cast<double>(h) * w;
  double cov = cross / n - sa.mean * sb.mean;
  return cov / std::sqrt(sa.var * sb.var);
}

double parabolic_offset(double fm, double f0, double fp) {
  double denom = fm - 2.0 * f0 + fp;
  if (denom >= -1e-12) return 0.0;  // not a proper peak
  return std::clamp(0.5 * (fm - fp) / denom, -0.5, 0.5);
}

}  // namespace

DriftEstimate estimate_drift(const PhysicalImage& image, const PhysicalImage& reference,
                             const PhysRect& roi, int max_shift_px) {
  require(image.coords().same_geometry(reference.coords()),
          "estimate_drift: image and reference geometries differ");

  Tensor img = to_single_channel(extract_roi(image, roi.ll, roi.ur));
  Tensor ref = to_single_channel(extract_roi(reference, roi.ll, roi.ur));

  // Template: the image ROI inset by the search margin.
  int S = max_shift_px;
  int min_template = 8;
  S = std::min(S, (std::min(img.rows(), img.cols()) - min_template) / 2);
  require(S >= 1, "estimate_drift: ROI too small for the requested search range");
  int h = img.rows() - 2 * S, w = img.cols() - 2 * S;

  Stats st = block_stats(img, S, S, h, w);
  require(st.var > 1e-12, "estimate_drift: ROI content has zero variance");

  int best_sx = 0, best_sy = 0;
  double best = -2.0;
  std::vector<std::vector<double>> score(2 * S + 1, std::vector<double>(2 * S + 1, -2.0));
  for (int sy = -S; sy <= S; ++sy) {
    for (int sx = -S; sx <= S; ++sx) {
      Stats sr = block_stats(ref, S - sy, S - sx, h, w);
      double v = ncc(img, S, S, ref, S - sy, S - sx, h, w, st, sr);
      score[sy + S][sx + S] = v;
      if (v > best) {
        best = v;
        best_sx = sx;
        best_sy = sy;
      }
    }
  }

  DriftEstimate out{static_cast<double>(best_sx), static_cast<double>(best_sy), best};
  if (std::abs(best_sx) < S)
    out.dx += parabolic_offset(score[best_sy + S][best_sx + S - 1], best,
                               score[best_sy + S][best_sx + S + 1]);
  if (std::abs(best_sy) < S)
    out.dy += parabolic_offset(score[best_sy + S - 1][best_sx + S], best,
                               score[best_sy + S + 1][best_sx + S]);
  return out;
}

PhysicalImage apply_drift(const PhysicalImage& image, const DriftEstimate& estimate) {
  const Tensor& src = image.data();
  Tensor out(src.rows(), src.cols(), src.channels());
  for (int r = 0; r < src.rows(); ++r)
    for (int c = 0; c < src.cols(); ++c)
      for (int ch = 0; ch < src.channels(); ++ch) {
        double v = bilinear_sample(src, r + estimate.dy, c + estimate.dx, ch, Border::Clamp);
        out(r, c, ch) = image.colorspace() == Colorspace::BINARY ? (v >= 0.5 ? 1.0 : 0.0) : v;
      }
  return image.with_data(std::move(out));
}

}  // namespace poreimg::correct
