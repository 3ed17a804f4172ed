#include "poreimg/align/matcher.hpp"

#include <opencv2/calib3d.hpp>
#include <opencv2/core.hpp>
#include <opencv2/features2d.hpp>

#include <cmath>

namespace poreimg::align {

namespace {

Tensor to_single_channel(const PhysicalImage& img) {
  switch (img.colorspace()) {
    case Colorspace::RGB: return to_colorspace(img, Colorspace::GRAY).data();
    case Colorspace::HSV: return img.data().channel(2);
    default: return img.data();
  }
}

struct Stats {
  double mean = 0.0, var = 0.0;
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
  Stats st;
  st.mean = s / n;
  st.var = s2 / n - st.mean * st.mean;
  return st;
}

double ncc_at(const Tensor& a, int ar, int ac, const Tensor& b, int br, int bc, int h, int w,
              const Stats& sa, const Stats& sb) {
  if (sa.var <= 1e-15 || sb.var <= 1e-15) return 0.0;
  double cross = 0.0;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) cross += a(ar + r, ac + c) * b(br + r, bc + c);
  double n = static_cast<double>(h) * w;
  return (cross / n - sa.mean * sb.mean) / std::sqrt(sa.var * sb.var);
}

double parabolic_offset(double fm, double f0, double fp) {
  double denom = fm - 2.0 * f0 + fp;
  if (denom >= -1e-12) return 0.0;
  return std::clamp(0.5 * (fm - fp) / denom, -0.5, 0.5);
}

// NCC search of the template ref[(tr0,tc0) h x w] inside sec around offsets
// (d_row, d_col) in [-S, S]^2 relative to the template position.
struct NccPeak {
  double d_col = 0, d_row = 0, score = -2.0;
  bool valid = false;
};

NccPeak ncc_search(const Tensor& ref, const Tensor& sec, int tr0, int tc0, int h, int w, int S) {
  Stats st = block_stats(ref, tr0, tc0, h, w);
  NccPeak out;
  if (st.var <= 1e-12) return out;  // featureless template

  std::vector<double> score((2 * S + 1) * (2 * S + 1), -2.0);
  auto at = [&](int sy, int sx) -> double& { return score[(sy + S) * (2 * S + 1) + (sx + S)]; };
  int best_sx = 0, best_sy = 0;
  double best = -2.0;
  for (int sy = -S; sy <= S; ++sy) {
    int r0 = tr0 + sy;
    if (r0 < 0 || r0 + h > sec.rows()) continue;
    for (int sx = -S; sx <= S; ++sx) {
      int c0 = tc0 + sx;
      if (c0 < 0 || c0 + w > sec.cols()) continue;
      Stats ss = block_stats(sec, r0, c0, h, w);
      double v = ncc_at(ref, tr0, tc0, sec, r0, c0, h, w, st, ss);
      at(sy, sx) = v;
      if (v > best) {
        best = v;
        best_sx = sx;
        best_sy = sy;
      }
    }
  }
  if (best <= -2.0) return out;

  out.valid = true;
  out.score = best;
  out.d_col = best_sx;
  out.d_row = best_sy;
  if (std::abs(best_sx) < S && at(best_sy, best_sx - 1) > -2.0 && at(best_sy, best_sx + 1) > -2.0)
    out.d_col += parabolic_offset(at(best_sy, best_sx - 1), best, at(best_sy, best_sx + 1));
  if (std::abs(best_sy) < S && at(best_sy - 1, best_sx) > -2.0 && at(best_sy + 1, best_sx) > -2.0)
    out.d_row += parabolic_offset(at(best_sy - 1, best_sx), best, at(best_sy + 1, best_sx));
  return out;
}

PatchMatch match_ncc(const Tensor& ref, const Tensor& sec, const MatchConfig& cfg) {
  const int rows = ref.rows(), cols = ref.cols();
  int S = cfg.max_shift_px > 0
              ? cfg.max_shift_px
              : std::clamp((std::min(rows, cols) - cfg.min_template_px) / 2, 4,
                           cfg.max_shift_cap_px);
  S = std::min(S, (std::min(rows, cols) - 8) / 2);

  int h = rows - 2 * S, w = cols - 2 * S;
  PatchMatch m;
  NccPeak peak = ncc_search(ref, sec, S, S, h, w, S);
  if (!peak.valid) {
    m.reject_reason = "featureless patch";
    return m;
  }
  m.d_col = peak.d_col;
  m.d_row = peak.d_row;
  m.score = peak.score;
  if (peak.score < cfg.ncc_threshold) {
    m.reject_reason = "match strength below threshold";
    return m;
  }

  // Translation-dominance check: the four quadrants must individually agree
  // with the global translation, otherwise the local map is not a pure
  // translation. Quadrant deviations extrapolate 2x to the patch corners.
  int di = static_cast<int>(std::lround(peak.d_row));
  int dj = static_cast<int>(std::lround(peak.d_col));
  int s2 = static_cast<int>(std::ceil(cfg.dominance_tol_px)) + 2;
  int qh = rows / 2, qw = cols / 2;
  int margin = s2 + 1;
  double worst = 0.0;
  int checked = 0;
  for (int qi = 0; qi < 2; ++qi) {
    for (int qj = 0; qj < 2; ++qj) {
      int r0 = qi * (rows - qh) + margin;
      int c0 = qj * (cols - qw) + margin;
      int hh = qh - 2 * margin, ww = qw - 2 * margin;
      if (hh < 8 || ww < 8) continue;
      // Search the secondary around the global translation.
      int tr0 = r0, tc0 = c0;
      if (tr0 + di - s2 < 0 || tr0 + di + s2 + hh > rows || tc0 + dj - s2 < 0 ||
          tc0 + dj + s2 + ww > cols)
        continue;
      Stats st = block_stats(ref, tr0, tc0, hh, ww);
      if (st.var <= 1e-12) continue;  // flat quadrant cannot disprove translation
      double qbest = -2.0;
      int qsx = 0, qsy = 0;
      for (int sy = -s2; sy <= s2; ++sy)
        for (int sx = -s2; sx <= s2; ++sx) {
          Stats ss = block_stats(sec, tr0 + di + sy, tc0 + dj + sx, hh, ww);
          double v = ncc_at(ref, tr0, tc0, sec, tr0 + di + sy, tc0 + dj + sx, hh, ww, st, ss);
          if (v > qbest) {
            qbest = v;
            qsx = sx;
            qsy = sy;
          }
        }
      if (qbest < 0.5 * cfg.ncc_threshold) continue;
      double dev = std::hypot(dj + qsx - m.d_col, di + qsy - m.d_row);
      worst = std::max(worst, 2.0 * dev);
      ++checked;
    }
  }
  if (checked > 0 && worst > cfg.dominance_tol_px) {
    m.reject_reason = "local map deviates from a pure translation";
    return m;
  }
  m.accepted = true;
  return m;
}

cv::Mat to_mat8(const Tensor& t) {
  cv::Mat m(t.rows(), t.cols(), CV_8UC1);
  for (int r = 0; r < t.rows(); ++r)
    for (int c = 0; c < t.cols(); ++c)
      m.ptr<uchar>(r)[c] = cv::saturate_cast<uchar>(std::lround(t(r, c) * 255.0));
  return m;
}

// Sparse-feature route: ORB keypoints, Hamming matching, RANSAC perspective
// fit; accepted when the fitted map is effectively a translation.
PatchMatch match_features(const Tensor& ref, const Tensor& sec, const MatchConfig& cfg) {
  PatchMatch m;
  cv::Mat a = to_mat8(ref), b = to_mat8(sec);
  auto orb = cv::ORB::create(500);
  std::vector<cv::KeyPoint> ka, kb;
  cv::Mat da, db;
  orb->detectAndCompute(a, cv::noArray(), ka, da);
  orb->detectAndCompute(b, cv::noArray(), kb, db);
  if (da.empty() || db.empty() || ka.size() < 8 || kb.size() < 8) {
    m.reject_reason = "too few features";
    return m;
  }
  cv::BFMatcher matcher(cv::NORM_HAMMING, true);
  std::vector<cv::DMatch> matches;
  matcher.match(da, db, matches);
  if (matches.size() < 8) {
    m.reject_reason = "too few feature matches";
    return m;
  }
  std::vector<cv::Point2f> pa, pb;
  for (const auto& mm : matches) {
    pa.push_back(ka[mm.queryIdx].pt);
    pb.push_back(kb[mm.trainIdx].pt);
  }
  std::vector<uchar> inliers;
  cv::Mat H = cv::findHomography(pa, pb, cv::RANSAC, 2.0, inliers);
  if (H.empty()) {
    m.reject_reason = "no consistent perspective fit";
    return m;
  }
  int inl = 0;
  for (uchar v : inliers) inl += v != 0;
  m.score = static_cast<double>(inl) / static_cast<double>(matches.size());
  if (inl < 8) {
    m.reject_reason = "too few inliers";
    return m;
  }

  auto map_pt = [&](double x, double y) {
    double w = H.at<double>(2, 0) * x + H.at<double>(2, 1) * y + H.at<double>(2, 2);
    return cv::Point2d((H.at<double>(0, 0) * x + H.at<double>(0, 1) * y + H.at<double>(0, 2)) / w,
                       (H.at<double>(1, 0) * x + H.at<double>(1, 1) * y + H.at<double>(1, 2)) / w);
  };
  double cx = 0.5 * (ref.cols() - 1), cy = 0.5 * (ref.rows() - 1);
  cv::Point2d center = map_pt(cx, cy);
  m.d_col = center.x - cx;
  m.d_row = center.y - cy;

  double worst = 0.0;
  for (double x : {0.0, static_cast<double>(ref.cols() - 1)})
    for (double y : {0.0, static_cast<double>(ref.rows() - 1)}) {
      cv::Point2d p = map_pt(x, y);
      worst = std::max(worst, std::hypot(p.x - (x + m.d_col), p.y - (y + m.d_row)));
    }
  if (worst > cfg.dominance_tol_px) {
    m.reject_reason = "perspective fit is not a pure translation";
    return m;
  }
  m.accepted = true;
  return m;
}

}  // namespace

PatchMatch estimate_patch_translation(const PhysicalImage& ref_patch,
                                      const PhysicalImage& sec_patch,
                                      const MatchConfig& config) {
  require(ref_patch.rows() == sec_patch.rows() && ref_patch.cols() == sec_patch.cols(),
          "estimate_patch_translation: patches must have the same shape");
  require(ref_patch.rows() >= 32 && ref_patch.cols() >= 32,
          "estimate_patch_translation: patches must be at least 32x32 px");

  Tensor ref = to_single_channel(ref_patch);
  Tensor sec = to_single_channel(sec_patch);
  return config.mode == MatchMode::Ncc ? match_ncc(ref, sec, config)
                                       : match_features(ref, sec, config);
}

}  // namespace poreimg::align
