#include "poreimg/segment/watershed.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

namespace poreimg::segment {

LabelMap LabelMap::whole_domain(const CoordinateSystem& cs) {
  LabelMap m;
  m.rows = cs.rows();
  m.cols = cs.cols();
  m.coords = cs;
  m.label_count = 1;
  m.labels.assign(static_cast<size_t>(m.rows) * m.cols, 0);
  return m;
}

Tensor gradient_modulus(const Tensor& u) {
  require(u.channels() == 1, "gradient_modulus: single-channel input required");
  const int rows = u.rows(), cols = u.cols();
  Tensor g(rows, cols, 1);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      double gx, gy;
      if (c == 0)
        gx = u(r, 1) - u(r, 0);
      else if (c == cols - 1)
        gx = u(r, cols - 1) - u(r, cols - 2);
      else
        gx = 0.5 * (u(r, c + 1) - u(r, c - 1));
      if (r == 0)
        gy = u(1, c) - u(0, c);
      else if (r == rows - 1)
        gy = u(rows - 1, c) - u(rows - 2, c);
      else
        gy = 0.5 * (u(r + 1, c) - u(r - 1, c));
      g(r, c) = std::hypot(gx, gy);
    }
  }
  return g;
}

namespace {

constexpr int kNbr[4][2] = {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};

// 4-connected components of the marker set, labeled in row-major discovery
// order so the result is deterministic.
int connected_components(const std::vector<char>& mask, int rows, int cols,
                         std::vector<int>& labels) {
  labels.assign(mask.size(), -1);
  int next = 0;
  std::vector<std::pair<int, int>> stack;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      size_t idx = static_cast<size_t>(r) * cols + c;
      if (!mask[idx] || labels[idx] >= 0) continue;
      labels[idx] = next;
      stack.push_back({r, c});
      while (!stack.empty()) {
        auto [cr, cc] = stack.back();
        stack.pop_back();
        for (const auto& d : kNbr) {
          int nr = cr + d[0], nc = cc + d[1];
          if (nr < 0 || nr >= rows || nc < 0 || nc >= cols) continue;
          size_t nidx = static_cast<size_t>(nr) * cols + nc;
          if (mask[nidx] && labels[nidx] < 0) {
            labels[nidx] = next;
            stack.push_back({nr, nc});
          }
        }
      }
      ++next;
    }
  }
  return next;
}

}  // namespace

LabelMap watershed_labels(const PhysicalImage& image, double smoothing_mu_m,
                          double marker_quantile, const regularize::RegularizationConfig& reg) {
  require(image.channels() == 1, "watershed_labels: single-channel input required");
  require(marker_quantile > 0.0 && marker_quantile < 1.0,
          "watershed_labels: marker quantile must lie in (0,1)");

  PhysicalImage smooth = image;
  if (smoothing_mu_m > 0.0) {
    regularize::RegularizationConfig cfg = reg;
    cfg.mu = regularize::Param(smoothing_mu_m);
    cfg.omega = regularize::Param(1.0);
    smooth = regularize::tv_denoise(image, cfg);
  }

  Tensor grad = gradient_modulus(smooth.data());
  const int rows = grad.rows(), cols = grad.cols();

  std::vector<double> sorted(grad.data());
  std::sort(sorted.begin(), sorted.end());
  double gq = sorted[static_cast<size_t>(marker_quantile * (sorted.size() - 1))];

  std::vector<char> markers(grad.size());
  for (size_t i = 0; i < grad.size(); ++i) markers[i] = grad.data()[i] <= gq;

  LabelMap out;
  out.rows = rows;
  out.cols = cols;
  out.coords = image.coords();
  out.label_count = connected_components(markers, rows, cols, out.labels);
  require(out.label_count >= 1, "watershed_labels: no markers found (quantile too strict)");

  // Priority flood on the gradient landscape; ties resolve by insertion
  // order, which is fixed by the scan order.
  using Entry = std::tuple<double, long, int, int, int>;  // grad, seq, r, c, label
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  long seq = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (out.at(r, c) < 0) continue;
      for (const auto& d : kNbr) {
        int nr = r + d[0], nc = c + d[1];
        if (nr < 0 || nr >= rows || nc < 0 || nc >= cols || out.at(nr, nc) >= 0) continue;
        heap.push({grad(nr, nc), seq++, nr, nc, out.at(r, c)});
      }
    }
  while (!heap.empty()) {
    auto [g, s, r, c, label] = heap.top();
    heap.pop();
    if (out.at(r, c) >= 0) continue;
    out.at(r, c) = label;
    for (const auto& d : kNbr) {
      int nr = r + d[0], nc = c + d[1];
      if (nr < 0 || nr >= rows || nc < 0 || nc >= cols || out.at(nr, nc) >= 0) continue;
      heap.push({grad(nr, nc), seq++, nr, nc, label});
    }
  }
  return out;
}

}  // namespace poreimg::segment
