#include "poreimg/align/rbf.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace poreimg::align {

namespace {

double tps_kernel(double r2) {
  // U(r) = r^2 log r, with U(0) = 0; using r^2 avoids a square root.
  return r2 > 0.0 ? 0.5 * r2 * std::log(r2) : 0.0;
}

}  // namespace

ThinPlateSpline::ThinPlateSpline(std::vector<PhysCoord> points, std::vector<double> values)
    : points_(std::move(points)) {
  const size_t n = points_.size();
  require(n >= 3, "ThinPlateSpline: at least 3 points required");
  require(values.size() == n, "ThinPlateSpline: points/values size mismatch");

  double xmin = points_[0].x, xmax = xmin, ymin = points_[0].y, ymax = ymin;
  for (const PhysCoord& p : points_) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  x0_ = xmin;
  y0_ = ymin;
  scale_ = std::max({xmax - xmin, ymax - ymin, 1e-12});
  for (PhysCoord& p : points_) {
    p.x = (p.x - x0_) / scale_;
    p.y = (p.y - y0_) / scale_;
  }

  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      double dx = points_[i].x - points_[j].x, dy = points_[i].y - points_[j].y;
      require(dx * dx + dy * dy > 1e-24, "ThinPlateSpline: duplicate sample coordinates");
    }

  // [K P; P^T 0] [w; a] = [v; 0]
  const size_t m = n + 3;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      double dx = points_[i].x - points_[j].x, dy = points_[i].y - points_[j].y;
      A(i, j) = tps_kernel(dx * dx + dy * dy);
    }
    A(i, n) = A(n, i) = 1.0;
    A(i, n + 1) = A(n + 1, i) = points_[i].x;
    A(i, n + 2) = A(n + 2, i) = points_[i].y;
    rhs(i) = values[i];
  }

  Eigen::VectorXd sol = A.partialPivLu().solve(rhs);
  require(sol.allFinite(), "ThinPlateSpline: singular interpolation system");
  weights_.assign(sol.data(), sol.data() + m);
}

double ThinPlateSpline::operator()(PhysCoord p) const {
  double x = (p.x - x0_) / scale_, y = (p.y - y0_) / scale_;
  const size_t n = points_.size();
  double v = weights_[n] + weights_[n + 1] * x + weights_[n + 2] * y;
  for (size_t i = 0; i < n; ++i) {
    double dx = x - points_[i].x, dy = y - points_[i].y;
    v += weights_[i] * tps_kernel(dx * dx + dy * dy);
  }
  return v;
}

}  // namespace poreimg::align
