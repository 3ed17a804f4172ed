#include "poreimg/align/field.hpp"

#include <cmath>

namespace poreimg::align {

namespace {

struct GridFrame {
  double x0, y_top, dx, dy;  // node (i, j) sits at (x0 + j dx, y_top - i dy)
};

GridFrame frame_for(const CoordinateSystem& dom, int rows, int cols) {
  return {dom.origin().x, dom.origin().y + dom.height(), dom.width() / (cols - 1),
          dom.height() / (rows - 1)};
}

// Globally continuous piecewise-affine interpolation of node values: each
// grid cell is split along its (0,0)-(1,1) diagonal in index space.
double eval_grid(const DisplacementField::NodeGrid& g, const GridFrame& f,
                 const std::vector<double>& v, PhysCoord p) {
  double a = (p.x - f.x0) / f.dx;
  double b = (f.y_top - p.y) / f.dy;
  int j = std::clamp(static_cast<int>(std::floor(a)), 0, g.cols - 2);
  int i = std::clamp(static_cast<int>(std::floor(b)), 0, g.rows - 2);
  double fa = a - j, fb = b - i;
  double v00 = v[i * g.cols + j], v01 = v[i * g.cols + j + 1];
  double v10 = v[(i + 1) * g.cols + j], v11 = v[(i + 1) * g.cols + j + 1];
  if (fa >= fb) return v00 + fa * (v01 - v00) + fb * (v11 - v01);
  return v00 + fb * (v10 - v00) + fa * (v11 - v10);
}

}  // namespace

DisplacementField DisplacementField::identity(const CoordinateSystem& domain) {
  return build_field({{domain.pixel_to_phys(0, 0), 0, 0, true},
                      {domain.pixel_to_phys(0, domain.cols() - 1), 0, 0, true},
                      {domain.pixel_to_phys(domain.rows() - 1, 0), 0, 0, true},
                      {domain.pixel_to_phys(domain.rows() - 1, domain.cols() - 1), 0, 0, true}},
                     {}, domain, 2, 2);
}

PhysCoord DisplacementField::displacement_smooth(PhysCoord p) const {
  return {(*tps_x_)(p), (*tps_y_)(p)};
}

PhysCoord DisplacementField::displacement(PhysCoord p) const {
  GridFrame f = frame_for(domain_, forward_.rows, forward_.cols);
  return {eval_grid(forward_, f, forward_.ux, p), eval_grid(forward_, f, forward_.uy, p)};
}

PhysCoord DisplacementField::apply(PhysCoord p) const {
  PhysCoord u = displacement(p);
  return {p.x + u.x, p.y + u.y};
}

PhysCoord DisplacementField::apply_inverse(PhysCoord p) const {
  GridFrame f = frame_for(domain_, inverse_.rows, inverse_.cols);
  return {p.x + eval_grid(inverse_, f, inverse_.ux, p),
          p.y + eval_grid(inverse_, f, inverse_.uy, p)};
}

DisplacementField build_field(const std::vector<FieldSample>& samples,
                              const std::vector<BoundaryCondition>& boundary_conditions,
                              const CoordinateSystem& domain, int grid_rows, int grid_cols) {
  require(grid_rows >= 2 && grid_cols >= 2, "build_field: node grid must be at least 2x2");

  std::vector<PhysCoord> px, py;
  std::vector<double> vx, vy;
  int accepted = 0;
  for (const FieldSample& s : samples) {
    if (!s.accepted) continue;
    ++accepted;
    px.push_back(s.center);
    vx.push_back(s.du_x);
    py.push_back(s.center);
    vy.push_back(s.du_y);
  }
  require(accepted >= 3, "build_field: fewer than 3 accepted samples");
  for (const BoundaryCondition& bc : boundary_conditions) {
    require(bc.component == 0 || bc.component == 1, "build_field: bad BC component");
    (bc.component == 0 ? px : py).push_back(bc.point);
    (bc.component == 0 ? vx : vy).push_back(bc.value);
  }

  DisplacementField field;
  field.domain_ = domain;
  field.samples_ = samples;
  field.bcs_ = boundary_conditions;
  field.tps_x_ = std::make_shared<ThinPlateSpline>(px, vx);
  field.tps_y_ = std::make_shared<ThinPlateSpline>(py, vy);

  // The interpolant must reproduce the accepted samples exactly.
  for (const FieldSample& s : samples) {
    if (!s.accepted) continue;
    PhysCoord u = field.displacement_smooth(s.center);
    require(std::abs(u.x - s.du_x) <= 1e-9 && std::abs(u.y - s.du_y) <= 1e-9,
            "build_field: RBF interpolation residual exceeds 1e-9 m");
  }

  auto& fwd = field.forward_;
  fwd.rows = grid_rows;
  fwd.cols = grid_cols;
  fwd.ux.resize(static_cast<size_t>(grid_rows) * grid_cols);
  fwd.uy.resize(fwd.ux.size());
  GridFrame f = frame_for(domain, grid_rows, grid_cols);
  std::vector<PhysCoord> displaced;
  std::vector<double> inv_ux, inv_uy;
  displaced.reserve(fwd.ux.size());
  for (int i = 0; i < grid_rows; ++i) {
    for (int j = 0; j < grid_cols; ++j) {
      PhysCoord node{f.x0 + j * f.dx, f.y_top - i * f.dy};
      PhysCoord u = field.displacement_smooth(node);
      fwd.ux[i * grid_cols + j] = u.x;
      fwd.uy[i * grid_cols + j] = u.y;
      displaced.push_back({node.x + u.x, node.y + u.y});
      inv_ux.push_back(-u.x);
      inv_uy.push_back(-u.y);
    }
  }

  // psi^{-1}: scatter-interpolate the displaced nodes back and sample that
  // interpolant on the regular grid. Near-duplicate displaced nodes are
  // dropped; very large grids are subsampled to keep the solve dense-friendly.
  std::vector<PhysCoord> ipts;
  std::vector<double> ivx, ivy;
  size_t stride = 1 + displaced.size() / 900;
  for (size_t k = 0; k < displaced.size(); k += stride) {
    bool dup = false;
    for (const PhysCoord& q : ipts) {
      double dx = q.x - displaced[k].x, dy = q.y - displaced[k].y;
      if (dx * dx + dy * dy < 1e-20) {
        dup = true;
        break;
      }
    }
    if (!dup) {
      ipts.push_back(displaced[k]);
      ivx.push_back(inv_ux[k]);
      ivy.push_back(inv_uy[k]);
    }
  }
  ThinPlateSpline inv_x(ipts, ivx), inv_y(ipts, ivy);

  auto& inv = field.inverse_;
  inv.rows = grid_rows;
  inv.cols = grid_cols;
  inv.ux.resize(fwd.ux.size());
  inv.uy.resize(fwd.ux.size());
  for (int i = 0; i < grid_rows; ++i)
    for (int j = 0; j < grid_cols; ++j) {
      PhysCoord node{f.x0 + j * f.dx, f.y_top - i * f.dy};
      inv.ux[i * grid_cols + j] = inv_x(node);
      inv.uy[i * grid_cols + j] = inv_y(node);
    }
  return field;
}

PhysicalImage warp(const PhysicalImage& image, const DisplacementField& field,
                   WarpDirection direction, double fill) {
  const CoordinateSystem& cs = image.coords();
  const Tensor& src = image.data();
  Tensor out(src.rows(), src.cols(), src.channels());
  for (int r = 0; r < src.rows(); ++r) {
    for (int c = 0; c < src.cols(); ++c) {
      PhysCoord p = cs.pixel_to_phys(r, c);
      PhysCoord q = direction == WarpDirection::Forward ? field.apply(p) : field.apply_inverse(p);
      PixelCoord pc = cs.phys_to_pixel_continuous(q);
      for (int ch = 0; ch < src.channels(); ++ch) {
        double v = bilinear_sample(src, pc.row, pc.col, ch, Border::Fill, fill);
        out(r, c, ch) = image.colorspace() == Colorspace::BINARY ? (v >= 0.5 ? 1.0 : 0.0) : v;
      }
    }
  }
  return image.with_data(std::move(out));
}

std::vector<GlyphRow> glyph_export(const DisplacementField& field, int stride) {
  require(stride >= 1, "glyph_export: stride must be positive");
  const CoordinateSystem& cs = field.domain();
  std::vector<GlyphRow> rows;
  for (int r = 0; r < cs.rows(); r += stride) {
    for (int c = 0; c < cs.cols(); c += stride) {
      PhysCoord p = cs.pixel_to_phys(r, c);
      PhysCoord u = field.displacement(p);
      rows.push_back({p.x, p.y, u.x, u.y});
    }
  }
  return rows;
}

}  // namespace poreimg::align
