#include "poreimg/regularize/tv.hpp"

#include <cmath>

namespace poreimg::regularize {

Tensor Param::resolve(const CoordinateSystem& target) const {
  if (!field_) return Tensor(target.rows(), target.cols(), 1, scalar_);
  if (field_->coords().same_geometry(target)) return field_->data();
  Tensor out(target.rows(), target.cols(), 1);
  for (int r = 0; r < target.rows(); ++r)
    for (int c = 0; c < target.cols(); ++c)
      out(r, c) = field_->sample_phys(target.pixel_to_phys(r, c));
  return out;
}

double tv_objective(const Tensor& u, const Tensor& f, const Tensor& omega, const Tensor& mu_x,
                    const Tensor& mu_y) {
  const int rows = u.rows(), cols = u.cols();
  double fid = 0.0, tv = 0.0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      double d = f(r, c) - u(r, c);
      fid += omega(r, c) * d * d;
      if (c + 1 < cols) tv += mu_x(r, c) * std::abs(u(r, c + 1) - u(r, c));
      if (r + 1 < rows) tv += mu_y(r, c) * std::abs(u(r + 1, c) - u(r, c));
    }
  }
  return 0.5 * fid + tv;
}

namespace {

double shrink(double q, double thr) {
  if (q > thr) return q - thr;
  if (q < -thr) return q + thr;
  return 0.0;
}

}  // namespace

PhysicalImage tv_denoise(const PhysicalImage& image, const RegularizationConfig& config,
                         TvDiagnostics* diagnostics) {
  require(image.channels() == 1, "tv_denoise: single-channel input required");
  require(config.bregman_penalty > 0.0, "tv_denoise: bregman_penalty must be positive");
  require(config.max_iter >= 1 && config.gauss_seidel_sweeps >= 1,
          "tv_denoise: iteration counts must be positive");

  const CoordinateSystem& cs = image.coords();
  const int rows = cs.rows(), cols = cs.cols();
  const Tensor& f = image.data();

  Tensor omega = config.omega.resolve(cs);
  Tensor mu = config.mu.resolve(cs);
  require(omega.min_value() >= 0.0, "tv_denoise: omega must be nonnegative");
  require(omega.max_value() > 0.0, "tv_denoise: omega is identically zero");
  require(mu.min_value() >= 0.0, "tv_denoise: mu must be nonnegative");

  // Physical mu -> pixel units per axis; this is what makes the result
  // independent of image resolution for fixed physical parameters.
  Tensor mu_x = mu, mu_y = mu;
  for (double& v : mu_x.data()) v /= cs.pitch_x();
  for (double& v : mu_y.data()) v /= cs.pitch_y();

  const double lam = config.bregman_penalty;
  Tensor u = f;
  Tensor dx(rows, cols, 1, 0.0), dy(rows, cols, 1, 0.0);
  Tensor bx(rows, cols, 1, 0.0), by(rows, cols, 1, 0.0);

  TvDiagnostics diag;
  diag.objective_initial = tv_objective(u, f, omega, mu_x, mu_y);
  Tensor best = u;
  double best_obj = diag.objective_initial;

  Tensor u_prev = u;
  for (int it = 1; it <= config.max_iter; ++it) {
    u_prev = u;

    // u-subproblem: (omega + lam D^T D) u = omega f + lam D^T (d - b),
    // a fixed count of Gauss-Seidel sweeps.
    for (int sweep = 0; sweep < config.gauss_seidel_sweeps; ++sweep) {
      for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
          double rhs = omega(r, c) * f(r, c);
          // D^T (d - b): incoming edge value minus outgoing edge value.
          if (c > 0) rhs += lam * (dx(r, c - 1) - bx(r, c - 1));
          if (c + 1 < cols) rhs -= lam * (dx(r, c) - bx(r, c));
          if (r > 0) rhs += lam * (dy(r - 1, c) - by(r - 1, c));
          if (r + 1 < rows) rhs -= lam * (dy(r, c) - by(r, c));

          double nb = 0.0;
          int deg = 0;
          if (c > 0) { nb += u(r, c - 1); ++deg; }
          if (c + 1 < cols) { nb += u(r, c + 1); ++deg; }
          if (r > 0) { nb += u(r - 1, c); ++deg; }
          if (r + 1 < rows) { nb += u(r + 1, c); ++deg; }
          u(r, c) = (rhs + lam * nb) / (omega(r, c) + lam * deg);
        }
      }
    }

    // Shrinkage with per-pixel thresholds, then Bregman update.
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        if (c + 1 < cols) {
          double g = u(r, c + 1) - u(r, c);
          dx(r, c) = shrink(g + bx(r, c), mu_x(r, c) / lam);
          bx(r, c) += g - dx(r, c);
        }
        if (r + 1 < rows) {
          double g = u(r + 1, c) - u(r, c);
          dy(r, c) = shrink(g + by(r, c), mu_y(r, c) / lam);
          by(r, c) += g - dy(r, c);
        }
      }
    }

    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < u.size(); ++i) {
      double d = u.data()[i] - u_prev.data()[i];
      num += d * d;
      den += u_prev.data()[i] * u_prev.data()[i];
    }
    diag.relative_change = std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
    diag.iterations = it;

    double obj = tv_objective(u, f, omega, mu_x, mu_y);
    if (obj < best_obj) {
      best_obj = obj;
      best = u;
    }

    if (diag.relative_change <= config.tol) {
      diag.converged = true;
      break;
    }
  }
  if (!diag.converged)
    diag.warnings.push_back("tv_denoise: no convergence within max_iter=" +
                            std::to_string(config.max_iter));

  // Projection onto the input range: cannot increase either objective term,
  // and it enforces the discrete maximum principle exactly.
  best.clamp(f.min_value(), f.max_value());
  diag.objective_final = tv_objective(best, f, omega, mu_x, mu_y);
  if (diagnostics) *diagnostics = diag;
  return image.with_data(std::move(best));
}

namespace {

void warn_if_pore_scale_mu(const RegularizationConfig& config, const CoordinateSystem& cs,
                           TvDiagnostics* diagnostics) {
  if (!diagnostics || config.pore_length <= 0.0) return;
  Tensor mu = config.mu.resolve(cs);
  if (mu.mean() < 3.0 * config.pore_length)
    diagnostics->warnings.push_back(
        "upscale: mu below 3*pore_length; the result may retain pore-scale features");
}

}  // namespace

PhysicalImage upscale(const PhysicalImage& image, const PhysicalImage& pore_indicator,
                      Phase phase, const RegularizationConfig& config,
                      TvDiagnostics* diagnostics) {
  require(pore_indicator.channels() == 1, "upscale: pore indicator must be single-channel");
  require(pore_indicator.data().within(0.0, 1.0), "upscale: pore indicator must lie in [0,1]");

  RegularizationConfig cfg = config;
  switch (phase) {
    case Phase::Full:
      cfg.omega = Param(1.0);
      break;
    case Phase::Pore:
      cfg.omega = Param(pore_indicator);
      break;
    case Phase::Solid: {
      Tensor w = pore_indicator.data();
      for (double& v : w.data()) v = 1.0 - v;
      cfg.omega = Param(pore_indicator.with_data(std::move(w)));
      break;
    }
  }

  TvDiagnostics local;
  TvDiagnostics* diag = diagnostics ? diagnostics : &local;
  warn_if_pore_scale_mu(cfg, image.coords(), diag);
  auto keep = diag->warnings;
  PhysicalImage out = tv_denoise(image, cfg, diag);
  diag->warnings.insert(diag->warnings.begin(), keep.begin(), keep.end());
  return out;
}

PhysicalImage porosity(const PhysicalImage& pore_indicator, const RegularizationConfig& config,
                       TvDiagnostics* diagnostics) {
  require(pore_indicator.data().within(0.0, 1.0), "porosity: indicator must lie in [0,1]");
  PhysicalImage out = upscale(pore_indicator, pore_indicator, Phase::Full, config, diagnostics);
  Tensor d = out.data();
  d.clamp(0.0, 1.0);
  return out.with_data(std::move(d));
}

ScaleSet make_scale_set(const PhysicalImage& image, const PhysicalImage& pore_indicator,
                        const RegularizationConfig& pore_config,
                        const RegularizationConfig& darcy_config) {
  ScaleSet s;
  s.g = tv_denoise(image, pore_config);
  s.G = upscale(image, pore_indicator, Phase::Full, darcy_config);
  s.Gp = upscale(image, pore_indicator, Phase::Pore, darcy_config);
  s.Gs = upscale(image, pore_indicator, Phase::Solid, darcy_config);
  s.G0 = porosity(pore_indicator, darcy_config);
  return s;
}

}  // namespace poreimg::regularize
