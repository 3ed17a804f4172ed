#pragma once

#include <optional>
#include <string>
#include <vector>

#include "poreimg/image.hpp"

namespace poreimg::regularize {

/// Scalar-or-field parameter. Fields are single-channel images
/// co-registered with the physical domain; they are resampled onto the
/// target pixel grid when resolutions differ.
class Param {
 public:
  Param() = default;
  Param(double scalar) : scalar_(scalar) {}
  Param(PhysicalImage field) : field_(std::move(field)) {
    require(field_->channels() == 1, "Param: fields must be single-channel");
  }

  bool is_field() const { return field_.has_value(); }
  double scalar() const { return scalar_; }

  /// Per-pixel values on the target grid.
  Tensor resolve(const CoordinateSystem& target) const;

 private:
  double scalar_ = 0.0;
  std::optional<PhysicalImage> field_;
};

struct RegularizationConfig {
  Param mu{0.0};       // regularization strength, meters (signal is unitless)
  Param omega{1.0};    // fidelity weight >= 0, not identically zero
  double bregman_penalty = 1.0;
  int max_iter = 200;
  double tol = 1e-4;   // relative L2 change of the iterate
  int gauss_seidel_sweeps = 2;
  double pore_length = 0.0;  // characteristic pore diameter, meters
};

struct TvDiagnostics {
  int iterations = 0;
  bool converged = false;
  double relative_change = 0.0;
  double objective_initial = 0.0;
  double objective_final = 0.0;
  std::vector<std::string> warnings;
};

/// Discrete objective in pixel units:
///   1/2 sum w (f-u)^2 + sum (mu_x |D_x u| + mu_y |D_y u|)
/// with forward differences and reflecting boundaries. mu_x/mu_y are the
/// per-pixel physical mu divided by the pixel pitch of each axis.
double tv_objective(const Tensor& u, const Tensor& f, const Tensor& omega, const Tensor& mu_x,
                    const Tensor& mu_y);

/// Approximate minimizer of the weighted anisotropic ROF model by split
/// Bregman. Single-channel input; the returned image never leaves the
/// input range and never increases the objective.
PhysicalImage tv_denoise(const PhysicalImage& image, const RegularizationConfig& config,
                         TvDiagnostics* diagnostics = nullptr);

enum class Phase { Full, Pore, Solid };

/// Darcy-scale upscaling: the fidelity weight is 1 for the full material,
/// the pore indicator for the pore space and its complement for the solid.
PhysicalImage upscale(const PhysicalImage& image, const PhysicalImage& pore_indicator,
                      Phase phase, const RegularizationConfig& config,
                      TvDiagnostics* diagnostics = nullptr);

/// Porosity = Darcy-scale regularization of the pore indicator, in [0,1].
PhysicalImage porosity(const PhysicalImage& pore_indicator, const RegularizationConfig& config,
                       TvDiagnostics* diagnostics = nullptr);

/// The four representations of a pore-scale image plus the porosity.
struct ScaleSet {
  PhysicalImage g;   // pore-scale regularization
  PhysicalImage G;   // Darcy scale, full material
  PhysicalImage Gp;  // Darcy scale, pore space
  PhysicalImage Gs;  // Darcy scale, solid space
  PhysicalImage G0;  // porosity
};

ScaleSet make_scale_set(const PhysicalImage& image, const PhysicalImage& pore_indicator,
                        const RegularizationConfig& pore_config,
                        const RegularizationConfig& darcy_config);

}  // namespace poreimg::regularize
