#pragma once

#include <cstdint>
#include <vector>

#include "poreimg/geom.hpp"
#include "poreimg/image.hpp"
#include "poreimg/synth/rng.hpp"

namespace poreimg::synth {

// Ground-truth generators for the test and acceptance suites. Each one is
// a pure function of its spec: identical spec -> bit-identical outputs,
// and returned truth values are the exact quantities used for rendering.

struct DomainSpec {
  int rows = 256;
  int cols = 256;
  double width_m = 0.256;
  double height_m = 0.256;  // defaults give a 1 mm pixel pitch
};

struct TextureSpec {
  double feature_px = 4.0;   // band limit of the sand-like texture
  double contrast = 0.5;     // peak-to-peak intensity range
  double level = 0.5;        // mean intensity
  double noise_sigma = 0.0;  // per-image sensor noise, not shared between frames
};

/// Band-limited random "sand" texture; feature_px controls grain size.
Tensor gen_texture(const DomainSpec& dom, const TextureSpec& tex, Rng& rng);

/// Additive Gaussian sensor noise, clamped to [0,1].
void add_noise(Tensor& t, double sigma, Rng& rng);

// ---------------------------------------------------------------------------

struct GrainPackSpec {
  uint64_t seed = 1;
  DomainSpec domain;
  double target_porosity = 0.40;  // must lie in (0.2, 0.6)
  double radius_min_px = 5.0;     // >= 3 px
  double radius_max_px = 9.0;
  double noise_sigma = 0.0;
  int max_attempts = 200000;
};

struct GrainPack {
  PhysicalImage image;      // rendered gray image (bright pores, dark grains)
  PhysicalImage indicator;  // exact pore indicator, 1 = pore
  double porosity;          // exact pixel-count porosity
  double pore_length_m;     // characteristic grain diameter
};

GrainPack gen_grain_pack(const GrainPackSpec& spec);

// ---------------------------------------------------------------------------

enum class FieldKind { Constant, Sinusoidal, Compression };

struct WarpPairSpec {
  uint64_t seed = 2;
  DomainSpec domain;
  TextureSpec texture;
  FieldKind kind = FieldKind::Constant;
  double shift_col_px = 0.0;  // Constant
  double shift_row_px = 0.0;
  double amplitude_px = 4.0;  // Sinusoidal
  double wavelength_px = 128.0;
  double strain = 0.0;  // Compression along rows
};

struct WarpPair {
  PhysicalImage reference;
  PhysicalImage secondary;  // reference resampled through the true field
  Tensor field_px;          // 2 channels (d_col, d_row): reference content at
                            // pixel p appears in the secondary at p + field(p)
};

WarpPair gen_warp_pair(const WarpPairSpec& spec);

// ---------------------------------------------------------------------------

struct InjectionStage {
  double t_end_s;
  double rate_m3s;
};

struct PlumeSpec {
  uint64_t seed = 3;
  DomainSpec domain;
  std::vector<InjectionStage> stages = {{3600.0, 500e-6 / 3600.0}};
  std::vector<double> times_s = {600, 1200, 1800, 2400, 3000, 3600};
  double alpha = 1.5;  // concentration = clamp(alpha * signal + beta)
  double beta = 0.0;
  double porosity = 0.40;
  double depth_m = 0.02;
  double base_level = 0.15;
  double transition_width_px = 6.0;
  double noise_sigma = 0.0;
  double ripple_amplitude = 0.0;  // illumination ripple, ~2-3% of scale
  double ripple_wavelength_px = 128.0;
  int num_extra_references = 0;
};

struct PlumeSequence {
  PhysicalImage reference;                      // designated base reference
  std::vector<PhysicalImage> extra_references;  // ripple-only reference shots
  std::vector<PhysicalImage> frames;
  std::vector<double> times_s;
  std::vector<PhysicalImage> true_masks;           // concentration >= 0.5
  std::vector<PhysicalImage> true_concentrations;  // exact generator fields
  std::vector<double> true_volumes_m3;             // pixel-exact, == injected volume
  double alpha, beta;
};

PlumeSequence gen_plume_sequence(const PlumeSpec& spec);

/// Injected volume at time t for a stage schedule.
double injected_volume(const std::vector<InjectionStage>& stages, double t);

// ---------------------------------------------------------------------------

struct LaserGridSpec {
  uint64_t seed = 4;
  DomainSpec domain;
  double spacing_m = 0.10;
  double line_halfwidth_px = 1.0;
  // Pixel offsets applied to the four ideal corners (TL, TR, BR, BL) to
  // define the perspective distortion.
  std::array<Pt, 4> corner_offsets_px{};
  double bulge_x = 0.0;  // quadratic bulge coefficients, see correct::BulgeStretch
  double bulge_y = 0.0;
};

struct LaserGrid {
  PhysicalImage distorted;
  PhysicalImage ideal;
  Mat3 homography;              // ideal pixel coords -> distorted pixel coords
  std::array<Pt, 4> corners_px;  // distorted positions of the ideal corners
};

LaserGrid gen_laser_grid(const LaserGridSpec& spec);

}  // namespace poreimg::synth
