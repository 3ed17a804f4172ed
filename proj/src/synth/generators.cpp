#include "poreimg/synth/generators.hpp"

#include <algorithm>
#include <cmath>

#include "poreimg/correct/geometry.hpp"

namespace poreimg::synth {

namespace {

// Separable Gaussian blur with reflected boundaries.
Tensor gaussian_blur(const Tensor& in, double sigma) {
  if (sigma <= 0.0) return in;
  int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[i + radius];
  }
  for (double& v : k) v /= sum;

  auto reflect = [](int i, int n) {
    while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - i - 1;
    return i;
  };

  Tensor tmp(in.rows(), in.cols(), in.channels());
  for (int r = 0; r < in.rows(); ++r)
    for (int c = 0; c < in.cols(); ++c)
      for (int ch = 0; ch < in.channels(); ++ch) {
        double s = 0.0;
        for (int i = -radius; i <= radius; ++i)
          s += k[i + radius] * in(r, reflect(c + i, in.cols()), ch);
        tmp(r, c, ch) = s;
      }
  Tensor out(in.rows(), in.cols(), in.channels());
  for (int r = 0; r < in.rows(); ++r)
    for (int c = 0; c < in.cols(); ++c)
      for (int ch = 0; ch < in.channels(); ++ch) {
        double s = 0.0;
        for (int i = -radius; i <= radius; ++i)
          s += k[i + radius] * tmp(reflect(r + i, in.rows()), c, ch);
        out(r, c, ch) = s;
      }
  return out;
}

}  // namespace

Tensor gen_texture(const DomainSpec& dom, const TextureSpec& tex, Rng& rng) {
  Tensor noise(dom.rows, dom.cols, 1);
  for (double& v : noise.data()) v = rng.uniform();
  Tensor smooth = gaussian_blur(noise, tex.feature_px / 2.355);  // feature_px ~ FWHM

  double lo = smooth.min_value(), hi = smooth.max_value();
  double span = hi > lo ? hi - lo : 1.0;
  for (double& v : smooth.data())
    v = tex.level + tex.contrast * ((v - lo) / span - 0.5);
  smooth.clamp(0.0, 1.0);
  return smooth;
}

void add_noise(Tensor& t, double sigma, Rng& rng) {
  if (sigma <= 0.0) return;
  for (double& v : t.data()) v = std::clamp(v + rng.normal(0.0, sigma), 0.0, 1.0);
}

// ---------------------------------------------------------------------------

GrainPack gen_grain_pack(const GrainPackSpec& spec) {
  require(spec.target_porosity > 0.2 && spec.target_porosity < 0.6,
          "gen_grain_pack: target porosity must lie in (0.2, 0.6)");
  require(spec.radius_min_px >= 3.0 && spec.radius_max_px >= spec.radius_min_px,
          "gen_grain_pack: grain radius must be >= 3 px");

  const DomainSpec& d = spec.domain;
  Rng rng(spec.seed, 0);

  struct Disk {
    double r, c, radius;
  };
  std::vector<Disk> disks;

  Tensor indicator(d.rows, d.cols, 1, 1.0);
  long pore_pixels = static_cast<long>(d.rows) * d.cols;
  const long total_pixels = pore_pixels;
  const long target_pore = static_cast<long>(std::llround(spec.target_porosity * total_pixels));

  int attempts = 0;
  while (pore_pixels > target_pore) {
    require(attempts++ < spec.max_attempts,
            "gen_grain_pack: packing failed to reach the target porosity");
    Disk cand{rng.uniform(0.0, d.rows - 1.0), rng.uniform(0.0, d.cols - 1.0),
              rng.uniform(spec.radius_min_px, spec.radius_max_px)};
    bool overlaps = false;
    for (const Disk& e : disks) {
      double dist = std::hypot(cand.r - e.r, cand.c - e.c);
      if (dist < cand.radius + e.radius + 1.0) {
        overlaps = true;
        break;
      }
    }
    if (overlaps) continue;
    disks.push_back(cand);
    int r0 = std::max(0, static_cast<int>(std::floor(cand.r - cand.radius)));
    int r1 = std::min(d.rows - 1, static_cast<int>(std::ceil(cand.r + cand.radius)));
    int c0 = std::max(0, static_cast<int>(std::floor(cand.c - cand.radius)));
    int c1 = std::min(d.cols - 1, static_cast<int>(std::ceil(cand.c + cand.radius)));
    double rr = cand.radius * cand.radius;
    for (int r = r0; r <= r1; ++r)
      for (int c = c0; c <= c1; ++c) {
        double dr = r - cand.r, dc = c - cand.c;
        if (dr * dr + dc * dc <= rr && indicator(r, c) == 1.0) {
          indicator(r, c) = 0.0;
          --pore_pixels;
        }
      }
  }

  Tensor img(d.rows, d.cols, 1);
  for (size_t i = 0; i < img.size(); ++i)
    img.data()[i] = indicator.data()[i] == 1.0 ? 0.8 : 0.25;
  add_noise(img, spec.noise_sigma, rng);

  double porosity = static_cast<double>(pore_pixels) / total_pixels;
  double mean_radius = 0.0;
  for (const Disk& e : disks) mean_radius += e.radius;
  if (!disks.empty()) mean_radius /= disks.size();
  double pitch = d.width_m / d.cols;

  GrainPack out{
      PhysicalImage(std::move(img), d.width_m, d.height_m),
      PhysicalImage(std::move(indicator), d.width_m, d.height_m, {}, {}, Colorspace::GRAY),
      porosity,
      2.0 * mean_radius * pitch,
  };
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// True displacement in pixels: content of the reference at pixel p shows up
// in the secondary at p + u(p).
Tensor make_field(const WarpPairSpec& spec) {
  const DomainSpec& d = spec.domain;
  Tensor u(d.rows, d.cols, 2, 0.0);
  switch (spec.kind) {
    case FieldKind::Constant:
      for (int r = 0; r < d.rows; ++r)
        for (int c = 0; c < d.cols; ++c) {
          u(r, c, 0) = spec.shift_col_px;
          u(r, c, 1) = spec.shift_row_px;
        }
      break;
    case FieldKind::Sinusoidal: {
      for (int r = 0; r < d.rows; ++r)
        for (int c = 0; c < d.cols; ++c) {
          u(r, c, 0) = std::sin(2.0 * M_PI * r / spec.wavelength_px);
          u(r, c, 1) = 0.5 * std::sin(2.0 * M_PI * c / spec.wavelength_px);
        }
      double peak = 0.0;
      for (double v : u.data()) peak = std::max(peak, std::abs(v));
      double scale = spec.amplitude_px / peak;  // grid max lands exactly on amplitude
      for (double& v : u.data()) v *= scale;
      break;
    }
    case FieldKind::Compression: {
      double r0 = 0.5 * (d.rows - 1);
      for (int r = 0; r < d.rows; ++r)
        for (int c = 0; c < d.cols; ++c) u(r, c, 1) = spec.strain * (r - r0);
      break;
    }
  }
  return u;
}

}  // namespace

WarpPair gen_warp_pair(const WarpPairSpec& spec) {
  const DomainSpec& d = spec.domain;
  Rng rng(spec.seed, 0);
  Tensor ref = gen_texture(d, spec.texture, rng);
  Tensor field = make_field(spec);

  // secondary(y) = reference(psi^{-1}(y)) with psi(x) = x + u(x); the inverse
  // is found per pixel by fixed-point iteration (fields are smooth and small).
  Tensor sec(d.rows, d.cols, 1);
  bool integer_constant = spec.kind == FieldKind::Constant &&
                          spec.shift_col_px == std::floor(spec.shift_col_px) &&
                          spec.shift_row_px == std::floor(spec.shift_row_px);
  for (int r = 0; r < d.rows; ++r) {
    for (int c = 0; c < d.cols; ++c) {
      if (integer_constant) {
        int sr = std::clamp(r - static_cast<int>(spec.shift_row_px), 0, d.rows - 1);
        int sc = std::clamp(c - static_cast<int>(spec.shift_col_px), 0, d.cols - 1);
        sec(r, c) = ref(sr, sc);
        continue;
      }
      double xr = r, xc = c;
      for (int it = 0; it < 30; ++it) {
        double ur = bilinear_sample(field, xr, xc, 1);
        double uc = bilinear_sample(field, xr, xc, 0);
        double nr = r - ur, nc = c - uc;
        if (std::abs(nr - xr) + std::abs(nc - xc) < 1e-12) {
          xr = nr;
          xc = nc;
          break;
        }
        xr = nr;
        xc = nc;
      }
      sec(r, c) = bilinear_sample(ref, xr, xc, 0);
    }
  }

  // Independent sensor noise per shot.
  Rng noise_ref(spec.seed, 1), noise_sec(spec.seed, 2);
  add_noise(ref, spec.texture.noise_sigma, noise_ref);
  add_noise(sec, spec.texture.noise_sigma, noise_sec);

  return WarpPair{PhysicalImage(std::move(ref), d.width_m, d.height_m),
                  PhysicalImage(std::move(sec), d.width_m, d.height_m), std::move(field)};
}

// ---------------------------------------------------------------------------

double injected_volume(const std::vector<InjectionStage>& stages, double t) {
  double v = 0.0, t0 = 0.0;
  for (const InjectionStage& s : stages) {
    double t1 = std::min(t, s.t_end_s);
    if (t1 > t0) v += s.rate_m3s * (t1 - t0);
    t0 = s.t_end_s;
    if (t <= t0) break;
  }
  return v;
}

namespace {

Tensor ripple_field(const DomainSpec& d, double amplitude, double wavelength_px, Rng& rng) {
  Tensor t(d.rows, d.cols, 1, 0.0);
  if (amplitude <= 0.0) return t;
  double pr = rng.uniform(0.0, 2.0 * M_PI), pc = rng.uniform(0.0, 2.0 * M_PI);
  for (int r = 0; r < d.rows; ++r)
    for (int c = 0; c < d.cols; ++c)
      t(r, c) = amplitude * std::sin(2.0 * M_PI * r / wavelength_px + pr) *
                std::sin(2.0 * M_PI * c / wavelength_px + pc);
  return t;
}

}  // namespace

PlumeSequence gen_plume_sequence(const PlumeSpec& spec) {
  const DomainSpec& d = spec.domain;
  require(!spec.stages.empty(), "gen_plume_sequence: injection schedule required");
  for (const InjectionStage& s : spec.stages)
    require(s.rate_m3s >= 0.0, "gen_plume_sequence: negative injection rate");
  require(spec.alpha > 0.0, "gen_plume_sequence: alpha must be positive");

  double pitch = d.width_m / d.cols;
  double pixel_area = pitch * (d.height_m / d.rows);
  double cell_volume = spec.porosity * spec.depth_m * pixel_area;

  // Injection point at the bottom center; plume = half disk with a linear
  // concentration ramp of width `transition_width_px` at its rim.
  double inj_r = d.rows - 1.0, inj_c = 0.5 * (d.cols - 1.0);
  double w = spec.transition_width_px;

  auto concentration_at = [&](int r, int c, double radius) {
    double dist = std::hypot(r - inj_r, c - inj_c);
    return std::clamp((radius - dist) / w, 0.0, 1.0);
  };
  auto plume_volume = [&](double radius) {
    double v = 0.0;
    for (int r = 0; r < d.rows; ++r)
      for (int c = 0; c < d.cols; ++c) v += concentration_at(r, c, radius);
    return v * cell_volume;
  };

  double max_radius = std::hypot(static_cast<double>(d.rows), 0.5 * d.cols) + w;
  double max_volume = plume_volume(max_radius);

  PlumeSequence out;
  out.alpha = spec.alpha;
  out.beta = spec.beta;
  out.times_s = spec.times_s;

  Tensor base(d.rows, d.cols, 1, spec.base_level);
  out.reference = PhysicalImage(base, d.width_m, d.height_m, {}, 0.0);

  Rng ripple_rng(spec.seed, 10);
  Rng noise_rng(spec.seed, 11);
  for (int k = 0; k < spec.num_extra_references; ++k) {
    Tensor refk = base;
    Tensor rip = ripple_field(d, spec.ripple_amplitude, spec.ripple_wavelength_px, ripple_rng);
    for (size_t i = 0; i < refk.size(); ++i) refk.data()[i] += rip.data()[i];
    refk.clamp(0.0, 1.0);
    add_noise(refk, spec.noise_sigma, noise_rng);
    out.extra_references.push_back(PhysicalImage(std::move(refk), d.width_m, d.height_m, {}, 0.0));
  }

  for (size_t i = 0; i < spec.times_s.size(); ++i) {
    double t = spec.times_s[i];
    double target = injected_volume(spec.stages, t);
    require(target <= max_volume, "gen_plume_sequence: injected volume exceeds the domain");

    // Bisection on the plume radius; the volume is continuous and
    // nondecreasing in the radius, so this converges to pixel-exact volume.
    double lo = 0.0, hi = max_radius;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (plume_volume(mid) < target)
        lo = mid;
      else
        hi = mid;
      if (hi - lo < 1e-12 * max_radius) break;
    }
    double radius = 0.5 * (lo + hi);

    Tensor conc(d.rows, d.cols, 1), mask(d.rows, d.cols, 1), frame(d.rows, d.cols, 1);
    double volume = 0.0;
    for (int r = 0; r < d.rows; ++r)
      for (int c = 0; c < d.cols; ++c) {
        double cv = concentration_at(r, c, radius);
        conc(r, c) = cv;
        volume += cv;
        mask(r, c) = cv >= 0.5 ? 1.0 : 0.0;
        frame(r, c) = spec.base_level + (cv - spec.beta) / spec.alpha;
      }
    Tensor rip = ripple_field(d, spec.ripple_amplitude, spec.ripple_wavelength_px, ripple_rng);
    for (size_t j = 0; j < frame.size(); ++j) frame.data()[j] += rip.data()[j];
    frame.clamp(0.0, 1.0);
    add_noise(frame, spec.noise_sigma, noise_rng);

    out.true_volumes_m3.push_back(volume * cell_volume);
    out.true_concentrations.push_back(PhysicalImage(std::move(conc), d.width_m, d.height_m, {}, t));
    out.true_masks.push_back(
        PhysicalImage(std::move(mask), d.width_m, d.height_m, {}, t, Colorspace::BINARY));
    out.frames.push_back(PhysicalImage(std::move(frame), d.width_m, d.height_m, {}, t));
  }
  return out;
}

// ---------------------------------------------------------------------------

LaserGrid gen_laser_grid(const LaserGridSpec& spec) {
  const DomainSpec& d = spec.domain;
  double pitch_x = d.width_m / d.cols, pitch_y = d.height_m / d.rows;

  // Rectified view: dark grid lines on a light background.
  Tensor ideal(d.rows, d.cols, 1, 0.9);
  const double eps = 1e-9;
  for (int k = 0; k * spec.spacing_m <= d.width_m + eps; ++k) {
    double cx = k * spec.spacing_m / pitch_x;
    for (int r = 0; r < d.rows; ++r)
      for (int c = std::max(0, static_cast<int>(std::floor(cx - spec.line_halfwidth_px)));
           c <= std::min(d.cols - 1, static_cast<int>(std::ceil(cx + spec.line_halfwidth_px))); ++c)
        if (std::abs(c - cx) <= spec.line_halfwidth_px) ideal(r, c) = 0.1;
  }
  for (int k = 0; k * spec.spacing_m <= d.height_m + eps; ++k) {
    double ry = d.rows - 1 - k * spec.spacing_m / pitch_y;
    for (int c = 0; c < d.cols; ++c)
      for (int r = std::max(0, static_cast<int>(std::floor(ry - spec.line_halfwidth_px)));
           r <= std::min(d.rows - 1, static_cast<int>(std::ceil(ry + spec.line_halfwidth_px))); ++r)
        if (std::abs(r - ry) <= spec.line_halfwidth_px) ideal(r, c) = 0.1;
  }

  double w = d.cols - 1.0, h = d.rows - 1.0;
  std::array<Pt, 4> ideal_corners{{{0, 0}, {w, 0}, {w, h}, {0, h}}};
  std::array<Pt, 4> distorted_corners;
  for (int i = 0; i < 4; ++i) distorted_corners[i] = ideal_corners[i] + spec.corner_offsets_px[i];
  Mat3 H = homography_from_corners(ideal_corners, distorted_corners);
  Mat3 Hinv = H.inverse();

  correct::BulgeStretch warp;
  warp.bulge_x = spec.bulge_x;
  warp.bulge_y = spec.bulge_y;

  // distorted(p) = ideal(m^{-1}(p)) with m = H o bulge, so that rectifying
  // with the same map recovers the ideal grid.
  Tensor distorted(d.rows, d.cols, 1);
  for (int r = 0; r < d.rows; ++r)
    for (int c = 0; c < d.cols; ++c) {
      Pt t = Hinv.apply({static_cast<double>(c), static_cast<double>(r)});
      Pt uv = warp.invert({t.x / w, t.y / h});
      distorted(r, c) = bilinear_sample(ideal, uv.y * h, uv.x * w, 0, Border::Clamp);
    }

  LaserGrid out{PhysicalImage(std::move(distorted), d.width_m, d.height_m),
                PhysicalImage(std::move(ideal), d.width_m, d.height_m), H, distorted_corners};
  return out;
}

}  // namespace poreimg::synth
