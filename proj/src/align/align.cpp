#include "poreimg/align/align.hpp"

#include <cmath>
#include <optional>

namespace poreimg::align {

namespace {

MatchConfig level_match_config(const AlignConfig& cfg, int patch_min_dim) {
  MatchConfig m = cfg.match;
  if (cfg.scale_dominance_tol)
    m.dominance_tol_px = std::max(m.dominance_tol_px, 0.02 * patch_min_dim);
  return m;
}

}  // namespace

DisplacementField align(const PhysicalImage& reference, const PhysicalImage& secondary,
                        const AlignConfig& config, AlignReport* report_out) {
  require(reference.coords().same_geometry(secondary.coords()),
          "align: reference and secondary geometries differ");

  std::vector<LevelSpec> levels = config.levels;
  if (levels.empty()) levels.push_back(LevelSpec{});

  const CoordinateSystem& cs = reference.coords();
  double px = cs.pitch_x(), py = cs.pitch_y();

  AlignReport report;
  std::optional<DisplacementField> field;  // none = identity

  for (size_t li = 0; li < levels.size(); ++li) {
    const LevelSpec& lv = levels[li];
    PhysicalImage warped =
        field ? warp(secondary, *field, WarpDirection::Forward) : secondary;

    PatchSet ref_patches = make_patches(reference, lv.num_v, lv.num_h, lv.overlap);
    PatchSet sec_patches = make_patches(warped, lv.num_v, lv.num_h, lv.overlap);

    LevelReport lr;
    lr.num_v = lv.num_v;
    lr.num_h = lv.num_h;
    lr.fidelity = Tensor(lv.num_v, lv.num_h, 1, 0.0);

    std::vector<FieldSample> level_samples;
    std::vector<PhysCoord> centers;
    for (int i = 0; i < lv.num_v; ++i) {
      for (int j = 0; j < lv.num_h; ++j) {
        PatchSet::Range rg = ref_patches.range(i, j);
        MatchConfig mc =
            level_match_config(config, std::min(rg.r1 - rg.r0 + 1, rg.c1 - rg.c0 + 1));
        PatchMatch m = estimate_patch_translation(ref_patches.patch(i, j),
                                                  sec_patches.patch(i, j), mc);
        lr.matches.push_back(m);
        PhysCoord center =
            cs.pixel_to_phys_continuous(0.5 * (rg.r0 + rg.r1), 0.5 * (rg.c0 + rg.c1));
        centers.push_back(center);
        // Pixel translation -> physical displacement (rows grow downward).
        level_samples.push_back(
            {center, m.d_col * px, -m.d_row * py, m.accepted});
        if (m.accepted) {
          ++lr.accepted;
          lr.fidelity(i, j) = 1.0;
        } else {
          ++lr.rejected;
        }
      }
    }
    report.levels.push_back(lr);

    if (lr.accepted < 3) {
      if (report_out) *report_out = report;
      throw AlignError("align: level " + std::to_string(li + 1) + " accepted only " +
                           std::to_string(lr.accepted) + " of " +
                           std::to_string(lr.accepted + lr.rejected) + " patches",
                       report);
    }

    int grid_rows = lv.num_v + 1, grid_cols = lv.num_h + 1;
    if (li + 1 == levels.size()) {
      if (config.grid_rows > 0) grid_rows = config.grid_rows;
      if (config.grid_cols > 0) grid_cols = config.grid_cols;
    }

    if (!field) {
      field = build_field(level_samples, config.boundary_conditions, cs, grid_rows, grid_cols);
      continue;
    }

    // Composition psi^i = psi^{i-1} o (Id + delta~), re-interpolated at the
    // current level's patch centers.
    DisplacementField delta =
        build_field(level_samples, config.boundary_conditions, cs, grid_rows, grid_cols);
    std::vector<FieldSample> composed;
    composed.reserve(centers.size());
    for (const PhysCoord& c : centers) {
      PhysCoord d = delta.displacement_smooth(c);
      PhysCoord mapped = field->apply({c.x + d.x, c.y + d.y});
      composed.push_back({c, mapped.x - c.x, mapped.y - c.y, true});
    }
    field = build_field(composed, config.boundary_conditions, cs, grid_rows, grid_cols);
  }

  if (report_out) *report_out = report;
  return *field;
}

}  // namespace poreimg::align
