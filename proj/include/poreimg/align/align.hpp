#pragma once

#include <vector>

#include "poreimg/align/field.hpp"
#include "poreimg/align/matcher.hpp"
#include "poreimg/patches.hpp"

namespace poreimg::align {

struct LevelSpec {
  int num_v = 16;
  int num_h = 16;
  double overlap = 0.0;
};

struct AlignConfig {
  std::vector<LevelSpec> levels;  // empty = single 16x16 level
  MatchConfig match;
  bool scale_dominance_tol = true;  // loosen the translation check for large patches
  std::vector<BoundaryCondition> boundary_conditions;
  int grid_rows = 0, grid_cols = 0;  // final node grid; 0 = finest level + 1
};

struct LevelReport {
  int num_v = 0, num_h = 0;
  int accepted = 0, rejected = 0;
  Tensor fidelity;  // num_v x num_h map, 1 = accepted (Fig-style diagnostic raster)
  std::vector<PatchMatch> matches;
  double rejected_fraction() const {
    int n = accepted + rejected;
    return n > 0 ? static_cast<double>(rejected) / n : 0.0;
  }
};

struct AlignReport {
  std::vector<LevelReport> levels;
};

/// Raised when a level accepts fewer than 3 patches; carries the per-patch
/// fidelity diagnostics gathered so far.
class AlignError : public Error {
 public:
  AlignError(const std::string& msg, AlignReport report)
      : Error(msg), report(std::move(report)) {}
  AlignReport report;
};

/// Multilevel pore-space alignment: per-level patch translations between
/// the reference and the currently-warped secondary, RBF globalization,
/// and composition by re-interpolation at the level's patch centers.
/// Returns psi with reference(x) ~= secondary(psi(x)).
DisplacementField align(const PhysicalImage& reference, const PhysicalImage& secondary,
                        const AlignConfig& config = {}, AlignReport* report = nullptr);

}  // namespace poreimg::align
