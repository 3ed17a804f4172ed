#pragma once

#include <string>

#include "poreimg/image.hpp"

namespace poreimg::align {

enum class MatchMode { Ncc, Features };

struct MatchConfig {
  MatchMode mode = MatchMode::Ncc;
  double ncc_threshold = 0.5;      // minimum match strength to accept
  double dominance_tol_px = 1.0;   // allowed non-translational residual at patch corners
  int max_shift_px = 0;            // 0 = derive from the patch size
  int min_template_px = 16;
  int max_shift_cap_px = 64;
};

/// Local translation between two co-located patches: reference content at
/// pixel p matches the secondary at p + (d_col, d_row). Failure is encoded
/// as rejected fidelity, never as an exception.
struct PatchMatch {
  double d_col = 0.0;
  double d_row = 0.0;
  bool accepted = false;
  double score = 0.0;  // NCC peak (Ncc mode) or inlier fraction (Features mode)
  std::string reject_reason;
};

/// Translation maximizing the texture match between same-shaped patches
/// (>= 32x32 px). Accepted only when the match is strong and the local map
/// is effectively a pure translation.
PatchMatch estimate_patch_translation(const PhysicalImage& ref_patch,
                                      const PhysicalImage& sec_patch,
                                      const MatchConfig& config = {});

}  // namespace poreimg::align
