#pragma once

#include <filesystem>
#include <string>

#include "poreimg/image.hpp"

namespace poreimg::io {

/// Raw raster decode to [0,1] doubles (8/16-bit integer and float inputs;
/// 3-channel data is returned in RGB order).
Tensor read_raster(const std::filesystem::path& path);

/// Raw raster encode. ".png"/".tif"/".tiff"/".jpg" by extension; integer
/// formats quantize to 16 bit (8 bit when `bits8`), single-channel ".tif"
/// stores IEEE doubles losslessly.
void write_raster(const Tensor& data, const std::filesystem::path& path, bool bits8 = false);

/// Save pixel payload plus a JSON metadata sidecar sharing the basename.
void save(const PhysicalImage& image, const std::filesystem::path& path);

/// Load an image saved with save(); errors when the sidecar is missing or
/// disagrees with the raster dimensions.
PhysicalImage load(const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& raster_path);

}  // namespace poreimg::io
