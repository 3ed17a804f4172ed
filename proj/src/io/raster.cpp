#include "poreimg/io/raster.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <cmath>
#include <fstream>

#include "json.hpp"

namespace poreimg::io {

namespace fs = std::filesystem;
using nlohmann::json;

Tensor read_raster(const fs::path& path) {
  cv::Mat m = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  require(!m.empty(), "read_raster: cannot read " + path.string());
  require(m.channels() == 1 || m.channels() == 3 || m.channels() == 4,
          "read_raster: unsupported channel count in " + path.string());
  if (m.channels() == 4) {  // drop alpha
    cv::Mat tmp;
    cv::mixChannels({m}, {tmp = cv::Mat(m.rows, m.cols, CV_MAKETYPE(m.depth(), 3))},
                    {0, 0, 1, 1, 2, 2});
    m = tmp;
  }

  int ch = m.channels();
  Tensor out(m.rows, m.cols, ch);
  double scale = 1.0;
  switch (m.depth()) {
    case CV_8U: scale = 1.0 / 255.0; break;
    case CV_16U: scale = 1.0 / 65535.0; break;
    case CV_32F:
    case CV_64F: scale = 1.0; break;
    default: fail("read_raster: unsupported bit depth in " + path.string());
  }
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) {
      for (int k = 0; k < ch; ++k) {
        double v = 0.0;
        switch (m.depth()) {
          case CV_8U: v = m.ptr<uchar>(r)[c * ch + k]; break;
          case CV_16U: v = m.ptr<uint16_t>(r)[c * ch + k]; break;
          case CV_32F: v = m.ptr<float>(r)[c * ch + k]; break;
          case CV_64F: v = m.ptr<double>(r)[c * ch + k]; break;
        }
        // OpenCV stores color as BGR; flip to RGB.
        int dst = ch == 3 ? 2 - k : k;
        out(r, c, dst) = v * scale;
      }
    }
  }
  return out;
}

void write_raster(const Tensor& data, const fs::path& path, bool bits8) {
  std::string ext = path.extension().string();
  int ch = data.channels();
  require(ch == 1 || ch == 3, "write_raster: unsupported channel count");

  bool float_tiff = (ext == ".tif" || ext == ".tiff") && ch == 1 && !bits8;
  cv::Mat m;
  if (float_tiff) {
    m = cv::Mat(data.rows(), data.cols(), CV_64FC1);
    for (int r = 0; r < data.rows(); ++r)
      for (int c = 0; c < data.cols(); ++c) m.ptr<double>(r)[c] = data(r, c);
  } else if (bits8) {
    m = cv::Mat(data.rows(), data.cols(), CV_MAKETYPE(CV_8U, ch));
    for (int r = 0; r < data.rows(); ++r)
      for (int c = 0; c < data.cols(); ++c)
        for (int k = 0; k < ch; ++k) {
          int src = ch == 3 ? 2 - k : k;  // RGB -> BGR
          m.ptr<uchar>(r)[c * ch + k] =
              cv::saturate_cast<uchar>(std::lround(data(r, c, src) * 255.0));
        }
  } else {
    m = cv::Mat(data.rows(), data.cols(), CV_MAKETYPE(CV_16U, ch));
    for (int r = 0; r < data.rows(); ++r)
      for (int c = 0; c < data.cols(); ++c)
        for (int k = 0; k < ch; ++k) {
          int src = ch == 3 ? 2 - k : k;
          m.ptr<uint16_t>(r)[c * ch + k] =
              cv::saturate_cast<uint16_t>(std::lround(data(r, c, src) * 65535.0));
        }
  }
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), m);
  } catch (const cv::Exception& e) {
    fail("write_raster: " + path.string() + ": " + e.what());
  }
  require(ok, "write_raster: cannot write " + path.string());
}

fs::path sidecar_path(const fs::path& raster_path) {
  fs::path p = raster_path;
  p.replace_extension(".json");
  return p;
}

void save(const PhysicalImage& image, const fs::path& path) {
  write_raster(image.data(), path, image.colorspace() == Colorspace::BINARY);
  json meta;
  meta["width_m"] = image.width();
  meta["height_m"] = image.height();
  meta["origin_m"] = {image.origin().x, image.origin().y};
  if (image.timestamp())
    meta["timestamp_s"] = *image.timestamp();
  else
    meta["timestamp_s"] = nullptr;
  meta["colorspace"] = to_string(image.colorspace());
  meta["rows"] = image.rows();
  meta["cols"] = image.cols();
  meta["channels"] = image.channels();
  std::ofstream f(sidecar_path(path));
  require(f.good(), "save: cannot write sidecar for " + path.string());
  f << meta.dump(2) << "\n";
}

PhysicalImage load(const fs::path& path) {
  fs::path side = sidecar_path(path);
  std::ifstream f(side);
  require(f.good(), "load: missing metadata sidecar " + side.string());
  json meta;
  try {
    f >> meta;
  } catch (const json::exception& e) {
    fail("load: bad sidecar " + side.string() + ": " + e.what());
  }

  Tensor data = read_raster(path);
  require(meta.at("rows").get<int>() == data.rows() &&
              meta.at("cols").get<int>() == data.cols() &&
              meta.at("channels").get<int>() == data.channels(),
          "load: sidecar dimensions disagree with the raster " + path.string());

  std::optional<double> ts;
  if (!meta.at("timestamp_s").is_null()) ts = meta.at("timestamp_s").get<double>();
  Colorspace cs = colorspace_from_string(meta.at("colorspace").get<std::string>());
  auto org = meta.at("origin_m");
  return PhysicalImage(std::move(data), meta.at("width_m").get<double>(),
                       meta.at("height_m").get<double>(),
                       {org.at(0).get<double>(), org.at(1).get<double>()}, ts, cs);
}

}  // namespace poreimg::io
