#include "poreimg/image.hpp"

#include <algorithm>
#include <cmath>

namespace poreimg {

std::string to_string(Colorspace cs) {
  switch (cs) {
    case Colorspace::RGB: return "RGB";
    case Colorspace::GRAY: return "GRAY";
    case Colorspace::HSV: return "HSV";
    case Colorspace::NEGKEY: return "NEGKEY";
    case Colorspace::BINARY: return "BINARY";
  }
  fail("unknown colorspace");
}

Colorspace colorspace_from_string(const std::string& name) {
  if (name == "RGB") return Colorspace::RGB;
  if (name == "GRAY") return Colorspace::GRAY;
  if (name == "HSV") return Colorspace::HSV;
  if (name == "NEGKEY") return Colorspace::NEGKEY;
  if (name == "BINARY") return Colorspace::BINARY;
  fail("unknown colorspace name: " + name);
}

namespace {

void validate_payload(const Tensor& data, Colorspace cs) {
  require(data.channels() == 1 || data.channels() == 3,
          "PhysicalImage: channel count must be 1 or 3");
  require(data.all_finite(), "PhysicalImage: NaN/Inf in pixel data");
  bool single = cs == Colorspace::GRAY || cs == Colorspace::NEGKEY || cs == Colorspace::BINARY;
  if (single) require(data.channels() == 1, "PhysicalImage: " + to_string(cs) + " needs 1 channel");
  if (!single) require(data.channels() == 3, "PhysicalImage: " + to_string(cs) + " needs 3 channels");
  if (cs == Colorspace::BINARY) {
    for (double v : data.data())
      require(v == 0.0 || v == 1.0, "PhysicalImage: BINARY intensities must be exactly 0 or 1");
  } else {
    require(data.within(0.0, 1.0), "PhysicalImage: intensities must lie in [0,1]");
  }
}

}  // namespace

PhysicalImage::PhysicalImage(Tensor data, double width, double height, PhysCoord origin,
                             std::optional<double> timestamp, std::optional<Colorspace> colorspace)
    : data_(std::move(data)),
      coords_(data_.rows(), data_.cols(), width, height, origin),
      colorspace_(colorspace ? *colorspace
                             : (data_.channels() == 3 ? Colorspace::RGB : Colorspace::GRAY)),
      timestamp_(timestamp) {
  validate_payload(data_, colorspace_);
}

PhysicalImage PhysicalImage::with_data(Tensor data) const {
  require(data.same_shape(data_), "with_data: shape mismatch");
  return PhysicalImage(std::move(data), width(), height(), origin(), timestamp_, colorspace_);
}

PhysicalImage PhysicalImage::with_colorspace(Colorspace cs) const {
  return PhysicalImage(data_, width(), height(), origin(), timestamp_, cs);
}

PhysicalImage PhysicalImage::with_timestamp(std::optional<double> t) const {
  return PhysicalImage(data_, width(), height(), origin(), t, colorspace_);
}

PhysicalImage new_image(Tensor data, double width, double height, PhysCoord origin,
                        std::optional<double> timestamp, std::optional<Colorspace> colorspace) {
  return PhysicalImage(std::move(data), width, height, origin, timestamp, colorspace);
}

PhysicalImage crop_pixels(const PhysicalImage& image, int r0, int r1, int c0, int c1) {
  require(0 <= r0 && r0 <= r1 && r1 < image.rows() && 0 <= c0 && c0 <= c1 && c1 < image.cols(),
          "crop_pixels: range out of bounds");
  const Tensor& src = image.data();
  Tensor out(r1 - r0 + 1, c1 - c0 + 1, src.channels());
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c)
      for (int ch = 0; ch < src.channels(); ++ch) out(r - r0, c - c0, ch) = src(r, c, ch);

  const CoordinateSystem& cs = image.coords();
  double px = cs.pitch_x(), py = cs.pitch_y();
  PhysCoord origin{cs.origin().x + c0 * px, cs.origin().y + (cs.rows() - r1 - 1) * py};
  return PhysicalImage(std::move(out), (c1 - c0 + 1) * px, (r1 - r0 + 1) * py, origin,
                       image.timestamp(), image.colorspace());
}

PhysicalImage extract_roi(const PhysicalImage& image, PhysCoord ll, PhysCoord ur) {
  require(ll.x < ur.x && ll.y < ur.y, "extract_roi: lower-left must be below upper-right");
  const CoordinateSystem& cs = image.coords();
  PhysRect dom = cs.domain();
  PhysCoord cll{std::max(ll.x, dom.ll.x), std::max(ll.y, dom.ll.y)};
  PhysCoord cur{std::min(ur.x, dom.ur.x), std::min(ur.y, dom.ur.y)};
  require(cll.x < cur.x && cll.y < cur.y, "extract_roi: ROI does not intersect the image domain");

  // Pixel centers inside the clipped ROI; 1e-7-px slack absorbs rounding of
  // ROI edges that sit exactly on centers.
  const double eps = 1e-7;
  double px = cs.pitch_x(), py = cs.pitch_y();
  int c0 = static_cast<int>(std::ceil((cll.x - cs.origin().x) / px - 0.5 - eps));
  int c1 = static_cast<int>(std::floor((cur.x - cs.origin().x) / px - 0.5 + eps));
  int r0 = static_cast<int>(std::ceil(cs.rows() - 0.5 - (cur.y - cs.origin().y) / py - eps));
  int r1 = static_cast<int>(std::floor(cs.rows() - 0.5 - (cll.y - cs.origin().y) / py + eps));
  c0 = std::max(c0, 0);
  r0 = std::max(r0, 0);
  c1 = std::min(c1, cs.cols() - 1);
  r1 = std::min(r1, cs.rows() - 1);
  require(r0 <= r1 && c0 <= c1, "extract_roi: no pixel center falls inside the ROI");
  require(r1 - r0 >= 1 && c1 - c0 >= 1, "extract_roi: ROI narrower than 2 pixels");
  return crop_pixels(image, r0, r1, c0, c1);
}

namespace {

void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v) {
  v = std::max({r, g, b});
  double mn = std::min({r, g, b});
  double d = v - mn;
  s = v > 0.0 ? d / v : 0.0;
  if (d <= 0.0) {
    h = 0.0;
    return;
  }
  if (v == r)
    h = (g - b) / d;
  else if (v == g)
    h = 2.0 + (b - r) / d;
  else
    h = 4.0 + (r - g) / d;
  h /= 6.0;
  if (h < 0.0) h += 1.0;
}

}  // namespace

PhysicalImage to_colorspace(const PhysicalImage& image, Colorspace target) {
  Colorspace src = image.colorspace();
  if (src == target) return image;
  require(src == Colorspace::RGB &&
              (target == Colorspace::GRAY || target == Colorspace::HSV ||
               target == Colorspace::NEGKEY),
          "to_colorspace: unsupported conversion " + to_string(src) + " -> " + to_string(target));

  const Tensor& in = image.data();
  int out_ch = target == Colorspace::HSV ? 3 : 1;
  Tensor out(in.rows(), in.cols(), out_ch);
  for (int r = 0; r < in.rows(); ++r) {
    for (int c = 0; c < in.cols(); ++c) {
      double red = in(r, c, 0), green = in(r, c, 1), blue = in(r, c, 2);
      switch (target) {
        case Colorspace::GRAY:
          out(r, c) = 0.2126 * red + 0.7152 * green + 0.0722 * blue;
          break;
        case Colorspace::NEGKEY:
          // 1 - K with K = 1 - max(R,G,B).
          out(r, c) = std::max({red, green, blue});
          break;
        case Colorspace::HSV: {
          double h, s, v;
          rgb_to_hsv(red, green, blue, h, s, v);
          out(r, c, 0) = h;
          out(r, c, 1) = s;
          out(r, c, 2) = v;
          break;
        }
        default: break;
      }
    }
  }
  return PhysicalImage(std::move(out), image.width(), image.height(), image.origin(),
                       image.timestamp(), target);
}

PhysicalImage add_grid(const PhysicalImage& image, double dx, double dy) {
  const CoordinateSystem& cs = image.coords();
  require(dx > 0.0 && dy > 0.0, "add_grid: spacings must be positive");
  require(dx >= 2.0 * cs.pitch_x() && dy >= 2.0 * cs.pitch_y(),
          "add_grid: spacing below two pixel pitches");

  Tensor out = image.data();
  const int nch = out.channels();
  auto mark = [&](int r, int c) {
    if (nch == 1) {
      out(r, c) = 1.0;
    } else {
      out(r, c, 0) = 1.0;
      out(r, c, 1) = 0.0;
      out(r, c, 2) = 0.0;
    }
  };

  const double eps = 1e-9;
  for (int k = 0; k * dx <= cs.width() + eps; ++k) {
    int c = static_cast<int>(std::floor(k * dx / cs.pitch_x() + eps));
    c = std::min(c, cs.cols() - 1);
    for (int r = 0; r < cs.rows(); ++r) mark(r, c);
  }
  for (int k = 0; k * dy <= cs.height() + eps; ++k) {
    int from_bottom = static_cast<int>(std::floor(k * dy / cs.pitch_y() + eps));
    int r = cs.rows() - 1 - std::min(from_bottom, cs.rows() - 1);
    for (int c = 0; c < cs.cols(); ++c) mark(r, c);
  }
  return image.with_data(std::move(out));
}

}  // namespace poreimg
