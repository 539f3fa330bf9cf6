#ifndef SPHDS_RENDER_HPP
#define SPHDS_RENDER_HPP

// Equirectangular raster rendering of a dataset column to binary PPM.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "sphds/coords.hpp"
#include "sphds/dataset.hpp"
#include "sphds/error.hpp"
#include "sphds/healpix.hpp"
#include "sphds/parallel.hpp"

namespace sphds {

enum class ColorRamp { Grayscale, BlueRed };

struct RenderSpec {
  int width = 720;
  int height = 360;
  std::string column = "I";
  ColorRamp ramp = ColorRamp::BlueRed;
  std::uint8_t background = 255;  // grey level painted where the dataset has no row
};

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per cell
};

inline std::array<std::uint8_t, 3> ramp_color(ColorRamp ramp, double t) {
  t = std::clamp(t, 0.0, 1.0);
  const auto level = [](double x) { return static_cast<std::uint8_t>(std::lround(255.0 * x)); };
  if (ramp == ColorRamp::Grayscale) {
    const auto g = level(t);
    return {g, g, g};
  }
  return {level(t), 0, level(1.0 - t)};
}

/// Cell (r, c) samples lat = pi/2 - pi (r + 1/2) / H, lon = 2 pi (c + 1/2) / W.
/// Values are min-max normalized over the column; a constant column maps to
/// the middle of the ramp.
inline Image render(const SphericalDataset& ds, const RenderSpec& spec, unsigned threads = 1) {
  if (spec.width < 1 || spec.height < 1) throw Error(Errc::domain, "render: raster size must be positive");
  const auto values = ds.column(spec.column);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const double v : values) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  Image img;
  img.width = spec.width;
  img.height = spec.height;
  img.rgb.assign(static_cast<std::size_t>(spec.width) * static_cast<std::size_t>(spec.height) * 3,
                 spec.background);

  const auto h = static_cast<double>(spec.height);
  const auto w = static_cast<double>(spec.width);
  parallel_blocks(static_cast<std::size_t>(spec.height), threads, [&](std::size_t r0, std::size_t r1) {
    for (std::size_t r = r0; r < r1; ++r) {
      const double lat = half_pi - pi * (static_cast<double>(r) + 0.5) / h;
      for (int c = 0; c < spec.width; ++c) {
        const double lon = two_pi * (static_cast<double>(c) + 0.5) / w;
        const PixelId p = ang2pix(ds.resolution(), geo2sph({lon, lat}), ds.ordering());
        const auto row = ds.find(p.index);
        if (!row || !std::isfinite(values[*row])) continue;
        const double t = hi > lo ? (values[*row] - lo) / (hi - lo) : 0.5;
        const auto rgb = ramp_color(spec.ramp, t);
        const std::size_t off = (r * static_cast<std::size_t>(spec.width) + static_cast<std::size_t>(c)) * 3;
        std::copy(rgb.begin(), rgb.end(), img.rgb.begin() + static_cast<std::ptrdiff_t>(off));
      }
    }
  });
  return img;
}

inline void write_ppm(const Image& img, std::ostream& out) {
  out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.rgb.data()), static_cast<std::streamsize>(img.rgb.size()));
}

inline void write_ppm(const Image& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot write '" + path + "'");
  write_ppm(img, out);
  out.flush();
  if (!out) throw Error(Errc::io, "write to '" + path + "' failed");
}

}  // namespace sphds

#endif  // SPHDS_RENDER_HPP
