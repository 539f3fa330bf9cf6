#ifndef SPHDS_WINDOW_HPP
#define SPHDS_WINDOW_HPP

// Spherical windows: convex geodesic polygons, discs, or the whole sphere.
// Membership is boundary-inclusive.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sphds/coords.hpp"
#include "sphds/error.hpp"
#include "sphds/healpix.hpp"

namespace sphds {

inline constexpr std::size_t max_polygon_vertices = 64;
inline constexpr double window_plane_tolerance = 1e-12;

class SphericalWindow {
 public:
  enum class Kind { Full, Polygon, Disc };

  /// The whole sphere.
  SphericalWindow() = default;

  static SphericalWindow full_sphere() { return {}; }

  /// Convex polygon with great-circle edges. Either orientation is accepted;
  /// vertices are stored counter-clockwise as seen from outside the sphere.
  static SphericalWindow polygon(std::vector<SphCoord> vertices) {
    const std::size_t n = vertices.size();
    if (n < 3 || n > max_polygon_vertices) {
      throw Error(Errc::invalid_window, "polygon window needs 3 to " +
                                            std::to_string(max_polygon_vertices) + " vertices");
    }
    for (const auto& v : vertices) {
      if (!std::isfinite(v.theta) || !std::isfinite(v.phi) || v.theta < 0.0 || v.theta > pi) {
        throw Error(Errc::invalid_window, "polygon vertex has an invalid coordinate");
      }
    }
    std::vector<CartCoord> cart(n);
    std::transform(vertices.begin(), vertices.end(), cart.begin(),
                   [](const SphCoord& v) { return sph2car(v); });
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = i + 1; k < n; ++k) {
        const double d = dot(cart[i], cart[k]);
        if (d >= 1.0 - 1e-14) throw Error(Errc::invalid_window, "polygon has repeated vertices");
        if (d <= -1.0 + 1e-14) throw Error(Errc::invalid_window, "polygon has antipodal vertices");
      }
    }

    if (dot(cart[0], cross(cart[1], cart[2])) < 0.0) {
      std::reverse(vertices.begin(), vertices.end());
      std::reverse(cart.begin(), cart.end());
    }

    SphericalWindow w;
    w.kind_ = Kind::Polygon;
    w.vertices_ = std::move(vertices);
    w.normals_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const CartCoord nrm = cross(cart[i], cart[(i + 1) % n]);
      w.normals_[i] = (1.0 / nrm.norm()) * nrm;
    }
    for (const auto& nrm : w.normals_) {
      for (const auto& v : cart) {
        if (dot(nrm, v) < -window_plane_tolerance) {
          throw Error(Errc::invalid_window, "polygon window is not convex");
        }
      }
    }
    return w;
  }

  static SphericalWindow disc(SphCoord center, double radius) {
    if (!is_valid(center)) throw Error(Errc::invalid_window, "disc centre is not a valid coordinate");
    if (!(radius > 0.0 && radius < pi)) {
      throw Error(Errc::invalid_window, "disc radius must lie in (0, pi)");
    }
    SphericalWindow w;
    w.kind_ = Kind::Disc;
    w.center_ = center;
    w.center_vec_ = sph2car(center);
    w.radius_ = radius;
    return w;
  }

  Kind kind() const { return kind_; }
  const std::vector<SphCoord>& vertices() const { return vertices_; }
  SphCoord center() const { return center_; }
  double radius() const { return radius_; }

  bool contains(const CartCoord& p) const {
    switch (kind_) {
      case Kind::Full:
        return true;
      case Kind::Disc:
        return geodesic(center_vec_, p) <= radius_ + window_plane_tolerance;
      case Kind::Polygon:
        return std::all_of(normals_.begin(), normals_.end(), [&](const CartCoord& nrm) {
          return dot(nrm, p) >= -window_plane_tolerance;
        });
    }
    return false;
  }

  bool contains(const SphCoord& a) const { return contains(sph2car(a)); }

 private:
  Kind kind_ = Kind::Full;
  std::vector<SphCoord> vertices_;
  std::vector<CartCoord> normals_;  // inward edge-plane normals
  SphCoord center_;
  CartCoord center_vec_;
  double radius_ = 0.0;
};

inline bool contains(const SphericalWindow& w, const SphCoord& a) { return w.contains(a); }

/// Pixels whose centres lie in `w`, sorted by index in `ordering`.
inline std::vector<std::int64_t> window_pixels(const SphericalWindow& w, const Resolution& res,
                                               Ordering ordering) {
  double theta_lo = 0.0;
  double theta_hi = pi;
  if (w.kind() == SphericalWindow::Kind::Disc) {
    theta_lo = std::max(0.0, w.center().theta - w.radius() - 1e-9);
    theta_hi = std::min(pi, w.center().theta + w.radius() + 1e-9);
  }

  std::vector<std::int64_t> out;
  for (std::int64_t ring = 1; ring <= res.nrings(); ++ring) {
    const RingInfo info = ring_info(res, ring);
    if (info.theta < theta_lo || info.theta > theta_hi) continue;
    for (std::int64_t k = 0; k < info.count; ++k) {
      const PixelId p{Ordering::Ring, info.first_index + k};
      if (w.contains(pix2ang_ring(res, p))) out.push_back(convert(res, p, ordering).index);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sphds

#endif  // SPHDS_WINDOW_HPP
