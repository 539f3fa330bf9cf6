#ifndef SPHDS_COORDS_HPP
#define SPHDS_COORDS_HPP

// Point representations on the unit sphere and the conversions between them.
//
//   spherical:  theta = colatitude in [0, pi], phi = azimuth in [0, 2 pi)
//   geographic: lon in (-pi, pi], lat in [-pi/2, pi/2]   (radians)
//   Cartesian:  x = sin(theta) cos(phi), y = sin(theta) sin(phi), z = cos(theta)
//
// The x axis points through the prime meridian and z points north.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

#include "sphds/error.hpp"

namespace sphds {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double half_pi = 0.5 * std::numbers::pi;

struct SphCoord {
  double theta = 0.0;
  double phi = 0.0;

  friend bool operator==(const SphCoord&, const SphCoord&) = default;
};

struct GeoCoord {
  double lon = 0.0;
  double lat = 0.0;

  friend bool operator==(const GeoCoord&, const GeoCoord&) = default;
};

struct CartCoord {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }

  CartCoord& operator+=(const CartCoord& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  friend CartCoord operator+(CartCoord a, const CartCoord& b) { return a += b; }
  friend CartCoord operator-(const CartCoord& a, const CartCoord& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend CartCoord operator*(double s, const CartCoord& a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const CartCoord&, const CartCoord&) = default;
};

inline double dot(const CartCoord& a, const CartCoord& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline CartCoord cross(const CartCoord& a, const CartCoord& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// Maps any finite angle into [0, 2 pi).
inline double normalize_azimuth(double phi) {
  double r = std::fmod(phi, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;  // fmod of a tiny negative can round up to 2 pi
  return r;
}

inline bool is_valid(const SphCoord& a) {
  return std::isfinite(a.theta) && std::isfinite(a.phi) && a.theta >= 0.0 && a.theta <= pi &&
         a.phi >= 0.0 && a.phi < two_pi;
}

inline CartCoord sph2car(const SphCoord& a) {
  const double st = std::sin(a.theta);
  return {st * std::cos(a.phi), st * std::sin(a.phi), std::cos(a.theta)};
}

/// Inverse of sph2car for any nonzero vector; the input is normalized first.
/// Points on the polar axis get phi = 0.
inline SphCoord car2sph(const CartCoord& c) {
  const double r = c.norm();
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw Error(Errc::domain, "car2sph: zero or non-finite vector has no direction");
  }
  const double rho = std::hypot(c.x, c.y);
  SphCoord out;
  out.theta = std::atan2(rho, c.z);
  out.phi = (rho == 0.0) ? 0.0 : normalize_azimuth(std::atan2(c.y, c.x));
  return out;
}

/// Longitude of any real value is folded into the canonical range first.
inline SphCoord geo2sph(const GeoCoord& g) {
  SphCoord out;
  out.theta = std::clamp(half_pi - g.lat, 0.0, pi);
  if (out.theta == 0.0 || out.theta == pi) {
    out.phi = 0.0;
  } else {
    out.phi = normalize_azimuth(g.lon);
  }
  return out;
}

inline GeoCoord sph2geo(const SphCoord& a) {
  GeoCoord out;
  out.lat = half_pi - a.theta;
  out.lon = (a.phi <= pi) ? a.phi : a.phi - two_pi;
  return out;
}

/// Great-circle angle between two unit vectors, in [0, pi].
inline double geodesic(const CartCoord& a, const CartCoord& b) {
  return std::acos(std::clamp(dot(a, b), -1.0, 1.0));
}

inline double geodesic(const SphCoord& a, const SphCoord& b) {
  return geodesic(sph2car(a), sph2car(b));
}

/// Direction of the vector sum of the inputs, returned as a unit vector.
inline CartCoord sample_mean_direction(std::span<const CartCoord> points) {
  if (points.empty()) {
    throw Error(Errc::empty_data, "sample_mean_direction: no points");
  }
  CartCoord sum;
  for (const auto& p : points) sum += p;
  const double r = sum.norm();
  // Resultants this small relative to n are cancellation noise, not a direction.
  if (!(r > 1e-12 * static_cast<double>(points.size()))) {
    throw Error(Errc::undefined_direction, "sample_mean_direction: resultant vector is zero");
  }
  return (1.0 / r) * sum;
}

}  // namespace sphds

#endif  // SPHDS_COORDS_HPP
