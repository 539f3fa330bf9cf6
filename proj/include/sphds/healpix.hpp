#ifndef SPHDS_HEALPIX_HPP
#define SPHDS_HEALPIX_HPP

// HEALPix pixelation: 12 * nside^2 equal-area pixels whose centres lie on
// 4 * nside - 1 iso-latitude rings. Pixel indices are 0-based in both the
// ring and the nested ordering scheme.
//
// Faces (base pixels) are numbered 0..11: 0-3 north polar, 4-7 equatorial,
// 8-11 south polar, each group running eastwards from phi = 0. Inside a face,
// x grows towards the north-east and y towards the north-west, so nested
// children of a pixel are ordered south, east, west, north.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sphds/coords.hpp"
#include "sphds/error.hpp"

namespace sphds {

enum class Ordering { Ring, Nested };

inline const char* to_string(Ordering o) { return o == Ordering::Ring ? "ring" : "nested"; }

inline Ordering parse_ordering(const std::string& s) {
  if (s == "ring") return Ordering::Ring;
  if (s == "nested" || s == "nest") return Ordering::Nested;
  throw Error(Errc::parse, "unknown ordering '" + s + "' (expected ring or nested)");
}

/// Deepest supported level; keeps 12 * 4^j well inside int64_t.
inline constexpr int max_order = 29;

class Resolution {
 public:
  static Resolution from_order(int j) {
    if (j < 0 || j > max_order) {
      throw Error(Errc::invalid_resolution,
                  "resolution level must be in [0, " + std::to_string(max_order) + "]");
    }
    return Resolution(j);
  }

  static Resolution from_nside(std::int64_t nside) {
    if (nside < 1 || !std::has_single_bit(static_cast<std::uint64_t>(nside))) {
      throw Error(Errc::invalid_resolution,
                  "nside must be a power of two >= 1, got " + std::to_string(nside));
    }
    return from_order(std::countr_zero(static_cast<std::uint64_t>(nside)));
  }

  int order() const { return order_; }
  std::int64_t nside() const { return std::int64_t{1} << order_; }
  std::int64_t npix() const { return 12 * nside() * nside(); }
  std::int64_t nrings() const { return 4 * nside() - 1; }
  /// Pixels with index below this lie in the north polar cap.
  std::int64_t ncap() const { return 2 * nside() * (nside() - 1); }

  friend bool operator==(const Resolution&, const Resolution&) = default;

 private:
  explicit Resolution(int j) : order_(j) {}
  int order_;
};

inline Resolution resolution_from_nside(std::int64_t nside) { return Resolution::from_nside(nside); }

/// Solid angle of every pixel, 4 pi / npix.
inline double pixel_area(const Resolution& res) {
  return 4.0 * pi / static_cast<double>(res.npix());
}

struct PixelId {
  Ordering ordering = Ordering::Ring;
  std::int64_t index = 0;

  friend bool operator==(const PixelId&, const PixelId&) = default;
};

struct RingInfo {
  std::int64_t ring = 0;         // 1-based, north to south
  std::int64_t count = 0;        // pixels on the ring
  double z = 0.0;                // cos(theta) of the ring
  double theta = 0.0;            // colatitude of the ring
  std::int64_t first_index = 0;  // ring-scheme index of the first pixel
  bool shifted = false;          // first centre sits half a pixel east of phi = 0
};

namespace detail {

inline std::int64_t isqrt(std::int64_t v) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v) + 0.5));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

inline void check_index(const Resolution& res, std::int64_t p) {
  if (p < 0 || p >= res.npix()) {
    throw Error(Errc::domain, "pixel index " + std::to_string(p) + " outside [0, " +
                                  std::to_string(res.npix()) + ")");
  }
}

// Spread the low 32 bits of v onto the even bit positions.
inline std::uint64_t spread_bits(std::uint64_t v) {
  v &= 0xffffffffULL;
  v = (v | (v << 16)) & 0x0000ffff0000ffffULL;
  v = (v | (v << 8)) & 0x00ff00ff00ff00ffULL;
  v = (v | (v << 4)) & 0x0f0f0f0f0f0f0f0fULL;
  v = (v | (v << 2)) & 0x3333333333333333ULL;
  v = (v | (v << 1)) & 0x5555555555555555ULL;
  return v;
}

inline std::uint64_t compress_bits(std::uint64_t v) {
  v &= 0x5555555555555555ULL;
  v = (v | (v >> 1)) & 0x3333333333333333ULL;
  v = (v | (v >> 2)) & 0x0f0f0f0f0f0f0f0fULL;
  v = (v | (v >> 4)) & 0x00ff00ff00ff00ffULL;
  v = (v | (v >> 8)) & 0x0000ffff0000ffffULL;
  v = (v | (v >> 16)) & 0x00000000ffffffffULL;
  return v;
}

// Ring number (in units of nside) of each face's southernmost corner, and the
// azimuth (in units of pi/4) of each face's centre.
inline constexpr std::array<std::int64_t, 12> face_ring = {2, 2, 2, 2, 3, 3, 3, 3, 4, 4, 4, 4};
inline constexpr std::array<std::int64_t, 12> face_phi = {1, 3, 5, 7, 0, 2, 4, 6, 1, 3, 5, 7};

struct FaceXY {
  std::int64_t x;
  std::int64_t y;
  int face;
};

inline std::int64_t ring_of(const Resolution& res, std::int64_t p) {
  const std::int64_t ns = res.nside();
  const std::int64_t ncap = res.ncap();
  const std::int64_t npix = res.npix();
  if (p < ncap) return (1 + isqrt(1 + 2 * p)) >> 1;
  if (p < npix - ncap) return (p - ncap) / (4 * ns) + ns;
  return 4 * ns - ((1 + isqrt(2 * (npix - p) - 1)) >> 1);
}

inline std::int64_t xyf2nest(const Resolution& res, const FaceXY& f) {
  const auto inner = static_cast<std::int64_t>(spread_bits(static_cast<std::uint64_t>(f.x)) |
                                               (spread_bits(static_cast<std::uint64_t>(f.y)) << 1));
  return (static_cast<std::int64_t>(f.face) << (2 * res.order())) + inner;
}

inline FaceXY nest2xyf(const Resolution& res, std::int64_t p) {
  const std::int64_t per_face = res.nside() * res.nside();
  FaceXY out;
  out.face = static_cast<int>(p / per_face);
  const auto inner = static_cast<std::uint64_t>(p % per_face);
  out.x = static_cast<std::int64_t>(compress_bits(inner));
  out.y = static_cast<std::int64_t>(compress_bits(inner >> 1));
  return out;
}

inline std::int64_t xyf2ring(const Resolution& res, const FaceXY& f) {
  const std::int64_t ns = res.nside();
  const std::int64_t nl4 = 4 * ns;
  const std::int64_t jr = face_ring[f.face] * ns - f.x - f.y - 1;

  std::int64_t nr, before, shift;
  if (jr < ns) {
    nr = jr;
    before = 2 * nr * (nr - 1);
    shift = 0;
  } else if (jr > 3 * ns) {
    nr = nl4 - jr;
    before = res.npix() - 2 * (nr + 1) * nr;
    shift = 0;
  } else {
    nr = ns;
    before = res.ncap() + (jr - ns) * nl4;
    shift = (jr - ns) & 1;
  }

  std::int64_t jp = (face_phi[f.face] * nr + f.x - f.y + 1 + shift) / 2;
  if (jp > nl4) {
    jp -= nl4;
  } else if (jp < 1) {
    jp += nl4;
  }
  return before + jp - 1;
}

inline FaceXY ring2xyf(const Resolution& res, std::int64_t p) {
  const std::int64_t ns = res.nside();
  const std::int64_t nl2 = 2 * ns;
  const std::int64_t ncap = res.ncap();
  const std::int64_t npix = res.npix();

  std::int64_t iring, iphi, shift, nr;
  int face;
  if (p < ncap) {
    iring = (1 + isqrt(1 + 2 * p)) >> 1;
    iphi = p + 1 - 2 * iring * (iring - 1);
    shift = 0;
    nr = iring;
    face = static_cast<int>((iphi - 1) / nr);
  } else if (p < npix - ncap) {
    const std::int64_t ip = p - ncap;
    const std::int64_t tmp = ip / (4 * ns);
    iring = tmp + ns;
    iphi = ip - tmp * 4 * ns + 1;
    shift = (iring + ns) & 1;
    nr = ns;
    const std::int64_t ire = iring - ns + 1;
    const std::int64_t irm = nl2 + 2 - ire;
    const std::int64_t ifm = (iphi - ire / 2 + ns - 1) / ns;
    const std::int64_t ifp = (iphi - irm / 2 + ns - 1) / ns;
    if (ifp == ifm) {
      face = static_cast<int>(ifp | 4);
    } else if (ifp < ifm) {
      face = static_cast<int>(ifp);
    } else {
      face = static_cast<int>(ifm + 8);
    }
  } else {
    const std::int64_t ip = npix - p;
    iring = (1 + isqrt(2 * ip - 1)) >> 1;
    iphi = 4 * iring + 1 - (ip - 2 * iring * (iring - 1));
    shift = 0;
    nr = iring;
    iring = 2 * nl2 - iring;
    face = static_cast<int>(8 + (iphi - 1) / nr);
  }

  const std::int64_t irt = iring - face_ring[face] * ns + 1;
  std::int64_t ipt = 2 * iphi - face_phi[face] * nr - shift - 1;
  if (ipt >= nl2) ipt -= 8 * ns;
  return {(ipt - irt) >> 1, (-ipt - irt) >> 1, face};
}

inline FaceXY to_xyf(const Resolution& res, const PixelId& p) {
  check_index(res, p.index);
  return p.ordering == Ordering::Ring ? ring2xyf(res, p.index) : nest2xyf(res, p.index);
}

inline std::int64_t from_xyf(const Resolution& res, const FaceXY& f, Ordering o) {
  return o == Ordering::Ring ? xyf2ring(res, f) : xyf2nest(res, f);
}

}  // namespace detail

inline RingInfo ring_info(const Resolution& res, std::int64_t ring) {
  if (ring < 1 || ring > res.nrings()) {
    throw Error(Errc::domain, "ring " + std::to_string(ring) + " outside [1, " +
                                  std::to_string(res.nrings()) + "]");
  }
  const std::int64_t ns = res.nside();
  const auto dns = static_cast<double>(ns);
  const std::int64_t north = (ring > 2 * ns) ? 4 * ns - ring : ring;

  RingInfo info;
  info.ring = ring;
  if (north < ns) {
    info.count = 4 * north;
    info.shifted = true;
    const auto dn = static_cast<double>(north);
    info.z = 1.0 - dn * dn / (3.0 * dns * dns);
    // 1 - z = 2 sin^2(theta / 2) keeps precision close to the pole
    info.theta = 2.0 * std::asin(dn / (std::sqrt(6.0) * dns));
  } else {
    info.count = 4 * ns;
    info.shifted = ((north - ns) & 1) == 0;
    info.z = (2.0 * dns - static_cast<double>(north)) * 2.0 / (3.0 * dns);
    info.theta = std::acos(info.z);
  }
  if (north != ring) {
    info.z = -info.z;
    info.theta = pi - info.theta;
  }

  if (ring <= ns) {
    info.first_index = 2 * ring * (ring - 1);
  } else if (ring <= 3 * ns) {
    info.first_index = res.ncap() + (ring - ns) * 4 * ns;
  } else {
    info.first_index = res.npix() - 2 * north * (north + 1);
  }
  return info;
}

namespace detail {

inline void require_ordering(const PixelId& p, Ordering o, const char* op) {
  if (p.ordering != o) {
    throw Error(Errc::wrong_ordering, std::string(op) + ": expected " + to_string(o) +
                                          "-ordered pixel, got " + to_string(p.ordering));
  }
}

}  // namespace detail

inline SphCoord pix2ang_ring(const Resolution& res, const PixelId& p) {
  detail::require_ordering(p, Ordering::Ring, "pix2ang_ring");
  detail::check_index(res, p.index);
  const RingInfo info = ring_info(res, detail::ring_of(res, p.index));
  const auto slot = static_cast<double>(p.index - info.first_index);
  const double phi = (slot + (info.shifted ? 0.5 : 0.0)) * two_pi / static_cast<double>(info.count);
  return {info.theta, phi};
}

namespace detail {

  // Face reached when stepping off a face; row = 4 + 3 * dy + dx over the
// overflow direction. -1 marks corners where only three faces meet.
inline constexpr int face_table[9][12] = {
    {8, 9, 10, 11, -1, -1, -1, -1, 10, 11, 8, 9},  // S
    {5, 6, 7, 4, 8, 9, 10, 11, 9, 10, 11, 8},      // SE
    {-1, -1, -1, -1, 5, 6, 7, 4, -1, -1, -1, -1},  // E
    {4, 5, 6, 7, 11, 8, 9, 10, 11, 8, 9, 10},      // SW
    {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11},        // same face
    {1, 2, 3, 0, 0, 1, 2, 3, 5, 6, 7, 4},          // NE
    {-1, -1, -1, -1, 7, 4, 5, 6, -1, -1, -1, -1},  // W
    {3, 0, 1, 2, 3, 0, 1, 2, 4, 5, 6, 7},          // NW
    {2, 3, 0, 1, -1, -1, -1, -1, 0, 1, 2, 3}};     // N
// Coordinate fix-up on entering the new face: 1 mirror x, 2 mirror y, 4 swap.
inline constexpr int swap_table[9][12] = {
    {0, 0, 0, 0, 0, 0, 0, 0, 3, 3, 3, 3}, {0, 0, 0, 0, 0, 0, 0, 0, 6, 6, 6, 6},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0, 0, 0, 5, 5, 5, 5},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}, {5, 5, 5, 5, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}, {6, 6, 6, 6, 0, 0, 0, 0, 0, 0, 0, 0},
    {3, 3, 3, 3, 0, 0, 0, 0, 0, 0, 0, 0}};

// The pixel one step (dx, dy in {-1, 0, 1}) away in face coordinates, or
// nothing where only three faces meet.
inline std::optional<FaceXY> step(const Resolution& res, const FaceXY& c, int dx, int dy) {
  const std::int64_t ns = res.nside();
  std::int64_t x = c.x + dx;
  std::int64_t y = c.y + dy;
  int row = 4;
  if (x < 0) {
    x += ns;
    row -= 1;
  } else if (x >= ns) {
    x -= ns;
    row += 1;
  }
  if (y < 0) {
    y += ns;
    row -= 3;
  } else if (y >= ns) {
    y -= ns;
    row += 3;
  }
  const int face = face_table[row][c.face];
  if (face < 0) return std::nullopt;
  const int fix = swap_table[row][c.face];
  if (fix & 1) x = ns - x - 1;
  if (fix & 2) y = ns - y - 1;
  if (fix & 4) std::swap(x, y);
  return FaceXY{x, y, face};
}

// A point exactly on a pixel border goes to the smallest ring index among
// the pixels meeting there. jp and jm are the continuous edge-line
// coordinates; a whole value means the point sits on that line.
inline std::int64_t resolve_tie(const Resolution& res, double jp, double jm, double tt, double z, bool belt) {
  const std::int64_t ns = res.nside();
  const int order = res.order();
  auto ip = static_cast<std::int64_t>(jp);
  auto im = static_cast<std::int64_t>(jm);
  FaceXY base{};
  int dx = 0;
  int dy = 0;
  if (belt) {
    const std::int64_t fp = ip >> order;
    const std::int64_t fm = im >> order;
    base.face = static_cast<int>(fp == fm ? (fp | 4) : (fp < fm ? fp : fm + 8));
    base.x = im & (ns - 1);
    base.y = ns - (ip & (ns - 1)) - 1;
    if (std::floor(jm) == jm) dx = -1;
    if (std::floor(jp) == jp) dy = 1;
  } else {
    const int ntt = std::min(static_cast<int>(tt), 3);
    ip = std::min(ip, ns - 1);
    im = std::min(im, ns - 1);
    const bool jp_line = std::floor(jp) == jp;
    const bool jm_line = std::floor(jm) == jm;
    if (z > 0.0) {
      base = {ns - im - 1, ns - ip - 1, ntt};
      dx = jm_line ? 1 : 0;
      dy = jp_line ? 1 : 0;
    } else {
      base = {ip, im, ntt + 8};
      dx = jp_line ? -1 : 0;
      dy = jm_line ? -1 : 0;
    }
  }
  std::int64_t best = xyf2ring(res, base);
  for (const auto& [sx, sy] : {std::pair{dx, 0}, std::pair{0, dy}, std::pair{dx, dy}}) {
    if (sx == 0 && sy == 0) continue;
    if (const auto n = step(res, base, sx, sy)) best = std::min(best, xyf2ring(res, *n));
  }
  return best;
}

}  // namespace detail

inline PixelId ang2pix_ring(const Resolution& res, const SphCoord& a) {
  if (!std::isfinite(a.theta) || !std::isfinite(a.phi) || a.theta < 0.0 || a.theta > pi) {
    throw Error(Errc::domain, "ang2pix: invalid spherical coordinate");
  }
  const std::int64_t ns = res.nside();
  const auto dns = static_cast<double>(ns);
  const double z = std::cos(a.theta);
  const double za = std::abs(z);
  const double tt = normalize_azimuth(a.phi) / half_pi;  // in [0, 4)

  if (za <= 2.0 / 3.0) {
    const double t1 = dns * (0.5 + tt);
    const double t2 = dns * z * 0.75;
    const double jpc = t1 - t2;
    const double jmc = t1 + t2;
    if (std::floor(jpc) == jpc || std::floor(jmc) == jmc) {
      return {Ordering::Ring, detail::resolve_tie(res, jpc, jmc, tt, z, true)};
    }
    const auto jp = static_cast<std::int64_t>(jpc);  // ascending edge line
    const auto jm = static_cast<std::int64_t>(jmc);  // descending edge line
    const std::int64_t ir = ns + 1 + jp - jm;            // ring in {1, 2 nside + 1}
    const std::int64_t kshift = 1 - (ir & 1);
    std::int64_t ip = (jp + jm - ns + kshift + 1) / 2;
    ip = ((ip % (4 * ns)) + 4 * ns) % (4 * ns);
    return {Ordering::Ring, res.ncap() + (ir - 1) * 4 * ns + ip};
  }

  const double tp = tt - std::floor(tt);
  // sqrt(3 (1 - |z|)) computed from sin(theta/2) near the poles
  const double s = (z > 0.0) ? std::sin(0.5 * a.theta) : std::sin(0.5 * (pi - a.theta));
  const double tmp = dns * std::sqrt(6.0) * s;
  const double jpc = tp * tmp;
  const double jmc = (1.0 - tp) * tmp;
  if (std::floor(jpc) == jpc || std::floor(jmc) == jmc) {
    return {Ordering::Ring, detail::resolve_tie(res, jpc, jmc, tt, z, false)};
  }
  const auto jp = static_cast<std::int64_t>(jpc);
  const auto jm = static_cast<std::int64_t>(jmc);
  const std::int64_t ir = std::min(jp + jm + 1, ns);  // ring counted from the nearer pole
  std::int64_t ip = static_cast<std::int64_t>(tt * static_cast<double>(ir));
  ip = std::min(ip, 4 * ir - 1);
  if (z > 0.0) return {Ordering::Ring, 2 * ir * (ir - 1) + ip};
  return {Ordering::Ring, res.npix() - 2 * ir * (ir + 1) + ip};
}

inline PixelId nest2ring(const Resolution& res, const PixelId& p) {
  detail::require_ordering(p, Ordering::Nested, "nest2ring");
  detail::check_index(res, p.index);
  return {Ordering::Ring, detail::xyf2ring(res, detail::nest2xyf(res, p.index))};
}

inline PixelId ring2nest(const Resolution& res, const PixelId& p) {
  detail::require_ordering(p, Ordering::Ring, "ring2nest");
  detail::check_index(res, p.index);
  return {Ordering::Nested, detail::xyf2nest(res, detail::ring2xyf(res, p.index))};
}

/// Re-expresses a pixel in the requested ordering scheme.
inline PixelId convert(const Resolution& res, const PixelId& p, Ordering to) {
  if (p.ordering == to) {
    detail::check_index(res, p.index);
    return p;
  }
  return to == Ordering::Ring ? nest2ring(res, p) : ring2nest(res, p);
}

inline PixelId ang2pix(const Resolution& res, const SphCoord& a, Ordering o) {
  return convert(res, ang2pix_ring(res, a), o);
}

inline SphCoord pix2ang(const Resolution& res, const PixelId& p) {
  return pix2ang_ring(res, convert(res, p, Ordering::Ring));
}

/// The four level j+1 pixels tiling `p`; `res` is the level of `p`.
inline std::array<PixelId, 4> children(const Resolution& res, const PixelId& p) {
  detail::require_ordering(p, Ordering::Nested, "children");
  detail::check_index(res, p.index);
  if (res.order() >= max_order) {
    throw Error(Errc::invalid_resolution, "children: already at the deepest level");
  }
  const std::int64_t b = 4 * p.index;
  return {PixelId{Ordering::Nested, b}, PixelId{Ordering::Nested, b + 1},
          PixelId{Ordering::Nested, b + 2}, PixelId{Ordering::Nested, b + 3}};
}

inline PixelId parent(const Resolution& res, const PixelId& p) {
  detail::require_ordering(p, Ordering::Nested, "parent");
  detail::check_index(res, p.index);
  if (res.order() == 0) {
    throw Error(Errc::no_parent, "parent: base pixels have no parent");
  }
  return {Ordering::Nested, p.index / 4};
}

/// Pixels sharing an edge or a corner with `p`, sorted and without repeats,
/// expressed in the ordering of `p`. Most pixels have 8; pixels touching a
/// face corner where only three faces meet have 7 (6 at nside 1).
inline std::vector<PixelId> neighbors(const Resolution& res, const PixelId& p) {
  // Direction order: SW, W, NW, N, NE, E, SE, S in face (x, y) terms.
  static constexpr std::array<int, 8> xoffset = {-1, -1, 0, 1, 1, 1, 0, -1};
  static constexpr std::array<int, 8> yoffset = {0, 1, 1, 1, 0, -1, -1, -1};
  const detail::FaceXY c = detail::to_xyf(res, p);

  std::vector<PixelId> out;
  out.reserve(8);
  for (int i = 0; i < 8; ++i) {
    const auto n = detail::step(res, c, xoffset[i], yoffset[i]);
    if (!n) continue;
    const std::int64_t q = detail::from_xyf(res, *n, p.ordering);
    if (q != p.index) out.push_back({p.ordering, q});
  }
  std::sort(out.begin(), out.end(),
            [](const PixelId& a, const PixelId& b) { return a.index < b.index; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct AutoResolution {
  Resolution res;
  bool separated = false;
};

inline constexpr int default_auto_max_order = 13;

/// Smallest level at which every point falls in its own pixel. When no level
/// up to `j_max` separates them, returns `j_max` with `separated == false`.
inline AutoResolution auto_resolution(std::span<const SphCoord> points,
                                      int j_max = default_auto_max_order) {
  if (points.empty()) throw Error(Errc::domain, "auto_resolution: no points");
  if (j_max < 0 || j_max > max_order) {
    throw Error(Errc::invalid_resolution, "auto_resolution: j_max out of range");
  }
  std::vector<std::int64_t> pix(points.size());
  for (int j = 0; j <= j_max; ++j) {
    const Resolution res = Resolution::from_order(j);
    std::transform(points.begin(), points.end(), pix.begin(),
                   [&](const SphCoord& a) { return ang2pix_ring(res, a).index; });
    std::sort(pix.begin(), pix.end());
    if (std::adjacent_find(pix.begin(), pix.end()) == pix.end()) return {res, true};
  }
  return {Resolution::from_order(j_max), false};
}

}  // namespace sphds

#endif  // SPHDS_HEALPIX_HPP
