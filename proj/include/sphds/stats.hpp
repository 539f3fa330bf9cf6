#ifndef SPHDS_STATS_HPP
#define SPHDS_STATS_HPP

// Statistics over a pixelated dataset. All windowed statistics work on
// pixel centres, i.e. after pixelation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sphds/coords.hpp"
#include "sphds/dataset.hpp"
#include "sphds/error.hpp"
#include "sphds/healpix.hpp"
#include "sphds/window.hpp"

namespace sphds {

namespace detail {

// Neumaier-compensated sum in index order.
class Accumulator {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double mean_of(std::span<const double> col, std::span<const std::size_t> rows) {
  Accumulator acc;
  for (const std::size_t r : rows) acc.add(col[r]);
  return acc.value() / static_cast<double>(rows.size());
}

inline std::vector<std::size_t> nonempty_rows(const SphericalDataset& ds, const SphericalWindow& w,
                                              const char* op) {
  auto rows = rows_in_window(ds, w);
  if (rows.empty()) throw Error(Errc::empty_data, std::string(op) + ": no rows in the window");
  return rows;
}

}  // namespace detail

inline double mean_value(const SphericalDataset& ds, const std::string& col) {
  const auto values = ds.column(col);
  if (values.empty()) throw Error(Errc::empty_data, "mean_value: dataset is empty");
  detail::Accumulator acc;
  for (const double v : values) acc.add(v);
  return acc.value() / static_cast<double>(values.size());
}

/// Fraction of windowed rows whose value strictly exceeds `alpha`.
inline double exprob(const SphericalDataset& ds, const SphericalWindow& w, const std::string& col,
                     double alpha) {
  const auto values = ds.column(col);
  const auto rows = detail::nonempty_rows(ds, w, "exprob");
  const auto above = std::count_if(rows.begin(), rows.end(), [&](std::size_t r) { return values[r] > alpha; });
  return static_cast<double>(above) / static_cast<double>(rows.size());
}

enum class Side { Smallest, Largest };

struct ExtremaRow {
  PixelId pix;
  double theta = 0.0;
  double phi = 0.0;
  double value = 0.0;
};

/// The `n` most extreme windowed rows on `side`, ordered by value (ascending
/// for Smallest, descending for Largest); ties go to the lower pixel index.
inline std::vector<ExtremaRow> extrema(const SphericalDataset& ds, const SphericalWindow& w,
                                       std::size_t n, Side side, const std::string& col) {
  const auto values = ds.column(col);
  auto rows = rows_in_window(ds, w);
  if (rows.size() < n) {
    throw Error(Errc::insufficient_rows, "extrema: window holds " + std::to_string(rows.size()) +
                                             " rows, " + std::to_string(n) + " requested");
  }
  // rows are ascending in pixel index, so comparing on value alone and
  // falling back to row order breaks ties by pixel index
  auto less = [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return side == Side::Smallest ? values[a] < values[b] : values[a] > values[b];
    return a < b;
  };
  std::partial_sort(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n), rows.end(), less);

  std::vector<ExtremaRow> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = rows[i];
    const SphCoord c = ds.center(r);
    out.push_back({PixelId{ds.ordering(), ds.pixels()[r]}, c.theta, c.phi, values[r]});
  }
  return out;
}

/// Sturges' rule, ceil(log2 n) + 1.
inline std::size_t sturges_bins(std::size_t n) {
  if (n <= 1) return 1;
  return static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n)))) + 1;
}

/// Shannon entropy (natural log) of an equal-width histogram of the windowed
/// values over [min, max]. `bins` defaults to Sturges' rule.
inline double entropy(const SphericalDataset& ds, const SphericalWindow& w, const std::string& col,
                      std::optional<std::size_t> bins = std::nullopt) {
  const auto values = ds.column(col);
  const auto rows = detail::nonempty_rows(ds, w, "entropy");
  const std::size_t k = bins.value_or(sturges_bins(rows.size()));
  if (k == 0) throw Error(Errc::domain, "entropy: bin count must be positive");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const std::size_t r : rows) {
    lo = std::min(lo, values[r]);
    hi = std::max(hi, values[r]);
  }
  if (!(hi > lo)) return 0.0;

  std::vector<std::size_t> counts(k, 0);
  const double width = hi - lo;
  for (const std::size_t r : rows) {
    auto b = static_cast<std::size_t>((values[r] - lo) / width * static_cast<double>(k));
    ++counts[std::min(b, k - 1)];
  }
  const auto total = static_cast<double>(rows.size());
  detail::Accumulator h;
  for (const std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h.add(-p * std::log(p));
  }
  return h.value();
}

/// Area (steradians) of the excursion set {value >= level}.
inline double fmf(const SphericalDataset& ds, double level, const std::string& col) {
  const auto values = ds.column(col);
  const auto n = std::count_if(values.begin(), values.end(), [&](double v) { return v >= level; });
  return static_cast<double>(n) * pixel_area(ds.resolution());
}

/// fmf divided by the total observed area, n * pixel_area.
inline double fmf_relative(const SphericalDataset& ds, double level, const std::string& col) {
  if (ds.empty()) throw Error(Errc::empty_data, "fmf_relative: dataset is empty");
  return fmf(ds, level, col) / (static_cast<double>(ds.size()) * pixel_area(ds.resolution()));
}

namespace detail {

inline std::vector<CartCoord> centers_cart(const SphericalDataset& ds) {
  std::vector<CartCoord> out(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) out[i] = sph2car(ds.center(i));
  return out;
}

inline void require_pairs(const SphericalDataset& ds) {
  if (ds.size() < 2) throw Error(Errc::insufficient_rows, "min_dist: needs at least two rows");
}

}  // namespace detail

/// Minimum geodesic distance between pixel centres by scanning every pair.
inline double min_dist_exact(const SphericalDataset& ds) {
  detail::require_pairs(ds);
  const auto c = detail::centers_cart(ds);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t k = i + 1; k < c.size(); ++k) best = std::min(best, geodesic(c[i], c[k]));
  }
  return best;
}

/// Same result as min_dist_exact, visiting only pairs whose rings are close
/// enough in colatitude to beat the current minimum.
inline double min_dist_pruned(const SphericalDataset& ds) {
  detail::require_pairs(ds);
  struct Entry {
    double theta;
    CartCoord v;
  };
  std::vector<Entry> e(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const SphCoord a = ds.center(i);
    e[i] = {a.theta, sph2car(a)};
  }
  // all centres on a ring share theta bitwise, so this groups rows by ring
  std::stable_sort(e.begin(), e.end(), [](const Entry& a, const Entry& b) { return a.theta < b.theta; });

  // |delta theta| never exceeds the geodesic; the slack covers acos rounding
  constexpr double slack = 1e-6;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t k = i + 1; k < e.size(); ++k) {
      if (e[k].theta - e[i].theta > best + slack) break;
      best = std::min(best, geodesic(e[i].v, e[k].v));
    }
  }
  return best;
}

inline constexpr std::size_t min_dist_exact_limit = 10000;

inline double min_dist(const SphericalDataset& ds) {
  return ds.size() <= min_dist_exact_limit ? min_dist_exact(ds) : min_dist_pruned(ds);
}

enum class Axis { Theta, Phi };

inline const char* to_string(Axis a) { return a == Axis::Theta ? "theta" : "phi"; }

struct Histogram {
  Axis axis = Axis::Theta;
  std::vector<double> edges;   // bins + 1 increasing edges
  std::vector<std::size_t> counts;
  std::vector<double> means;   // NaN for empty bins
};

namespace detail {

inline Histogram angular_histogram(const SphericalDataset& ds, std::span<const double> values,
                                   Axis axis, std::size_t bins) {
  if (bins == 0) throw Error(Errc::domain, "ang_distribution: bin count must be positive");
  const double range = axis == Axis::Theta ? pi : two_pi;
  Histogram h;
  h.axis = axis;
  h.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = range * static_cast<double>(b) / static_cast<double>(bins);
  h.counts.assign(bins, 0);
  std::vector<Accumulator> sums(bins);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const SphCoord c = ds.center(i);
    const double x = axis == Axis::Theta ? c.theta : c.phi;
    auto b = static_cast<std::size_t>(x / range * static_cast<double>(bins));
    b = std::min(b, bins - 1);
    ++h.counts[b];
    sums[b].add(values[i]);
  }
  h.means.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    h.means[b] = h.counts[b] ? sums[b].value() / static_cast<double>(h.counts[b])
                             : std::numeric_limits<double>::quiet_NaN();
  }
  return h;
}

}  // namespace detail

inline constexpr std::size_t default_histogram_bins = 20;

/// Marginal distributions over colatitude ([0, pi]) and azimuth ([0, 2 pi)):
/// per-bin row counts and per-bin means of `col`.
inline std::pair<Histogram, Histogram> ang_distribution(const SphericalDataset& ds, const std::string& col,
                                                        std::size_t bins_theta = default_histogram_bins,
                                                        std::size_t bins_phi = default_histogram_bins) {
  if (ds.empty()) throw Error(Errc::empty_data, "ang_distribution: dataset is empty");
  const auto values = ds.column(col);
  return {detail::angular_histogram(ds, values, Axis::Theta, bins_theta),
          detail::angular_histogram(ds, values, Axis::Phi, bins_phi)};
}

/// printf("%.<digits>g"), the precision every report uses.
inline std::string format_sig(double v, int digits = 7) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline void write_histograms(std::ostream& out, std::span<const Histogram> hists) {
  out << "axis,bin_lo,bin_hi,count,mean\n";
  for (const auto& h : hists) {
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      out << to_string(h.axis) << ',' << format_sig(h.edges[b]) << ',' << format_sig(h.edges[b + 1]) << ','
          << h.counts[b] << ',' << format_sig(h.means[b]) << '\n';
    }
  }
}

/// Mean of `col` inside the window over its mean on the whole dataset.
inline double asymmetry_mean(const SphericalDataset& ds, const SphericalWindow& w,
                             const std::string& col = "I") {
  const auto rows = detail::nonempty_rows(ds, w, "asymmetry_mean");
  return detail::mean_of(ds.column(col), rows) / mean_value(ds, col);
}

/// Mean of the `n` windowed extrema of `col` over its mean on the whole
/// dataset.
inline double asymmetry_extrema(const SphericalDataset& ds, const SphericalWindow& w, std::size_t n,
                                const std::string& col = "I", Side side = Side::Smallest) {
  if (n == 0) throw Error(Errc::domain, "asymmetry_extrema: n must be positive");
  const auto rows = extrema(ds, w, n, side, col);
  detail::Accumulator acc;
  for (const auto& r : rows) acc.add(r.value);
  return (acc.value() / static_cast<double>(n)) / mean_value(ds, col);
}

}  // namespace sphds

#endif  // SPHDS_STATS_HPP
