#ifndef SPHDS_DATASET_HPP
#define SPHDS_DATASET_HPP

// Point tables (raw located observations) and the sparse pixel-indexed
// dataset they are pixelated into, plus CSV ingestion and the text file
// format used to persist datasets.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sphds/coords.hpp"
#include "sphds/csv.hpp"
#include "sphds/error.hpp"
#include "sphds/healpix.hpp"
#include "sphds/parallel.hpp"
#include "sphds/window.hpp"

namespace sphds {

/// Located observations before pixelation. Columns are stored column-major:
/// `columns[c][row]`.
struct PointTable {
  std::vector<SphCoord> coords;
  std::vector<std::string> column_names;
  std::vector<std::vector<double>> columns;
  std::string provenance;
  std::size_t dropped_rows = 0;  // rows the ingesting reader rejected

  PointTable() = default;
  explicit PointTable(std::vector<std::string> names)
      : column_names(std::move(names)), columns(column_names.size()) {}

  std::size_t size() const { return coords.size(); }
  bool empty() const { return coords.empty(); }

  void add_row(const SphCoord& a, std::span<const double> values) {
    if (!is_valid(a)) throw Error(Errc::domain, "point table: invalid spherical coordinate");
    if (values.size() != columns.size()) {
      throw Error(Errc::domain, "point table: row has " + std::to_string(values.size()) +
                                    " values, expected " + std::to_string(columns.size()));
    }
    coords.push_back(a);
    for (std::size_t c = 0; c < values.size(); ++c) columns[c].push_back(values[c]);
  }
};

enum class DedupPolicy { KeepFirst, Fail };

namespace detail {

inline void check_column_names(const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto& n = names[i];
    if (n.empty() || n.find_first_of(", \t\r\n") != std::string::npos) {
      throw Error(Errc::parse, "invalid column name '" + n + "'");
    }
    for (std::size_t k = 0; k < i; ++k) {
      if (names[k] == n) throw Error(Errc::parse, "duplicate column name '" + n + "'");
    }
  }
}

}  // namespace detail

/// Sparse pixel -> values table at a fixed resolution and ordering. Rows are
/// sorted by strictly increasing pixel index; every column has one value per
/// row. Immutable once built.
class SphericalDataset {
 public:
  SphericalDataset(Resolution res, Ordering ordering, std::vector<std::string> names,
                   std::vector<std::int64_t> pix, std::vector<std::vector<double>> columns)
      : res_(res),
        ordering_(ordering),
        names_(std::move(names)),
        pix_(std::move(pix)),
        columns_(std::move(columns)) {
    detail::check_column_names(names_);
    if (columns_.size() != names_.size()) {
      throw Error(Errc::domain, "dataset: column count does not match column names");
    }
    for (const auto& col : columns_) {
      if (col.size() != pix_.size()) throw Error(Errc::domain, "dataset: ragged column");
    }
    for (std::size_t i = 0; i < pix_.size(); ++i) {
      if (pix_[i] < 0 || pix_[i] >= res_.npix()) {
        throw Error(Errc::domain, "dataset: pixel " + std::to_string(pix_[i]) +
                                      " out of range for nside " + std::to_string(res_.nside()));
      }
      if (i > 0 && pix_[i] <= pix_[i - 1]) {
        throw Error(Errc::duplicate_pixel, "dataset: pixel indices must be strictly increasing");
      }
    }
  }

  const Resolution& resolution() const { return res_; }
  Ordering ordering() const { return ordering_; }
  std::size_t size() const { return pix_.size(); }
  bool empty() const { return pix_.empty(); }
  std::span<const std::int64_t> pixels() const { return pix_; }
  const std::vector<std::string>& column_names() const { return names_; }

  bool has_column(const std::string& name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
  }

  std::span<const double> column(const std::string& name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw Error(Errc::unknown_column, "dataset has no column '" + name + "'");
    return columns_[static_cast<std::size_t>(it - names_.begin())];
  }

  /// Centre of the pixel holding row `row`.
  SphCoord center(std::size_t row) const { return pix2ang(res_, {ordering_, pix_.at(row)}); }

  std::optional<std::size_t> find(std::int64_t pix) const {
    const auto it = std::lower_bound(pix_.begin(), pix_.end(), pix);
    if (it == pix_.end() || *it != pix) return std::nullopt;
    return static_cast<std::size_t>(it - pix_.begin());
  }

  /// Copy of the rows listed in `rows` (ascending).
  SphericalDataset select(std::span<const std::size_t> rows) const {
    std::vector<std::int64_t> pix;
    pix.reserve(rows.size());
    std::vector<std::vector<double>> cols(columns_.size());
    for (auto& c : cols) c.reserve(rows.size());
    for (const std::size_t r : rows) {
      pix.push_back(pix_.at(r));
      for (std::size_t c = 0; c < cols.size(); ++c) cols[c].push_back(columns_[c][r]);
    }
    return {res_, ordering_, names_, std::move(pix), std::move(cols)};
  }

  SphericalDataset with_column(const std::string& name, std::vector<double> values) const {
    if (values.size() != size()) throw Error(Errc::domain, "with_column: length mismatch");
    auto names = names_;
    auto cols = columns_;
    const auto it = std::find(names.begin(), names.end(), name);
    if (it != names.end()) {
      cols[static_cast<std::size_t>(it - names.begin())] = std::move(values);
    } else {
      names.push_back(name);
      cols.push_back(std::move(values));
    }
    return {res_, ordering_, std::move(names), pix_, std::move(cols)};
  }

  friend bool operator==(const SphericalDataset& a, const SphericalDataset& b) {
    return a.res_ == b.res_ && a.ordering_ == b.ordering_ && a.names_ == b.names_ &&
           a.pix_ == b.pix_ && a.columns_ == b.columns_;
  }

 private:
  Resolution res_;
  Ordering ordering_;
  std::vector<std::string> names_;
  std::vector<std::int64_t> pix_;
  std::vector<std::vector<double>> columns_;
};

/// Requests automatic choice of the smallest separating resolution.
struct AutoNside {
  int j_max = default_auto_max_order;
};

using ResolutionChoice = std::variant<Resolution, AutoNside>;

struct Pixelization {
  SphericalDataset dataset;
  std::size_t duplicates = 0;  // rows dropped because their pixel was taken
  bool separated = true;       // false only when AutoNside hit j_max
};

/// Maps each point to its pixel and builds the dataset. With KeepFirst the
/// earliest row (input order) of each pixel survives; with Fail a collision
/// throws `Errc::duplicate_pixel`.
inline Pixelization from_points(const PointTable& t, const ResolutionChoice& choice,
                                Ordering ordering, DedupPolicy dedup, unsigned threads = 1) {
  if (t.empty()) throw Error(Errc::empty_data, "from_points: point table is empty");

  bool separated = true;
  Resolution res = Resolution::from_order(0);
  if (const auto* fixed = std::get_if<Resolution>(&choice)) {
    res = *fixed;
  } else {
    const auto a = auto_resolution(t.coords, std::get<AutoNside>(choice).j_max);
    res = a.res;
    separated = a.separated;
  }

  const std::size_t n = t.size();
  std::vector<std::int64_t> pix(n);
  parallel_blocks(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) pix[i] = ang2pix(res, t.coords[i], ordering).index;
  });

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pix[a] < pix[b]; });

  std::vector<std::size_t> keep;
  keep.reserve(n);
  for (const std::size_t r : order) {
    if (!keep.empty() && pix[keep.back()] == pix[r]) {
      if (dedup == DedupPolicy::Fail) {
        throw Error(Errc::duplicate_pixel, "from_points: rows " + std::to_string(keep.back()) +
                                               " and " + std::to_string(r) + " share pixel " +
                                               std::to_string(pix[r]));
      }
      continue;
    }
    keep.push_back(r);
  }

  std::vector<std::int64_t> out_pix(keep.size());
  std::vector<std::vector<double>> cols(t.columns.size(), std::vector<double>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out_pix[i] = pix[keep[i]];
    for (std::size_t c = 0; c < cols.size(); ++c) cols[c][i] = t.columns[c][keep[i]];
  }
  return {SphericalDataset(res, ordering, t.column_names, std::move(out_pix), std::move(cols)),
          n - keep.size(), separated};
}

/// Rows whose pixel centre lies in `w`, ascending.
inline std::vector<std::size_t> rows_in_window(const SphericalDataset& ds, const SphericalWindow& w) {
  std::vector<std::size_t> rows;
  if (w.kind() == SphericalWindow::Kind::Full) {
    rows.resize(ds.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
  }
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (w.contains(ds.center(i))) rows.push_back(i);
  }
  return rows;
}

inline SphericalDataset subset(const SphericalDataset& ds, const SphericalWindow& w) {
  return ds.select(rows_in_window(ds, w));
}

// ---------------------------------------------------------------------------
// CSV ingestion

enum class AngleUnit { Degrees, Radians };

inline constexpr double missing_sentinel = -9999.0;

struct GeoCsvOptions {
  std::string lon_col = "lon";
  std::string lat_col = "lat";
  std::vector<std::string> value_cols;
  AngleUnit unit = AngleUnit::Degrees;
  double lon_offset = 0.0;  // radians, added before normalization
  bool has_header = true;
  std::vector<double> sentinels = {missing_sentinel};
};

struct SphCsvOptions {
  std::string theta_col = "theta";
  std::string phi_col = "phi";
  std::vector<std::string> value_cols;
  AngleUnit unit = AngleUnit::Radians;
  bool has_header = true;
  std::vector<double> sentinels = {missing_sentinel};
};

struct CartCsvOptions {
  std::string x_col = "x";
  std::string y_col = "y";
  std::string z_col = "z";
  std::optional<CartCoord> center;  // nullopt: subtract the per-column mean
  std::string value_name = "I";
  bool has_header = true;
};

namespace detail {

// Parses the requested columns of every row; rows with a missing, non-finite
// or sentinel entry are counted and skipped.
inline std::vector<std::vector<double>> numeric_rows(const csv::Table& table,
                                                     const std::vector<std::string>& names,
                                                     std::span<const double> sentinels,
                                                     std::size_t& dropped) {
  std::vector<std::size_t> idx;
  idx.reserve(names.size());
  for (const auto& n : names) idx.push_back(table.column(n));

  std::vector<std::vector<double>> out;
  out.reserve(table.rows.size());
  std::vector<double> vals(names.size());
  for (const auto& row : table.rows) {
    bool ok = true;
    for (std::size_t k = 0; k < idx.size() && ok; ++k) {
      const auto v = idx[k] < row.size() ? csv::parse_number(row[idx[k]]) : std::nullopt;
      ok = v && std::isfinite(*v) &&
           std::find(sentinels.begin(), sentinels.end(), *v) == sentinels.end();
      if (ok) vals[k] = *v;
    }
    if (ok) {
      out.push_back(vals);
    } else {
      ++dropped;
    }
  }
  return out;
}

inline std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline void require_rows(const PointTable& t, const std::string& source) {
  if (t.empty()) throw Error(Errc::empty_data, "no usable rows in '" + source + "'");
}

}  // namespace detail

/// Longitude/latitude rows. Rows with missing, non-finite or sentinel
/// entries, or with |lat| > 90 deg or |lon| > 360 deg, are dropped.
inline PointTable ingest_geo_csv(std::istream& in, const GeoCsvOptions& opt,
                                 const std::string& source = "<stream>") {
  const csv::Table table = csv::read(in, opt.has_header);
  PointTable t(opt.value_cols);
  t.provenance = source;
  const auto rows = detail::numeric_rows(table, detail::concat({opt.lon_col, opt.lat_col}, opt.value_cols),
                                         opt.sentinels, t.dropped_rows);
  const double scale = opt.unit == AngleUnit::Degrees ? pi / 180.0 : 1.0;
  for (const auto& r : rows) {
    const double lon = r[0] * scale;
    const double lat = r[1] * scale;
    if (std::abs(lat) > half_pi || std::abs(lon) > two_pi) {
      ++t.dropped_rows;
      continue;
    }
    t.add_row(geo2sph({lon + opt.lon_offset, lat}), std::span(r).subspan(2));
  }
  detail::require_rows(t, source);
  return t;
}

inline PointTable ingest_geo_csv(const std::string& path, const GeoCsvOptions& opt) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open '" + path + "'");
  return ingest_geo_csv(in, opt, path);
}

/// Colatitude/azimuth rows; rows with theta outside [0, pi] are dropped and
/// azimuths are folded into [0, 2 pi).
inline PointTable ingest_sph_csv(std::istream& in, const SphCsvOptions& opt,
                                 const std::string& source = "<stream>") {
  const csv::Table table = csv::read(in, opt.has_header);
  PointTable t(opt.value_cols);
  t.provenance = source;
  const auto rows = detail::numeric_rows(table, detail::concat({opt.theta_col, opt.phi_col}, opt.value_cols),
                                         opt.sentinels, t.dropped_rows);
  const double scale = opt.unit == AngleUnit::Degrees ? pi / 180.0 : 1.0;
  for (const auto& r : rows) {
    const double theta = r[0] * scale;
    if (theta < 0.0 || theta > pi) {
      ++t.dropped_rows;
      continue;
    }
    const double phi = (theta == 0.0 || theta == pi) ? 0.0 : normalize_azimuth(r[1] * scale);
    t.add_row({theta, phi}, std::span(r).subspan(2));
  }
  detail::require_rows(t, source);
  return t;
}

inline PointTable ingest_sph_csv(const std::string& path, const SphCsvOptions& opt) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open '" + path + "'");
  return ingest_sph_csv(in, opt, path);
}

/// Cartesian surface samples of a star-shaped body. Points are centred
/// (on `center`, or on their mean), mapped to directions, and carry their
/// radial distance from the centre as the single value column.
inline PointTable ingest_cart_csv(std::istream& in, const CartCsvOptions& opt,
                                  const std::string& source = "<stream>") {
  const csv::Table table = csv::read(in, opt.has_header);
  PointTable t({opt.value_name});
  t.provenance = source;
  const std::vector<double> no_sentinels;
  const auto rows = detail::numeric_rows(table, {opt.x_col, opt.y_col, opt.z_col}, no_sentinels,
                                         t.dropped_rows);
  if (rows.empty()) throw Error(Errc::empty_data, "no usable rows in '" + source + "'");

  CartCoord c;
  if (opt.center) {
    c = *opt.center;
  } else {
    for (const auto& r : rows) c += CartCoord{r[0], r[1], r[2]};
    c = (1.0 / static_cast<double>(rows.size())) * c;
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const CartCoord p = CartCoord{rows[i][0], rows[i][1], rows[i][2]} - c;
    const double r = p.norm();
    if (!(r > 0.0)) {
      throw Error(Errc::domain, "ingest_cart_csv: point " + std::to_string(i) + " coincides with the centre");
    }
    const double value = r;
    t.add_row(car2sph(p), std::span(&value, 1));
  }
  return t;
}

inline PointTable ingest_cart_csv(const std::string& path, const CartCsvOptions& opt) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open '" + path + "'");
  return ingest_cart_csv(in, opt, path);
}

// ---------------------------------------------------------------------------
// Persistence
//
//   sphds v1 nside=<int> ordering=<ring|nested> columns=<a,b,...>
//   <pix> <v_a> <v_b> ...
//
// Values are written as shortest round-trip decimals.

inline std::string format_roundtrip(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline void save(const SphericalDataset& ds, std::ostream& out) {
  out << "sphds v1 nside=" << ds.resolution().nside() << " ordering=" << to_string(ds.ordering())
      << " columns=";
  const auto& names = ds.column_names();
  for (std::size_t c = 0; c < names.size(); ++c) out << (c ? "," : "") << names[c];
  out << '\n';

  std::vector<std::span<const double>> cols;
  for (const auto& n : names) cols.push_back(ds.column(n));
  const auto pix = ds.pixels();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out << pix[i];
    for (const auto& col : cols) out << ' ' << format_roundtrip(col[i]);
    out << '\n';
  }
}

inline void save(const SphericalDataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot write '" + path + "'");
  save(ds, out);
  out.flush();
  if (!out) throw Error(Errc::io, "write to '" + path + "' failed");
}

inline SphericalDataset load(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::parse, "dataset file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::istringstream hs(line);
  std::string magic, version, nside_kv, ordering_kv, columns_kv, extra;
  hs >> magic >> version >> nside_kv >> ordering_kv;
  const bool has_columns = static_cast<bool>(hs >> columns_kv);
  if (magic != "sphds" || version != "v1" || nside_kv.rfind("nside=", 0) != 0 ||
      ordering_kv.rfind("ordering=", 0) != 0 || (has_columns && columns_kv.rfind("columns=", 0) != 0) ||
      (hs >> extra)) {
    throw Error(Errc::parse, "malformed dataset header: '" + line + "'");
  }

  std::int64_t nside = 0;
  const std::string nside_str = nside_kv.substr(6);
  const auto [p, ec] = std::from_chars(nside_str.data(), nside_str.data() + nside_str.size(), nside);
  if (ec != std::errc() || p != nside_str.data() + nside_str.size()) {
    throw Error(Errc::parse, "malformed nside in dataset header");
  }
  const Resolution res = Resolution::from_nside(nside);
  const Ordering ordering = parse_ordering(ordering_kv.substr(9));

  std::vector<std::string> names;
  const std::string cols_str = has_columns ? columns_kv.substr(8) : std::string();
  if (!cols_str.empty()) {
    for (auto& f : csv::split_record(cols_str)) names.push_back(std::move(f));
  }

  std::vector<std::int64_t> pix;
  std::vector<std::vector<double>> cols(names.size());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> toks;
    while (ls >> tok) toks.push_back(tok);
    if (toks.size() != names.size() + 1) {
      throw Error(Errc::parse, "dataset line " + std::to_string(lineno) + ": expected " +
                                   std::to_string(names.size() + 1) + " fields");
    }
    std::int64_t q = 0;
    const auto r = std::from_chars(toks[0].data(), toks[0].data() + toks[0].size(), q);
    if (r.ec != std::errc() || r.ptr != toks[0].data() + toks[0].size()) {
      throw Error(Errc::parse, "dataset line " + std::to_string(lineno) + ": bad pixel index");
    }
    pix.push_back(q);
    for (std::size_t c = 0; c < names.size(); ++c) {
      double v = 0.0;
      const auto& s = toks[c + 1];
      const auto rv = std::from_chars(s.data(), s.data() + s.size(), v);
      if (rv.ec != std::errc() || rv.ptr != s.data() + s.size()) {
        throw Error(Errc::parse, "dataset line " + std::to_string(lineno) + ": bad value '" + s + "'");
      }
      cols[c].push_back(v);
    }
  }
  try {
    return SphericalDataset(res, ordering, std::move(names), std::move(pix), std::move(cols));
  } catch (const Error& e) {
    throw Error(Errc::parse, std::string("dataset file inconsistent: ") + e.what());
  }
}

inline SphericalDataset load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open '" + path + "'");
  return load(in);
}

}  // namespace sphds

#endif  // SPHDS_DATASET_HPP
