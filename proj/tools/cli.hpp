#ifndef SPHDS_TOOLS_CLI_HPP
#define SPHDS_TOOLS_CLI_HPP

// Batch front end. `run_cli` is the whole program minus process plumbing so
// tests can drive it in-process.
//
// Exit codes: 0 success, 2 usage, 3 empty/insufficient data or ingestion
// failure, 4 separation failure with --nside auto, 5 I/O.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sphds/sphds.hpp"

namespace sphds::cli {

enum Exit : int { ok = 0, usage = 2, data = 3, separation = 4, io = 5 };

struct Failure {
  int code;
  std::string message;
};

inline int exit_code_for(Errc e) {
  switch (e) {
    case Errc::invalid_resolution:
    case Errc::invalid_window:
    case Errc::parse:
    case Errc::unknown_column:
    case Errc::wrong_ordering:
      return usage;
    case Errc::io:
      return io;
    default:
      return data;
  }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline double parse_double(const std::string& s, const std::string& what) {
  const auto v = csv::parse_number(s);
  if (!v || !std::isfinite(*v)) throw Failure{usage, "malformed number '" + s + "' in " + what};
  return *v;
}

inline std::optional<SphericalWindow> parse_window(const std::string& polygon, const std::string& disc,
                                                   bool degrees) {
  const double scale = degrees ? pi / 180.0 : 1.0;
  if (!polygon.empty() && !disc.empty()) throw Failure{usage, "give at most one of --win-polygon, --win-disc"};
  try {
    if (!polygon.empty()) {
      std::vector<SphCoord> verts;
      for (const auto& pair : split(polygon, ';')) {
        const auto parts = split(pair, ',');
        if (parts.size() != 2) throw Failure{usage, "malformed --win-polygon vertex '" + pair + "'"};
        const double theta = parse_double(parts[0], "--win-polygon") * scale;
        const double phi = parse_double(parts[1], "--win-polygon") * scale;
        verts.push_back({theta, normalize_azimuth(phi)});
      }
      return SphericalWindow::polygon(std::move(verts));
    }
    if (!disc.empty()) {
      const auto parts = split(disc, ',');
      if (parts.size() != 3) throw Failure{usage, "malformed --win-disc '" + disc + "' (expected theta,phi,r)"};
      const double theta = parse_double(parts[0], "--win-disc") * scale;
      const double phi = parse_double(parts[1], "--win-disc") * scale;
      const double r = parse_double(parts[2], "--win-disc") * scale;
      return SphericalWindow::disc({theta, normalize_azimuth(phi)}, r);
    }
  } catch (const Error& e) {
    throw Failure{usage, e.what()};
  }
  return std::nullopt;
}

inline SphericalDataset load_dataset(const std::string& path) {
  try {
    return load(path);
  } catch (const Error& e) {
    throw Failure{io, e.what()};
  }
}

struct WindowFlags {
  std::string polygon;
  std::string disc;
  bool degrees = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--win-polygon", polygon, "convex polygon window \"theta1,phi1;theta2,phi2;...\"");
    cmd->add_option("--win-disc", disc, "disc window \"theta,phi,radius\"");
    cmd->add_flag("--deg", degrees, "window angles are in degrees");
  }

  SphericalWindow window() const { return parse_window(polygon, disc, degrees).value_or(SphericalWindow{}); }
};

// ---------------------------------------------------------------------------

struct ConvertArgs {
  std::string in;
  std::string kind = "geo";
  std::string lon_col = "lon", lat_col = "lat";
  std::string theta_col = "theta", phi_col = "phi";
  std::string x_col = "x", y_col = "y", z_col = "z";
  std::string center = "centroid";
  std::string value_cols;
  std::string unit;
  double lon_offset_deg = 0.0;
  bool no_header = false;
  std::string nside = "auto";
  int j_max = default_auto_max_order;
  std::string ordering = "nested";
  std::string dedup = "first";
  std::string out;
  unsigned threads = 1;
};

// "src" or "src:name" -> (source column, output name)
inline std::pair<std::vector<std::string>, std::vector<std::string>> parse_value_cols(const std::string& s) {
  std::vector<std::string> src, names;
  if (s.empty()) return {src, names};
  for (const auto& item : split(s, ',')) {
    const auto parts = split(item, ':');
    if (parts.empty() || parts.size() > 2 || parts[0].empty()) {
      throw Failure{usage, "malformed --value-cols entry '" + item + "'"};
    }
    src.push_back(parts[0]);
    names.push_back(parts.size() == 2 ? parts[1] : parts[0]);
  }
  return {src, names};
}

inline AngleUnit parse_unit(const std::string& s, AngleUnit fallback) {
  if (s.empty()) return fallback;
  if (s == "deg" || s == "degrees") return AngleUnit::Degrees;
  if (s == "rad" || s == "radians") return AngleUnit::Radians;
  throw Failure{usage, "unknown --unit '" + s + "' (expected deg or rad)"};
}

inline int cmd_convert(const ConvertArgs& a, std::ostream& out) {
  ResolutionChoice choice = AutoNside{a.j_max};
  if (a.nside != "auto") {
    std::int64_t n = 0;
    const auto [p, ec] = std::from_chars(a.nside.data(), a.nside.data() + a.nside.size(), n);
    if (ec != std::errc() || p != a.nside.data() + a.nside.size()) {
      throw Failure{usage, "--nside must be 'auto' or a power of two, got '" + a.nside + "'"};
    }
    try {
      choice = Resolution::from_nside(n);
    } catch (const Error& e) {
      throw Failure{usage, e.what()};
    }
  }
  Ordering ordering;
  try {
    ordering = parse_ordering(a.ordering);
  } catch (const Error& e) {
    throw Failure{usage, e.what()};
  }
  if (a.dedup != "first" && a.dedup != "fail") throw Failure{usage, "--dedup must be first or fail"};
  const DedupPolicy dedup = a.dedup == "first" ? DedupPolicy::KeepFirst : DedupPolicy::Fail;
  const auto [src_cols, names] = parse_value_cols(a.value_cols);

  PointTable table;
  try {
    if (a.kind == "geo") {
      GeoCsvOptions o;
      o.lon_col = a.lon_col;
      o.lat_col = a.lat_col;
      o.value_cols = src_cols;
      o.unit = parse_unit(a.unit, AngleUnit::Degrees);
      o.lon_offset = a.lon_offset_deg * pi / 180.0;
      o.has_header = !a.no_header;
      table = ingest_geo_csv(a.in, o);
    } else if (a.kind == "sph") {
      SphCsvOptions o;
      o.theta_col = a.theta_col;
      o.phi_col = a.phi_col;
      o.value_cols = src_cols;
      o.unit = parse_unit(a.unit, AngleUnit::Radians);
      o.has_header = !a.no_header;
      table = ingest_sph_csv(a.in, o);
    } else if (a.kind == "cart") {
      CartCsvOptions o;
      o.x_col = a.x_col;
      o.y_col = a.y_col;
      o.z_col = a.z_col;
      o.has_header = !a.no_header;
      if (!names.empty()) o.value_name = names.front();
      if (a.center != "centroid") {
        const auto parts = split(a.center, ',');
        if (parts.size() != 3) throw Failure{usage, "--center must be 'centroid' or x,y,z"};
        o.center = CartCoord{parse_double(parts[0], "--center"), parse_double(parts[1], "--center"),
                             parse_double(parts[2], "--center")};
      }
      table = ingest_cart_csv(a.in, o);
    } else {
      throw Failure{usage, "--kind must be geo, cart or sph"};
    }
    if (a.kind != "cart") table.column_names = names;
  } catch (const Error& e) {
    throw Failure{data, e.what()};
  }

  Pixelization px = [&] {
    try {
      return from_points(table, choice, ordering, dedup, a.threads);
    } catch (const Error& e) {
      throw Failure{e.code() == Errc::parse ? usage : data, e.what()};
    }
  }();
  if (!px.separated) {
    throw Failure{separation, "points cannot be separated into distinct pixels up to nside " +
                                  std::to_string(px.dataset.resolution().nside())};
  }
  save(px.dataset, a.out);
  out << "n=" << px.dataset.size() << " nside=" << px.dataset.resolution().nside()
      << " dropped=" << table.dropped_rows << " duplicates=" << px.duplicates << '\n';
  return ok;
}

inline int cmd_info(const std::string& path, std::ostream& out) {
  const auto ds = load_dataset(path);
  out << "n=" << ds.size() << " nside=" << ds.resolution().nside() << " ordering=" << to_string(ds.ordering())
      << " columns=";
  for (std::size_t c = 0; c < ds.column_names().size(); ++c) out << (c ? "," : "") << ds.column_names()[c];
  out << '\n';
  return ok;
}

struct StatsArgs {
  std::string ds;
  std::string col = "I";
  std::string stat;
  std::optional<double> alpha;
  std::optional<double> level;
  std::optional<std::size_t> n;
  std::optional<std::size_t> bins;
  std::string side = "smallest";
  bool relative = false;
  WindowFlags win;
};

inline Side parse_side(const std::string& s) {
  if (s == "smallest") return Side::Smallest;
  if (s == "largest") return Side::Largest;
  throw Failure{usage, "--side must be smallest or largest"};
}

template <class T>
T require(const std::optional<T>& v, const char* flag, const std::string& stat) {
  if (!v) throw Failure{usage, std::string("--stat ") + stat + " needs " + flag};
  return *v;
}

inline int cmd_stats(const StatsArgs& a, std::ostream& out) {
  const auto w = a.win.window();
  const auto ds = load_dataset(a.ds);
  double value = 0.0;
  if (a.stat == "mean") {
    value = mean_value(ds, a.col);
  } else if (a.stat == "exprob") {
    value = exprob(ds, w, a.col, require(a.alpha, "--alpha", a.stat));
  } else if (a.stat == "entropy") {
    value = entropy(ds, w, a.col, a.bins);
  } else if (a.stat == "fmf") {
    const double level = require(a.level, "--level", a.stat);
    value = a.relative ? fmf_relative(ds, level, a.col) : fmf(ds, level, a.col);
  } else if (a.stat == "mindist") {
    value = min_dist(ds);
  } else if (a.stat == "asym-mean") {
    value = asymmetry_mean(ds, w, a.col);
  } else if (a.stat == "asym-extrema") {
    value = asymmetry_extrema(ds, w, require(a.n, "--n", a.stat), a.col, parse_side(a.side));
  } else {
    throw Failure{usage, "unknown --stat '" + a.stat + "'"};
  }
  out << "stat=" << a.stat << " value=" << format_sig(value) << '\n';
  return ok;
}

struct ExtremaArgs {
  std::string ds;
  std::string col = "I";
  std::size_t n = 0;
  std::string side = "smallest";
  WindowFlags win;
};

inline int cmd_extrema(const ExtremaArgs& a, std::ostream& out) {
  const auto w = a.win.window();
  const Side side = parse_side(a.side);
  const auto ds = load_dataset(a.ds);
  const auto rows = extrema(ds, w, a.n, side, a.col);
  out << "pix,theta,phi,value\n";
  for (const auto& r : rows) {
    out << r.pix.index << ',' << format_sig(r.theta) << ',' << format_sig(r.phi) << ',' << format_sig(r.value)
        << '\n';
  }
  return ok;
}

struct HistArgs {
  std::string ds;
  std::string col = "I";
  std::size_t bins = default_histogram_bins;
  std::string out;
};

inline int cmd_hist(const HistArgs& a) {
  if (a.bins == 0) throw Failure{usage, "--bins must be positive"};
  const auto ds = load_dataset(a.ds);
  const auto [th, ph] = ang_distribution(ds, a.col, a.bins, a.bins);
  std::ofstream f(a.out, std::ios::binary);
  if (!f) throw Failure{io, "cannot write '" + a.out + "'"};
  const Histogram hs[] = {th, ph};
  write_histograms(f, hs);
  if (!f.flush()) throw Failure{io, "write to '" + a.out + "' failed"};
  return ok;
}

struct RenderArgs {
  std::string ds;
  std::string col = "I";
  int width = 720;
  int height = 360;
  std::string ramp = "bluered";
  int background = 255;
  std::string out;
  unsigned threads = 1;
};

inline int cmd_render(const RenderArgs& a) {
  if (a.width < 1 || a.height < 1) throw Failure{usage, "--width and --height must be positive"};
  if (a.background < 0 || a.background > 255) throw Failure{usage, "--background must be in [0, 255]"};
  RenderSpec spec;
  spec.width = a.width;
  spec.height = a.height;
  spec.column = a.col;
  spec.background = static_cast<std::uint8_t>(a.background);
  if (a.ramp == "gray" || a.ramp == "grayscale") {
    spec.ramp = ColorRamp::Grayscale;
  } else if (a.ramp == "bluered") {
    spec.ramp = ColorRamp::BlueRed;
  } else {
    throw Failure{usage, "--ramp must be gray or bluered"};
  }
  const auto ds = load_dataset(a.ds);
  write_ppm(render(ds, spec, a.threads), a.out);
  return ok;
}

// ---------------------------------------------------------------------------

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spherical data engine: HEALPix pixelation and spherical statistics", "sphds"};
  app.require_subcommand(1);

  ConvertArgs conv;
  auto* c = app.add_subcommand("convert", "pixelate a CSV of located values into a dataset file");
  c->add_option("--in", conv.in, "input CSV")->required();
  c->add_option("--kind", conv.kind, "coordinate kind: geo, cart or sph");
  c->add_option("--lon-col", conv.lon_col);
  c->add_option("--lat-col", conv.lat_col);
  c->add_option("--theta-col", conv.theta_col);
  c->add_option("--phi-col", conv.phi_col);
  c->add_option("--x-col", conv.x_col);
  c->add_option("--y-col", conv.y_col);
  c->add_option("--z-col", conv.z_col);
  c->add_option("--center", conv.center, "cart: 'centroid' or x,y,z");
  c->add_option("--value-cols", conv.value_cols, "value columns, 'src' or 'src:name', comma separated");
  c->add_option("--unit", conv.unit, "angle unit of the input: deg or rad");
  c->add_option("--lon-offset-deg", conv.lon_offset_deg, "added to every longitude");
  c->add_flag("--no-header", conv.no_header, "input has no header row; columns are V1, V2, ...");
  c->add_option("--nside", conv.nside, "power of two, or auto");
  c->add_option("--j-max", conv.j_max, "deepest level tried by --nside auto");
  c->add_option("--ordering", conv.ordering, "ring or nested");
  c->add_option("--dedup", conv.dedup, "first or fail");
  c->add_option("--out", conv.out, "output dataset file")->required();
  c->add_option("--threads", conv.threads);

  std::string info_path;
  auto* i = app.add_subcommand("info", "print a dataset summary");
  i->add_option("--ds", info_path)->required();

  StatsArgs st;
  auto* s = app.add_subcommand("stats", "compute one statistic");
  s->add_option("--ds", st.ds)->required();
  s->add_option("--col", st.col);
  s->add_option("--stat", st.stat, "mean|exprob|entropy|fmf|mindist|asym-mean|asym-extrema")->required();
  s->add_option("--alpha", st.alpha);
  s->add_option("--level", st.level);
  s->add_option("--n", st.n);
  s->add_option("--bins", st.bins);
  s->add_option("--side", st.side);
  s->add_flag("--relative", st.relative, "fmf relative to the observed area");
  st.win.attach(s);

  ExtremaArgs ex;
  auto* e = app.add_subcommand("extrema", "list the n most extreme rows as CSV");
  e->add_option("--ds", ex.ds)->required();
  e->add_option("--col", ex.col);
  e->add_option("--n", ex.n)->required();
  e->add_option("--side", ex.side);
  ex.win.attach(e);

  HistArgs hi;
  auto* h = app.add_subcommand("hist", "write theta/phi marginal histograms as CSV");
  h->add_option("--ds", hi.ds)->required();
  h->add_option("--col", hi.col);
  h->add_option("--bins", hi.bins);
  h->add_option("--out", hi.out)->required();

  RenderArgs re;
  auto* r = app.add_subcommand("render", "render an equirectangular PPM heat map");
  r->add_option("--ds", re.ds)->required();
  r->add_option("--col", re.col);
  r->add_option("--width", re.width);
  r->add_option("--height", re.height);
  r->add_option("--ramp", re.ramp, "gray or bluered");
  r->add_option("--background", re.background, "grey level for cells without data");
  r->add_option("--out", re.out)->required();
  r->add_option("--threads", re.threads);

  std::vector<const char*> argv;
  argv.push_back("sphds");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& pe) {
    if (pe.get_exit_code() == 0) return app.exit(pe, out, err);  // --help
    err << "sphds: " << pe.what() << '\n';
    return usage;
  }

  try {
    if (*c) return cmd_convert(conv, out);
    if (*i) return cmd_info(info_path, out);
    if (*s) return cmd_stats(st, out);
    if (*e) return cmd_extrema(ex, out);
    if (*h) return cmd_hist(hi);
    if (*r) return cmd_render(re);
  } catch (const Failure& f) {
    err << "sphds: " << f.message << '\n';
    return f.code;
  } catch (const Error& x) {
    err << "sphds: " << x.what() << '\n';
    return exit_code_for(x.code());
  }
  return usage;
}

}  // namespace sphds::cli

#endif  // SPHDS_TOOLS_CLI_HPP
