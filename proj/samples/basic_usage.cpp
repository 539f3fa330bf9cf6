// Builds a small synthetic field, pixelates it and runs a few statistics.

#include <cmath>
#include <iostream>
#include <random>

#include "sphds/sphds.hpp"

using namespace sphds;

int main() {
  // a smooth field that is warmer towards the equator, plus noise
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> z(-1.0, 1.0), phi(0.0, two_pi);
  std::normal_distribution<double> noise(0.0, 5.0);
  PointTable points({"I"});
  for (int i = 0; i < 50000; ++i) {
    const SphCoord a{std::acos(z(rng)), phi(rng)};
    const double v = 280.0 + 40.0 * std::sin(a.theta) + noise(rng);
    points.add_row(a, std::span(&v, 1));
  }

  const auto px = from_points(points, Resolution::from_nside(64), Ordering::Nested, DedupPolicy::KeepFirst);
  const SphericalDataset& ds = px.dataset;
  std::cout << "pixels: " << ds.size() << " (dropped " << px.duplicates << " duplicates)\n";

  const double alpha = mean_value(ds, "I");
  const auto octant = SphericalWindow::polygon({{0.0, 0.0}, {half_pi, 0.0}, {half_pi, half_pi}});
  std::cout << "mean: " << format_sig(alpha) << '\n'
            << "exprob over the octant: " << format_sig(exprob(ds, octant, "I", alpha)) << '\n'
            << "entropy over the octant: " << format_sig(entropy(ds, octant, "I")) << '\n'
            << "relative area above the mean: " << format_sig(fmf_relative(ds, alpha, "I")) << '\n';

  std::cout << "three smallest values in the octant:\n";
  for (const auto& r : extrema(ds, octant, 3, Side::Smallest, "I")) {
    std::cout << "  pix " << r.pix.index << "  theta " << format_sig(r.theta) << "  phi " << format_sig(r.phi)
              << "  value " << format_sig(r.value) << '\n';
  }

  // neighbours and hierarchy of the first pixel
  const PixelId p{Ordering::Nested, ds.pixels()[0]};
  std::cout << "pixel " << p.index << " has parent " << parent(ds.resolution(), p).index << " and "
            << neighbors(ds.resolution(), p).size() << " neighbours\n";
}
