#include <gtest/gtest.h>

#include <numeric>
#include <sstream>
#include <vector>

#include "sphds/render.hpp"

using namespace sphds;

namespace {

SphericalDataset ramp_dataset(int nside) {
  const Resolution r = Resolution::from_nside(nside);
  std::vector<std::int64_t> pix(static_cast<std::size_t>(r.npix()));
  std::iota(pix.begin(), pix.end(), std::int64_t{0});
  std::vector<double> v(pix.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = pix2ang_ring(r, {Ordering::Ring, pix[i]}).theta;
  return {r, Ordering::Ring, {"I"}, std::move(pix), {std::move(v)}};
}

std::array<std::uint8_t, 3> at(const Image& img, int r, int c) {
  const auto off = (static_cast<std::size_t>(r) * static_cast<std::size_t>(img.width) + static_cast<std::size_t>(c)) * 3;
  return {img.rgb[off], img.rgb[off + 1], img.rgb[off + 2]};
}

}  // namespace

TEST(Render, RampEndpoints) {
  EXPECT_EQ(ramp_color(ColorRamp::Grayscale, 0.0), (std::array<std::uint8_t, 3>{0, 0, 0}));
  EXPECT_EQ(ramp_color(ColorRamp::Grayscale, 1.0), (std::array<std::uint8_t, 3>{255, 255, 255}));
  EXPECT_EQ(ramp_color(ColorRamp::BlueRed, 0.0), (std::array<std::uint8_t, 3>{0, 0, 255}));
  EXPECT_EQ(ramp_color(ColorRamp::BlueRed, 1.0), (std::array<std::uint8_t, 3>{255, 0, 0}));
  EXPECT_EQ(ramp_color(ColorRamp::BlueRed, 7.0), ramp_color(ColorRamp::BlueRed, 1.0));
}

TEST(Render, ColatitudeRampRunsTopToBottom) {
  RenderSpec spec;
  spec.width = 64;
  spec.height = 32;
  spec.ramp = ColorRamp::Grayscale;
  const Image img = render(ramp_dataset(8), spec);
  ASSERT_EQ(img.rgb.size(), 64u * 32u * 3u);
  // the value is theta, so brightness grows downwards
  for (int r = 1; r < spec.height; ++r) EXPECT_GE(at(img, r, 10)[0], at(img, r - 1, 10)[0]);
  EXPECT_LT(at(img, 0, 0)[0], 30);
  EXPECT_GT(at(img, spec.height - 1, 0)[0], 225);
}

TEST(Render, EmptyCellsUseBackgroundAndConstantIsMidRamp) {
  const Resolution r = Resolution::from_nside(1);
  const SphericalDataset ds(r, Ordering::Ring, {"I"}, {0}, {{5.0}});
  RenderSpec spec;
  spec.width = 40;
  spec.height = 20;
  spec.ramp = ColorRamp::Grayscale;
  spec.background = 7;
  const Image img = render(ds, spec);
  std::size_t filled = 0;
  for (int row = 0; row < spec.height; ++row) {
    for (int c = 0; c < spec.width; ++c) {
      const auto px = at(img, row, c);
      ASSERT_TRUE(px[0] == 7 || px[0] == 128);
      filled += px[0] == 128;
    }
  }
  // base pixel 0 is one twelfth of the sphere, but cells are not equal-area
  EXPECT_GT(filled, 0u);
  EXPECT_LT(filled, static_cast<std::size_t>(spec.width * spec.height / 4));
}

TEST(Render, DeterministicAcrossThreads) {
  const auto ds = ramp_dataset(16);
  RenderSpec spec;
  spec.width = 300;
  spec.height = 150;
  const Image a = render(ds, spec, 1);
  for (const unsigned t : {2u, 5u, 16u}) EXPECT_EQ(render(ds, spec, t).rgb, a.rgb);

  std::ostringstream out;
  write_ppm(a, out);
  const std::string s = out.str();
  EXPECT_EQ(s.substr(0, 15), "P6\n300 150\n255\n");
  EXPECT_EQ(s.size(), 15u + 300u * 150u * 3u);
}

TEST(Render, EmptyDatasetIsAllBackground) {
  const SphericalDataset ds(Resolution::from_nside(4), Ordering::Nested, {"I"}, {}, {{}});
  RenderSpec spec;
  spec.width = 16;
  spec.height = 8;
  const Image img = render(ds, spec);
  EXPECT_EQ(img.rgb, std::vector<std::uint8_t>(16 * 8 * 3, 255));
}

TEST(Render, BadInput) {
  const auto ds = ramp_dataset(1);
  RenderSpec spec;
  spec.width = 0;
  EXPECT_THROW(render(ds, spec), Error);
  spec.width = 10;
  spec.column = "missing";
  EXPECT_THROW(render(ds, spec), Error);
}
