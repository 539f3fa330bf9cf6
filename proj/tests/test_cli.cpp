#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;
using sphds::cli::run_cli;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("sphds_cli_") + info->name() + "_" +
                                        std::to_string(std::random_device{}()));
    fs::create_directories(dir_);
    std::ofstream csv(path("field.csv"));
    csv << "lon,lat,oz\n";
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> lon(-180.0, 180.0), slat(-1.0, 1.0), val(200.0, 400.0);
    for (int i = 0; i < 800; ++i) {
      csv << lon(rng) << ',' << std::asin(slat(rng)) * 180.0 / sphds::pi << ',' << val(rng) << '\n';
    }
    csv << "10,-9999,300\n";
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(const std::vector<std::string>& args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST_F(CliTest, ConvertStatsRoundtrip) {
  ASSERT_EQ(run({"convert", "--in", path("field.csv"), "--value-cols", "oz:I", "--nside", "16", "--out",
                 path("f.sphds")}),
            0)
      << err_.str();
  EXPECT_NE(out_.str().find("nside=16"), std::string::npos);
  EXPECT_NE(out_.str().find("dropped=1"), std::string::npos);

  const auto ds = sphds::load(path("f.sphds"));
  ASSERT_EQ(run({"stats", "--ds", path("f.sphds"), "--stat", "mean"}), 0) << err_.str();
  EXPECT_EQ(out_.str(), "stat=mean value=" + sphds::format_sig(sphds::mean_value(ds, "I")) + "\n");

  ASSERT_EQ(run({"stats", "--ds", path("f.sphds"), "--stat", "exprob", "--alpha", "300", "--win-polygon",
                 "0,0;90,0;90,90", "--deg"}),
            0)
      << err_.str();
  const auto oct = sphds::SphericalWindow::polygon({{0.0, 0.0}, {sphds::half_pi, 0.0}, {sphds::half_pi, sphds::half_pi}});
  EXPECT_EQ(out_.str(), "stat=exprob value=" + sphds::format_sig(sphds::exprob(ds, oct, "I", 300.0)) + "\n");

  ASSERT_EQ(run({"info", "--ds", path("f.sphds")}), 0);
  EXPECT_NE(out_.str().find("ordering=nested"), std::string::npos);

  ASSERT_EQ(run({"extrema", "--ds", path("f.sphds"), "--n", "3"}), 0);
  const std::string rows = out_.str();
  EXPECT_EQ(rows.substr(0, 20), "pix,theta,phi,value\n");
  EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), 4);

  ASSERT_EQ(run({"extrema", "--ds", path("f.sphds"), "--n", "0"}), 0);
  EXPECT_EQ(out_.str(), "pix,theta,phi,value\n");

  ASSERT_EQ(run({"hist", "--ds", path("f.sphds"), "--bins", "5", "--out", path("h.csv")}), 0);
  const std::string hist = slurp(path("h.csv"));
  EXPECT_EQ(std::count(hist.begin(), hist.end(), '\n'), 11);
}

TEST_F(CliTest, SingleRowConvertInfoHist) {
  {
    std::ofstream one(path("one.csv"));
    one << "lon,lat,v\n12.5,-40,3\n";
  }
  ASSERT_EQ(run({"convert", "--in", path("one.csv"), "--value-cols", "v", "--out", path("one.sphds")}), 0)
      << err_.str();
  ASSERT_EQ(run({"info", "--ds", path("one.sphds")}), 0);
  EXPECT_EQ(out_.str().substr(0, 4), "n=1 ");
  ASSERT_EQ(run({"hist", "--ds", path("one.sphds"), "--col", "v", "--bins", "20", "--out", path("h.csv")}), 0);
  std::istringstream rows(slurp(path("h.csv")));
  std::string line;
  std::getline(rows, line);
  int data_rows = 0, nonzero = 0;
  while (std::getline(rows, line)) {
    ++data_rows;
    const auto f = sphds::cli::split(line, ',');
    nonzero += f.at(3) != "0";
  }
  EXPECT_EQ(data_rows, 40);
  EXPECT_EQ(nonzero, 2);
}

TEST_F(CliTest, NonPowerOfTwoNsideIsUsageError) {
  EXPECT_EQ(run({"convert", "--in", path("field.csv"), "--value-cols", "oz", "--nside", "3", "--out",
                 path("x.sphds")}),
            2);
  EXPECT_NE(err_.str().find("power of two"), std::string::npos) << err_.str();
  EXPECT_FALSE(fs::exists(path("x.sphds")));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"bogus"}), 2);
  EXPECT_EQ(run({"stats", "--ds", path("nope.sphds"), "--stat", "mean"}), 5);
  EXPECT_EQ(run({"convert", "--in", path("nope.csv"), "--out", path("o.sphds")}), 3);
  // missing value column in the CSV
  EXPECT_EQ(run({"convert", "--in", path("field.csv"), "--value-cols", "nothere", "--out", path("o.sphds")}), 3);
  // duplicates are fatal with --dedup fail at a coarse level
  EXPECT_EQ(run({"convert", "--in", path("field.csv"), "--value-cols", "oz", "--nside", "1", "--dedup", "fail",
                 "--out", path("o.sphds")}),
            3);
  // auto resolution that cannot separate within the allowed depth
  {
    std::ofstream dup(path("dup.csv"));
    dup << "lon,lat,v\n10,10,1\n10,10,2\n";
  }
  EXPECT_EQ(run({"convert", "--in", path("dup.csv"), "--value-cols", "v", "--j-max", "4", "--out", path("o.sphds")}),
            4);

  ASSERT_EQ(run({"convert", "--in", path("field.csv"), "--value-cols", "oz:I", "--nside", "8", "--out",
                 path("f.sphds")}),
            0);
  EXPECT_EQ(run({"stats", "--ds", path("f.sphds"), "--stat", "exprob"}), 2);
  EXPECT_EQ(run({"stats", "--ds", path("f.sphds"), "--stat", "nonsense"}), 2);
  EXPECT_EQ(run({"stats", "--ds", path("f.sphds"), "--stat", "mean", "--col", "zz"}), 2);
  EXPECT_EQ(run({"stats", "--ds", path("f.sphds"), "--stat", "mean", "--win-disc", "1,1"}), 2);
  EXPECT_EQ(run({"extrema", "--ds", path("f.sphds"), "--n", "100000"}), 3);
  EXPECT_EQ(run({"render", "--ds", path("f.sphds"), "--out", path("no/such/dir/x.ppm")}), 5);
  EXPECT_EQ(run({"--help"}), 0);
}

TEST_F(CliTest, BinaryIsDeterministicAcrossThreads) {
  const std::string cli = SPHDS_CLI_PATH;
  const auto sh = [](const std::string& cmd) { return std::system((cmd + " >/dev/null 2>&1").c_str()); };
  std::vector<std::string> images;
  for (const char* threads : {"1", "1", "4"}) {
    const std::string ds = path(std::string("t") + threads + ".sphds");
    const std::string img = path(std::string("t") + threads + ".ppm");
    ASSERT_EQ(sh(cli + " convert --in " + path("field.csv") + " --value-cols oz:I --threads " + threads +
                 " --out " + ds),
              0);
    ASSERT_EQ(sh(cli + " render --ds " + ds + " --width 200 --height 100 --threads " + threads + " --out " + img), 0);
    images.push_back(slurp(ds) + slurp(img));
  }
  EXPECT_EQ(images[0], images[1]);
  EXPECT_EQ(images[0], images[2]);
  EXPECT_NE(sh(cli + " convert --in " + path("field.csv") + " --nside 3 --out " + path("z.sphds")), 0);
}
