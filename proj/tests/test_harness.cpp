#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "twri/harness.hpp"
#include "twri/rng.hpp"

using namespace twri;
namespace fs = std::filesystem;

namespace {

std::string scratch(const std::string& leaf) {
  const std::string dir = (fs::temp_directory_path() / leaf).string();
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FrontalImage tiny_image(int rows, int cols, double bias) {
  FrontalImage img = make_image(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      img.at(r, c) = bias + 0.01 * (r * cols + c);
  return img;
}

}  // namespace

TEST_CASE("configs round trip through JSON") {
  ExperimentConfig cfg;
  cfg.seed = 42;
  cfg.wall.kind = "airgap";
  cfg.wall.eps_r = 5.5;
  cfg.dae.r = 123;
  cfg.dae.mapping = "tanh";
  cfg.dataset.aspects = {0.0, 30.0, 60.0};
  cfg.wideband.wall = "wood";

  const std::string dir = scratch("harness_cfg");
  const std::string path = dir + "/cfg.json";
  save_config(path, cfg);
  const ExperimentConfig back = load_config(path);
  CHECK(back.seed == 42);
  CHECK(back.wall.kind == "airgap");
  CHECK(back.wall.eps_r == doctest::Approx(5.5));
  CHECK(back.dae.r == 123);
  CHECK(back.dae.mapping == "tanh");
  REQUIRE(back.dataset.aspects.size() == 3);
  CHECK(back.dataset.aspects[1] == doctest::Approx(30.0));
  CHECK(back.wideband.wall == "wood");
  fs::remove_all(dir);
}

TEST_CASE("partial configs overlay the defaults") {
  const std::string dir = scratch("harness_overlay");
  const std::string path = dir + "/partial.json";
  {
    std::ofstream out(path);
    out << R"({"seed": 9, "dae": {"r": 43}, "wall": {"kind": "reinforced"}})";
  }
  const ExperimentConfig cfg = load_config(path);
  CHECK(cfg.seed == 9);
  CHECK(cfg.dae.r == 43);
  CHECK(cfg.wall.kind == "reinforced");
  CHECK(cfg.dae.lambda == doctest::Approx(1.0));      // untouched default
  CHECK(cfg.grid.cell == doctest::Approx(0.004));     // untouched default
  CHECK(cfg.radar.elements_x == 10);
  fs::remove_all(dir);
}

TEST_CASE("malformed config files are rejected") {
  const std::string dir = scratch("harness_badcfg");
  const std::string path = dir + "/bad.json";
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  CHECK_THROWS(load_config(path));
  CHECK_THROWS(load_config(dir + "/missing.json"));
  fs::remove_all(dir);
}

TEST_CASE("validation rejects out-of-range settings") {
  ExperimentConfig ok;
  CHECK_NOTHROW(ok.validate());

  ExperimentConfig bad = ok;
  bad.dataset.split = 1.5;
  CHECK_THROWS(bad.validate());
  bad = ok;
  bad.grid.x_min = 2.0;
  CHECK_THROWS(bad.validate());
  bad = ok;
  bad.source.f_c = 0.0;
  CHECK_THROWS(bad.validate());
  bad = ok;
  bad.dae.r = 0;
  CHECK_THROWS(bad.validate());
  bad = ok;
  bad.dae.lambda = 0.0;
  CHECK_THROWS(bad.validate());
  bad = ok;
  bad.wall.thickness = -0.1;
  CHECK_THROWS(bad.validate());
  bad = ok;
  bad.radar.cpi = 0.001;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("image vectorization round trips column by column") {
  std::vector<FrontalImage> imgs = {tiny_image(3, 4, 0.0), tiny_image(3, 4, 5.0)};
  const Eigen::MatrixXd m = images_to_matrix(imgs);
  REQUIRE(m.rows() == 12);
  REQUIRE(m.cols() == 2);
  CHECK(m(0, 1) == doctest::Approx(5.0));
  CHECK(m(7, 0) == doctest::Approx(imgs[0].at(1, 3)));

  const FrontalImage back = matrix_column_to_image(m, 1, 3, 4);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c)
      CHECK(back.at(r, c) == doctest::Approx(imgs[1].at(r, c)));

  CHECK_THROWS(images_to_matrix({}));
  std::vector<FrontalImage> mixed = {tiny_image(3, 4, 0.0), tiny_image(4, 3, 0.0)};
  CHECK_THROWS(images_to_matrix(mixed));
  CHECK_THROWS(matrix_column_to_image(m, 2, 3, 4));
  CHECK_THROWS(matrix_column_to_image(m, 0, 5, 4));
}

TEST_CASE("metric CSV files carry every row") {
  const std::string dir = scratch("harness_csv");
  const std::vector<MetricRow> rows = {{0, "dielectric", "BD", 0.8, 0.35},
                                       {0, "dielectric", "AD", 0.2, 0.88},
                                       {1, "dielectric", "BD", 0.9, 0.30}};
  write_metric_csv(dir + "/metrics.csv", rows);
  const std::string text = slurp(dir + "/metrics.csv");
  CHECK(text.rfind("pair_id,wall,condition,nmse,ssim\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  CHECK(text.find("1,dielectric,BD") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("JSON reports parse back with the written values") {
  const std::string dir = scratch("harness_json");
  ExperimentReport rep;
  rep.scenario = "same-wall-dielectric";
  rep.n_test_pairs = 4;
  rep.bd_nmse = 0.9;
  rep.bd_ssim = 0.3;
  rep.ad_nmse = 0.25;
  rep.ad_ssim = 0.85;
  rep.train_seconds = 12.5;
  rep.denoise_ms_per_image = 3.0;
  rep.rows = {{0, "dielectric", "AD", 0.25, 0.85}};
  write_report_json(dir + "/report.json", rep);

  const nlohmann::json j = nlohmann::json::parse(slurp(dir + "/report.json"));
  CHECK(j.at("scenario").get<std::string>() == "same-wall-dielectric");
  CHECK(j.at("n_test_pairs").get<int>() == 4);
  CHECK(j.at("ad_ssim").get<double>() == doctest::Approx(0.85));
  CHECK(j.at("rows").size() == 1);
  CHECK(j.at("rows")[0].at("condition").get<std::string>() == "AD");
  fs::remove_all(dir);
}

TEST_CASE("report aggregation averages per scenario and condition") {
  const std::string root = scratch("harness_report");
  fs::create_directories(root + "/in/scenA");
  fs::create_directories(root + "/in/scenB");
  write_metric_csv(root + "/in/scenA/metrics.csv",
                   {{0, "w", "BD", 1.0, 0.2}, {1, "w", "BD", 0.5, 0.4},
                    {0, "w", "AD", 0.3, 0.9}});
  write_metric_csv(root + "/in/scenB/metrics.csv", {{0, "w", "AD", 0.1, 0.95}});
  cmd_report(root + "/in", root + "/out");

  const std::string csv = slurp(root + "/out/summary.csv");
  CHECK(csv.rfind("scenario,condition,n,nmse_mean,ssim_mean\n", 0) == 0);
  CHECK(csv.find("scenA,BD,2,0.75,0.3") != std::string::npos);
  CHECK(csv.find("scenA,AD,1,0.3,0.9") != std::string::npos);
  CHECK(csv.find("scenB,AD,1,0.1,0.95") != std::string::npos);
  CHECK(fs::exists(root + "/out/summary.txt"));

  fs::remove_all(root + "/in");
  fs::create_directories(root + "/in");
  CHECK_THROWS(cmd_report(root + "/in", root + "/out"));
  fs::remove_all(root);
}

TEST_CASE("seeded RNG streams are independent and reproducible") {
  auto a1 = make_rng(7, 0xc4a);
  auto a2 = make_rng(7, 0xc4a);
  auto b = make_rng(7, 0x6d63);
  auto c = make_rng(8, 0xc4a);
  CHECK(a1() == a2());
  CHECK(a1() == a2());
  const auto va = make_rng(7, 0xc4a)();
  CHECK(va != b());
  CHECK(va != c());
  // Multi-tag streams separate as well.
  CHECK(make_rng(7, 0xc4a, 1)() != make_rng(7, 0xc4a, 2)());
}
