#include "twri/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include "json.hpp"
#include "twri/array_file.hpp"

namespace twri {

namespace fs = std::filesystem;
using nlohmann::json;

double FrontalImage::peak() const {
  double p = 0.0;
  for (double v : px) p = std::max(p, v);
  return p;
}

void FrontalImage::normalize_peak() {
  const double p = peak();
  if (p <= 0.0) return;
  for (double& v : px) v /= p;
}

FrontalImage make_image(int rows, int cols) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("raster dims must be positive");
  FrontalImage img;
  img.rows = rows;
  img.cols = cols;
  img.px.assign(static_cast<std::size_t>(rows) * cols, 0.0);
  img.az_deg.assign(cols, 0.0);
  img.el_deg.assign(rows, 0.0);
  return img;
}

void save_image(const std::string& path, const FrontalImage& img,
                const std::string& label) {
  write_array(path, {img.rows, img.cols}, img.px, label);
  json axes;
  axes["az_deg"] = img.az_deg;
  axes["el_deg"] = img.el_deg;
  std::ofstream out(path + ".axes.json");
  out << axes.dump() << "\n";
}

FrontalImage load_image(const std::string& path) {
  const ArrayData arr = read_array(path);
  if (arr.dtype != Dtype::f64 || arr.shape.size() != 2)
    throw std::runtime_error(path + ": expected a 2D f64 image");
  FrontalImage img;
  img.rows = static_cast<int>(arr.shape[0]);
  img.cols = static_cast<int>(arr.shape[1]);
  img.px = arr.reals;
  img.az_deg.assign(img.cols, 0.0);
  img.el_deg.assign(img.rows, 0.0);
  std::ifstream in(path + ".axes.json");
  if (in) {
    json axes = json::parse(in);
    img.az_deg = axes.value("az_deg", img.az_deg);
    img.el_deg = axes.value("el_deg", img.el_deg);
  }
  return img;
}

void Dataset::push(FrontalImage cl, FrontalImage co, PairLabel lb) {
  clean.push_back(std::move(cl));
  corrupt.push_back(std::move(co));
  labels.push_back(std::move(lb));
}

void Dataset::validate() const {
  if (clean.size() != corrupt.size() || clean.size() != labels.size())
    throw std::runtime_error("dataset pairing broken: unequal list lengths");
  for (std::size_t i = 0; i < clean.size(); ++i) {
    if (clean[i].rows != clean[0].rows || clean[i].cols != clean[0].cols ||
        corrupt[i].rows != clean[0].rows || corrupt[i].cols != clean[0].cols)
      throw std::runtime_error("dataset images have mixed raster dimensions");
  }
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, double fraction,
                                          std::uint64_t seed) {
  if (ds.size() < 2) throw std::invalid_argument("split needs at least 2 pairs");
  if (fraction <= 0.0 || fraction >= 1.0)
    throw std::invalid_argument("split fraction must lie in (0,1)");
  ds.validate();

  const std::size_t m = ds.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const auto n_train =
      static_cast<std::size_t>(std::lround(fraction * static_cast<double>(m)));
  Dataset train, test;
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t i = order[j];
    Dataset& dst = j < n_train ? train : test;
    dst.push(ds.clean[i], ds.corrupt[i], ds.labels[i]);
  }
  return {std::move(train), std::move(test)};
}

void save_dataset(const std::string& dir, const Dataset& ds) {
  ds.validate();
  fs::create_directories(dir);
  json manifest;
  manifest["raster"] = {ds.clean.empty() ? 0 : ds.clean[0].rows,
                        ds.clean.empty() ? 0 : ds.clean[0].cols};
  json pairs = json::array();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "pair%04zu", i);
    const std::string cl = std::string(name) + "_clean.arr";
    const std::string co = std::string(name) + "_corrupt.arr";
    save_image(dir + "/" + cl, ds.clean[i], "clean");
    save_image(dir + "/" + co, ds.corrupt[i], "corrupt");
    json p;
    p["clean"] = cl;
    p["corrupt"] = co;
    p["wall"] = ds.labels[i].wall;
    p["aspect_deg"] = ds.labels[i].aspect_deg;
    p["frame"] = ds.labels[i].frame;
    p["realization"] = ds.labels[i].realization;
    p["subject"] = ds.labels[i].subject;
    pairs.push_back(p);
  }
  manifest["pairs"] = pairs;
  std::ofstream out(dir + "/manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest under " + dir);
  out << manifest.dump(1) << "\n";
}

Dataset load_dataset(const std::string& dir) {
  std::ifstream in(dir + "/manifest.json");
  if (!in) throw std::runtime_error("no manifest.json under " + dir);
  json manifest = json::parse(in);
  Dataset ds;
  for (const json& p : manifest.at("pairs")) {
    PairLabel lb;
    lb.wall = p.value("wall", "");
    lb.aspect_deg = p.value("aspect_deg", 0.0);
    lb.frame = p.value("frame", 0);
    lb.realization = p.value("realization", 0);
    lb.subject = p.value("subject", 0);
    ds.push(load_image(dir + "/" + p.at("clean").get<std::string>()),
            load_image(dir + "/" + p.at("corrupt").get<std::string>()),
            std::move(lb));
  }
  ds.validate();
  return ds;
}

}  // namespace twri
