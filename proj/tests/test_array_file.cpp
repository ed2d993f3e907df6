#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <vector>

#include "doctest.h"
#include "twri/array_file.hpp"

using namespace twri;
namespace fs = std::filesystem;

namespace {

std::string temp_path(const std::string& name) {
  return (fs::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("real round trip preserves shape, payload and label") {
  const std::string path = temp_path("arr_rt_f64.arr");
  const std::vector<std::int64_t> shape{2, 2};
  const std::vector<double> values{1.0, 2.0, 3.0, 4.0};
  write_array(path, shape, values, "demo");

  const ArrayData arr = read_array(path);
  CHECK(arr.dtype == Dtype::f64);
  CHECK(arr.shape == shape);
  CHECK(arr.label == "demo");
  CHECK(arr.reals == values);
  CHECK(arr.size() == 4);
  fs::remove(path);
}

TEST_CASE("complex round trip preserves payload") {
  const std::string path = temp_path("arr_rt_c128.arr");
  const std::vector<std::complex<double>> values{
      {1.0, -2.0}, {0.0, 3.5}, {-4.25, 0.0}};
  write_array(path, {3}, values);

  const ArrayData arr = read_array(path);
  CHECK(arr.dtype == Dtype::c128);
  REQUIRE(arr.cplx.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(arr.cplx[i] == values[i]);
  fs::remove(path);
}

TEST_CASE("three-dimensional shapes survive the round trip") {
  const std::string path = temp_path("arr_rt_3d.arr");
  std::vector<double> values(2 * 3 * 4);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = 0.5 * double(i);
  write_array(path, {2, 3, 4}, values);
  const ArrayData arr = read_array(path);
  CHECK(arr.shape == std::vector<std::int64_t>{2, 3, 4});
  CHECK(arr.reals == values);
  fs::remove(path);
}

TEST_CASE("file layout is magic, header length, JSON, raw payload") {
  const std::string path = temp_path("arr_layout.arr");
  write_array(path, {2, 2}, std::vector<double>{1.0, 2.0, 3.0, 4.0});

  std::ifstream in(path, std::ios::binary);
  char magic[4];
  in.read(magic, 4);
  CHECK(std::string(magic, 4) == "ARR1");
  std::uint32_t len = 0;
  in.read(reinterpret_cast<char*>(&len), 4);
  CHECK(len > 0);
  CHECK(fs::file_size(path) == 8 + len + 4 * sizeof(double));
  fs::remove(path);
}

TEST_CASE("degenerate shapes are rejected") {
  const std::string path = temp_path("arr_bad.arr");
  CHECK_THROWS(write_array(path, {}, std::vector<double>{}));
  CHECK_THROWS(write_array(path, {0}, std::vector<double>{}));
  CHECK_THROWS(write_array(path, {2, -1}, std::vector<double>{1.0, 2.0}));
}

TEST_CASE("shape and value count must agree") {
  const std::string path = temp_path("arr_mismatch.arr");
  CHECK_THROWS(write_array(path, {3}, std::vector<double>{1.0, 2.0}));
  CHECK_THROWS(write_array(path, {2}, std::vector<double>{1.0, 2.0, 3.0}));
}

TEST_CASE("missing and malformed files raise") {
  CHECK_THROWS(read_array(temp_path("arr_does_not_exist.arr")));

  const std::string path = temp_path("arr_garbage.arr");
  {
    std::ofstream out(path, std::ios::binary);
    out << "this is not an array file";
  }
  CHECK_THROWS(read_array(path));
  fs::remove(path);
}

TEST_CASE("truncated payloads raise") {
  const std::string path = temp_path("arr_trunc.arr");
  write_array(path, {4}, std::vector<double>{1.0, 2.0, 3.0, 4.0});
  const auto full = fs::file_size(path);
  fs::resize_file(path, full - 8);
  CHECK_THROWS(read_array(path));
  fs::remove(path);
}

TEST_CASE("overwriting an existing file replaces its contents") {
  const std::string path = temp_path("arr_overwrite.arr");
  write_array(path, {2}, std::vector<double>{1.0, 2.0}, "first");
  write_array(path, {3}, std::vector<double>{7.0, 8.0, 9.0}, "second");
  const ArrayData arr = read_array(path);
  CHECK(arr.shape == std::vector<std::int64_t>{3});
  CHECK(arr.label == "second");
  CHECK(arr.reals[2] == 9.0);
  fs::remove(path);
}
