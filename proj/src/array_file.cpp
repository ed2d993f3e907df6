#include "twri/array_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

static_assert(std::endian::native == std::endian::little,
              "array files are little-endian; big-endian hosts are unsupported");

namespace twri {

namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'A', 'R', 'R', '1'};

std::int64_t checked_size(const std::vector<std::int64_t>& shape) {
  if (shape.empty()) throw std::invalid_argument("array shape must be non-empty");
  std::int64_t n = 1;
  for (std::int64_t dim : shape) {
    if (dim <= 0) throw std::invalid_argument("array dimensions must be positive");
    n *= dim;
  }
  return n;
}

void write_header_and_payload(const std::string& path, Dtype dtype,
                              const std::vector<std::int64_t>& shape,
                              const std::string& label, const void* payload,
                              std::size_t payload_bytes) {
  json header;
  header["dtype"] = dtype == Dtype::f64 ? "f64" : "c128";
  header["shape"] = shape;
  header["order"] = "little";
  header["label"] = label;
  const std::string text = header.dump();
  if (text.size() > UINT32_MAX) throw std::length_error("array header too large");

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kMagic, 4);
  const std::uint32_t len = static_cast<std::uint32_t>(text.size());
  out.write(reinterpret_cast<const char*>(&len), 4);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.write(static_cast<const char*>(payload),
            static_cast<std::streamsize>(payload_bytes));
  if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace

std::int64_t ArrayData::size() const {
  std::int64_t n = 1;
  for (std::int64_t dim : shape) n *= dim;
  return shape.empty() ? 0 : n;
}

void write_array(const std::string& path, const std::vector<std::int64_t>& shape,
                 const std::vector<double>& values, const std::string& label) {
  const std::int64_t n = checked_size(shape);
  if (n != static_cast<std::int64_t>(values.size()))
    throw std::invalid_argument("value count does not match shape");
  write_header_and_payload(path, Dtype::f64, shape, label, values.data(),
                           values.size() * sizeof(double));
}

void write_array(const std::string& path, const std::vector<std::int64_t>& shape,
                 const std::vector<std::complex<double>>& values,
                 const std::string& label) {
  const std::int64_t n = checked_size(shape);
  if (n != static_cast<std::int64_t>(values.size()))
    throw std::invalid_argument("value count does not match shape");
  write_header_and_payload(path, Dtype::c128, shape, label, values.data(),
                           values.size() * sizeof(std::complex<double>));
}

ArrayData read_array(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);

  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error(path + ": not an ARR1 file");

  std::uint32_t len = 0;
  in.read(reinterpret_cast<char*>(&len), 4);
  if (!in) throw std::runtime_error(path + ": truncated header length");

  std::string text(len, '\0');
  in.read(text.data(), len);
  if (!in) throw std::runtime_error(path + ": truncated header");

  json header = json::parse(text);
  ArrayData arr;
  const std::string dtype = header.at("dtype").get<std::string>();
  if (dtype == "f64")
    arr.dtype = Dtype::f64;
  else if (dtype == "c128")
    arr.dtype = Dtype::c128;
  else
    throw std::runtime_error(path + ": unsupported dtype " + dtype);
  arr.shape = header.at("shape").get<std::vector<std::int64_t>>();
  arr.label = header.value("label", "");
  const std::int64_t n = checked_size(arr.shape);

  if (arr.dtype == Dtype::f64) {
    arr.reals.resize(static_cast<std::size_t>(n));
    in.read(reinterpret_cast<char*>(arr.reals.data()),
            static_cast<std::streamsize>(n * sizeof(double)));
  } else {
    arr.cplx.resize(static_cast<std::size_t>(n));
    in.read(reinterpret_cast<char*>(arr.cplx.data()),
            static_cast<std::streamsize>(n * sizeof(std::complex<double>)));
  }
  if (!in) throw std::runtime_error(path + ": truncated payload");
  return arr;
}

}  // namespace twri
