#ifndef TWRI_ARRAY_FILE_HPP_
#define TWRI_ARRAY_FILE_HPP_

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace twri {

// Portable dense-array container: a short JSON header followed by the raw
// little-endian row-major payload.  Layout:
//   bytes 0..3   magic "ARR1"
//   bytes 4..7   header length L (uint32, little-endian)
//   bytes 8..8+L JSON header {"dtype":"f64"|"c128","shape":[...],
//                             "order":"little","label":"..."}
//   remainder    payload, product(shape) * sizeof(dtype) bytes

enum class Dtype { f64, c128 };

struct ArrayData {
  Dtype dtype = Dtype::f64;
  std::vector<std::int64_t> shape;
  std::string label;
  std::vector<double> reals;                 // valid when dtype == f64
  std::vector<std::complex<double>> cplx;    // valid when dtype == c128

  std::int64_t size() const;
};

void write_array(const std::string& path, const std::vector<std::int64_t>& shape,
                 const std::vector<double>& values, const std::string& label = "");
void write_array(const std::string& path, const std::vector<std::int64_t>& shape,
                 const std::vector<std::complex<double>>& values,
                 const std::string& label = "");

ArrayData read_array(const std::string& path);

}  // namespace twri

#endif  // TWRI_ARRAY_FILE_HPP_
