#include "twri/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace twri::fft {

namespace {
// FFTW planning is not thread-safe; execution of a ready plan is.
std::mutex plan_mutex;
}  // namespace

void transform(cd* data, const std::vector<int>& shape, int sign) {
  if (shape.empty()) throw std::invalid_argument("fft: empty shape");
  std::size_t n = 1;
  for (int d : shape) {
    if (d <= 0) throw std::invalid_argument("fft: non-positive dimension");
    n *= static_cast<std::size_t>(d);
  }
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    plan = fftw_plan_dft(static_cast<int>(shape.size()), shape.data(), buf, buf,
                         sign == kForward ? FFTW_FORWARD : FFTW_BACKWARD,
                         FFTW_ESTIMATE);
  }
  if (!plan) throw std::runtime_error("fftw plan creation failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    fftw_destroy_plan(plan);
  }
}

void transform(std::vector<cd>& data, const std::vector<int>& shape, int sign) {
  std::size_t n = 1;
  for (int d : shape) n *= static_cast<std::size_t>(d > 0 ? d : 0);
  if (n != data.size()) throw std::invalid_argument("fft: shape/data mismatch");
  transform(data.data(), shape, sign);
}

int shift_index(int k, int n) { return (k + n / 2) % n; }

void fftshift(std::vector<cd>& data, const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) n *= static_cast<std::size_t>(d);
  if (n != data.size()) throw std::invalid_argument("fftshift: shape mismatch");
  std::vector<cd> out(data.size());
  const int ndim = static_cast<int>(shape.size());
  std::vector<int> idx(ndim, 0);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t dst = 0;
    for (int d = 0; d < ndim; ++d)
      dst = dst * shape[d] + shift_index(idx[d], shape[d]);
    out[dst] = data[flat];
    for (int d = ndim - 1; d >= 0; --d) {
      if (++idx[d] < shape[d]) break;
      idx[d] = 0;
    }
  }
  data.swap(out);
}

}  // namespace twri::fft
