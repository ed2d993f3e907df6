#ifndef TWRI_FFT_HPP_
#define TWRI_FFT_HPP_

#include <vector>

#include "twri/geometry.hpp"

namespace twri::fft {

inline constexpr int kForward = -1;   // e^{-j2pi kn/N} kernel
inline constexpr int kBackward = +1;

/// In-place n-dimensional complex DFT over a row-major array; unnormalized
/// (backward followed by forward scales by the element count).
void transform(cd* data, const std::vector<int>& shape, int sign);
void transform(std::vector<cd>& data, const std::vector<int>& shape, int sign);

/// Index of frequency bin k in fftshifted order for length n.
int shift_index(int k, int n);

/// In-place fftshift along every axis of a row-major array.
void fftshift(std::vector<cd>& data, const std::vector<int>& shape);

}  // namespace twri::fft

#endif  // TWRI_FFT_HPP_
