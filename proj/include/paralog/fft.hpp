#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "paralog/grid.hpp"

namespace paralog {

/// In-place complex DFT over the lattice; shape is in grid order (axis 0
/// fastest). Forward uses e^{-i x xi}; inverse applies the 1/N factor.
void fft_forward(std::vector<std::complex<double>>& data, std::span<const int> shape);
void fft_inverse(std::vector<std::complex<double>>& data, std::span<const int> shape);

/// Copies grid values into a complex buffer.
std::vector<std::complex<double>> fft_of(const GridFunction& f);

/// Extracts the real part as a GridFunction. The imaginary residue must stay
/// below 1e-10 * max(1, scale); anything larger means a broken multiplier
/// symmetry and throws.
GridFunction real_part(const GridSpec& spec,
                       const std::vector<std::complex<double>>& data,
                       std::string label, double scale);

/// Signed frequency index for bin i of an axis with N samples.
inline int signed_mode(int i, int n) { return i <= n / 2 ? i : i - n; }

/// Continuous frequency 2*pi*k/L for bin i.
inline double lattice_frequency(const GridSpec& spec, int axis, int i) {
    return 2.0 * M_PI * signed_mode(i, spec.shape[axis]) / spec.length(axis);
}

}  // namespace paralog
