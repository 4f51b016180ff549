#pragma once

#include <complex>
#include <cstddef>

namespace nsdiag::fft {

// Real-to-complex 3D transforms on an n x n x n box, x-fastest storage.
// The complex half-spectrum has (n/2+1)*n*n entries, kx-fastest.
// Plans are cached per n and shared; execution is thread-safe.

std::size_t spectral_size(int n);

// out must hold spectral_size(n) entries. Input is preserved.
void forward(int n, const double* in, std::complex<double>* out);

// Normalized inverse (divides by n^3). Input is preserved.
void inverse(int n, const std::complex<double>* in, double* out);

} // namespace nsdiag::fft
