#include "nsdiag/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace nsdiag::fft {

namespace {

struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

std::mutex g_plan_mutex;
std::map<int, Plans>& plan_cache() {
  static std::map<int, Plans> cache;
  return cache;
}

// Plans are created once per n with FFTW_UNALIGNED so they can execute on any
// caller buffer via the new-array interface.
Plans& plans_for(int n) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto& cache = plan_cache();
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  const std::size_t nreal = static_cast<std::size_t>(n) * n * n;
  const std::size_t nspec = spectral_size(n);
  std::vector<double> real_buf(nreal);
  std::vector<std::complex<double>> spec_buf(nspec);

  Plans p;
  p.r2c = fftw_plan_dft_r2c_3d(n, n, n, real_buf.data(),
                               reinterpret_cast<fftw_complex*>(spec_buf.data()),
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.c2r = fftw_plan_dft_c2r_3d(n, n, n,
                               reinterpret_cast<fftw_complex*>(spec_buf.data()),
                               real_buf.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p.r2c || !p.c2r) throw std::runtime_error("fftw plan creation failed");
  return cache.emplace(n, p).first->second;
}

} // namespace

std::size_t spectral_size(int n) {
  return static_cast<std::size_t>(n / 2 + 1) * n * n;
}

void forward(int n, const double* in, std::complex<double>* out) {
  Plans& p = plans_for(n);
  // out-of-place r2c preserves its input; copy keeps the API const-correct
  thread_local std::vector<double> scratch;
  const std::size_t nreal = static_cast<std::size_t>(n) * n * n;
  scratch.resize(nreal);
  std::memcpy(scratch.data(), in, nreal * sizeof(double));
  fftw_execute_dft_r2c(p.r2c, scratch.data(), reinterpret_cast<fftw_complex*>(out));
}

void inverse(int n, const std::complex<double>* in, double* out) {
  Plans& p = plans_for(n);
  // multi-dimensional c2r destroys its input, so transform a scratch copy
  thread_local std::vector<std::complex<double>> scratch;
  const std::size_t nspec = spectral_size(n);
  scratch.resize(nspec);
  std::memcpy(scratch.data(), in, nspec * sizeof(std::complex<double>));
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out);
  const double norm = 1.0 / (static_cast<double>(n) * n * n);
  const std::size_t nreal = static_cast<std::size_t>(n) * n * n;
  for (std::size_t i = 0; i < nreal; ++i) out[i] *= norm;
}

} // namespace nsdiag::fft
