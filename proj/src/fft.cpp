#include "spdelab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace spdelab {

namespace {

std::mutex g_plan_mutex;

fftw_plan plan_for(int n, int dim, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  const auto key = std::make_tuple(n, dim, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  // Plan on a scratch buffer with FFTW_UNALIGNED so the plan can later be
  // executed on any caller buffer via fftw_execute_dft.
  const std::size_t total = dim == 1 ? std::size_t(n) : std::size_t(n) * n;
  fftw_complex* scratch = fftw_alloc_complex(total);
  fftw_plan p = dim == 1
                    ? fftw_plan_dft_1d(n, scratch, scratch, sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED)
                    : fftw_plan_dft_2d(n, n, scratch, scratch, sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(scratch);
  if (!p) throw std::runtime_error("fftw plan creation failed");
  cache.emplace(key, p);
  return p;
}

void execute(std::vector<Complex>& data, int n, int dim, int sign) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("dft: dim must be 1 or 2");
  const std::size_t total = dim == 1 ? std::size_t(n) : std::size_t(n) * n;
  if (data.size() != total) throw std::invalid_argument("dft: buffer size mismatch");
  fftw_plan p = plan_for(n, dim, sign);
  fftw_complex* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p, buf, buf);
}

}  // namespace

void dft_forward(std::vector<Complex>& data, int n, int dim) {
  execute(data, n, dim, FFTW_FORWARD);
}

void dft_inverse(std::vector<Complex>& data, int n, int dim) {
  execute(data, n, dim, FFTW_BACKWARD);
}

void dft_coefficients(std::vector<Complex>& data, int n, int dim) {
  execute(data, n, dim, FFTW_FORWARD);
  const double scale = dim == 1 ? 1.0 / n : 1.0 / (double(n) * n);
  for (auto& v : data) v *= scale;
}

}  // namespace spdelab
