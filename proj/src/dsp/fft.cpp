#include "ltecir/dsp/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

namespace ltecir::dsp {
namespace {

// FFTW planning is not thread safe; execution on private buffers is.
std::mutex g_plan_mutex;

struct CachedPlan {
  fftw_plan plan = nullptr;
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  size_t n = 0;

  ~CachedPlan() {
    if (plan) fftw_destroy_plan(plan);
    if (in) fftw_free(in);
    if (out) fftw_free(out);
  }
};

std::vector<cplx> run(std::span<const cplx> x, int sign) {
  thread_local std::map<std::pair<size_t, int>, CachedPlan> cache;
  const size_t n = x.size();
  if (n == 0) throw std::invalid_argument("fft: empty input");

  auto& entry = cache[{n, sign}];
  if (!entry.plan) {
    entry.in = fftw_alloc_complex(n);
    entry.out = fftw_alloc_complex(n);
    entry.n = n;
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    entry.plan = fftw_plan_dft_1d(static_cast<int>(n), entry.in, entry.out, sign, FFTW_ESTIMATE);
  }
  std::memcpy(entry.in, x.data(), n * sizeof(cplx));
  fftw_execute(entry.plan);
  std::vector<cplx> out(n);
  std::memcpy(out.data(), entry.out, n * sizeof(cplx));
  return out;
}

}  // namespace

std::vector<cplx> fft(std::span<const cplx> in) { return run(in, FFTW_FORWARD); }

std::vector<cplx> ifft(std::span<const cplx> in) { return run(in, FFTW_BACKWARD); }

std::vector<cplx> ifft_scaled(std::span<const cplx> in) {
  auto out = run(in, FFTW_BACKWARD);
  const double s = 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= s;
  return out;
}

}  // namespace ltecir::dsp
