#include "fft.hpp"

#include <fftw3.h>

#include <vector>

namespace phnls::detail {
namespace {
// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft2D::Fft2D(int n) : n_(n) { require(n >= 1, "FFT size must be positive"); }

Fft2D::~Fft2D() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  for (auto& [key, plan] : plans_) fftw_destroy_plan(static_cast<fftw_plan>(plan));
}

void* Fft2D::plan_for(int howmany, int sign) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto key = std::make_pair(howmany, sign);
  auto it = plans_.find(key);
  if (it != plans_.end()) return it->second;
  std::lock_guard<std::mutex> plock(planner_mutex());
  const int dims[2] = {n_, n_};
  const int dist = n_ * n_;
  std::vector<cplx> scratch(static_cast<std::size_t>(dist) * howmany);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_many_dft(2, dims, howmany, buf, nullptr, 1, dist, buf, nullptr, 1,
                                      dist, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan) fail(ErrorCode::internal, "FFTW planning failed");
  plans_.emplace(key, plan);
  return plan;
}

void Fft2D::forward(cplx* data, int howmany) const {
  if (howmany <= 0) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(plan_for(howmany, FFTW_FORWARD)), buf, buf);
}

void Fft2D::inverse(cplx* data, int howmany) const {
  if (howmany <= 0) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(static_cast<fftw_plan>(plan_for(howmany, FFTW_BACKWARD)), buf, buf);
}

const Fft2D& shared_fft(int n) {
  static std::mutex m;
  static std::map<int, std::unique_ptr<Fft2D>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Fft2D>(n);
  return *slot;
}

}  // namespace phnls::detail
