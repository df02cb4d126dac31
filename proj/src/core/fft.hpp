#pragma once

#include <map>
#include <memory>
#include <mutex>

#include "phnls/common.hpp"

namespace phnls::detail {

/// Batched in-place n x n complex FFTs over contiguous slices, backed by
/// FFTW. Forward is unscaled, inverse is unscaled (callers own the 1/n^2).
class Fft2D {
 public:
  explicit Fft2D(int n);
  ~Fft2D();
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  int size() const { return n_; }
  void forward(cplx* data, int howmany) const;
  void inverse(cplx* data, int howmany) const;

 private:
  void* plan_for(int howmany, int sign) const;

  int n_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<int, int>, void*> plans_;
};

/// Process-wide instance for auxiliary sizes (padded grids).
const Fft2D& shared_fft(int n);

}  // namespace phnls::detail
