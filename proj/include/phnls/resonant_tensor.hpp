#pragma once

#include <optional>
#include <vector>

#include "phnls/hermite.hpp"

namespace phnls {

/// Coupling coefficients D[n1, n2, n3] = integral of h_n1 h_n2 h_n3 h_n with
/// n = n1 - n2 + n3, stored densely over (n1, n2, n3); entries whose implied
/// n falls outside [0, n_max) are zero and flagged as not stored.
/// Optionally also holds the full overlap table Q[n1, n2, n3, n4].
class ResonantTensor {
 public:
  ResonantTensor() = default;
  ResonantTensor(int n_max, std::vector<double> values, std::optional<std::vector<double>> quad);

  int n_max() const { return n_max_; }

  static bool stored(int n_max, int n1, int n2, int n3) {
    const int n = n1 - n2 + n3;
    return n >= 0 && n < n_max;
  }
  bool stored(int n1, int n2, int n3) const { return stored(n_max_, n1, n2, n3); }

  double value(int n1, int n2, int n3) const { return values_[offset(n1, n2, n3)]; }
  const std::vector<double>& values() const { return values_; }

  bool has_quad() const { return quad_.has_value(); }
  double quad(int a, int b, int c, int d) const;

 private:
  std::size_t offset(int n1, int n2, int n3) const {
    return (static_cast<std::size_t>(n1) * n_max_ + n2) * n_max_ + n3;
  }

  int n_max_ = 0;
  std::vector<double> values_;
  std::optional<std::vector<double>> quad_;
};

/// Builds D from an exp(-x^2) rule (or a product rule) with count >= 2 n_max;
/// the exp(-2x^2) substitution makes every entry an exact quadrature.
ResonantTensor compute_tensor(int n_max, const HermiteRule& rule, bool with_quad = false);

/// Integral of h_n1 h_n2 h_n3 h_n4 on the same exactness rule.
double quad_overlap(int n1, int n2, int n3, int n4, const HermiteRule& rule);

/// Sum of |D| over stored entries in index order.
double tensor_checksum(const ResonantTensor& tensor);

}  // namespace phnls
