#include "phnls/resonant_tensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace phnls {
namespace {

// Nodes and weights for exp(-2x^2), with the basis evaluated up to n_max.
struct ProductNodes {
  std::vector<double> weights;  // integrates f(x) dx for f = poly * exp(-2x^2)
  std::vector<double> basis;    // [m * n_max + n]
  int count = 0;
  int n_max = 0;
};

ProductNodes product_nodes(int n_max, const HermiteRule& rule) {
  if (rule.count < 2 * n_max)
    fail(ErrorCode::invalid_argument, "quadrature has " + std::to_string(rule.count) +
                                          " nodes; n_max = " + std::to_string(n_max) +
                                          " requires at least " + std::to_string(2 * n_max));
  if (rule.exponent != 1.0 && rule.exponent != 2.0)
    fail(ErrorCode::invalid_argument, "unsupported rule exponent");
  ProductNodes out;
  out.count = rule.count;
  out.n_max = n_max;
  out.weights.resize(rule.count);
  out.basis.resize(static_cast<std::size_t>(rule.count) * std::max(n_max, 1));
  const double scale = rule.exponent == 1.0 ? std::sqrt(2.0) : 1.0;
  std::vector<double> h(std::max(n_max, 1));
  for (int m = 0; m < rule.count; ++m) {
    const double x = rule.nodes[m] / scale;
    out.weights[m] = rule.transform_weights[m] / scale;
    eval_hermite_all(x, h);
    for (int n = 0; n < n_max; ++n) out.basis[static_cast<std::size_t>(m) * n_max + n] = h[n];
  }
  return out;
}

double overlap(const ProductNodes& q, int a, int b, int c, int d) {
  double s = 0.0;
  for (int m = 0; m < q.count; ++m) {
    const double* h = q.basis.data() + static_cast<std::size_t>(m) * q.n_max;
    s += q.weights[m] * h[a] * h[b] * h[c] * h[d];
  }
  return s;
}

}  // namespace

ResonantTensor::ResonantTensor(int n_max, std::vector<double> values,
                               std::optional<std::vector<double>> quad)
    : n_max_(n_max), values_(std::move(values)), quad_(std::move(quad)) {}

double ResonantTensor::quad(int a, int b, int c, int d) const {
  if (!quad_) fail(ErrorCode::invalid_argument, "tensor was built without quadruple overlaps");
  const std::size_t n = static_cast<std::size_t>(n_max_);
  return (*quad_)[((a * n + b) * n + c) * n + d];
}

ResonantTensor compute_tensor(int n_max, const HermiteRule& rule, bool with_quad) {
  require(n_max >= 0, "n_max must be nonnegative");
  if (n_max == 0) return ResonantTensor(0, {}, with_quad ? std::optional<std::vector<double>>(std::vector<double>{}) : std::nullopt);
  const ProductNodes q = product_nodes(n_max, rule);
  const std::size_t n = static_cast<std::size_t>(n_max);
  std::vector<double> values(n * n * n, 0.0);

  // One unordered (n1, n3) pair per task; the n1 <-> n3 mirror is copied.
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n_max; ++a)
    for (int c = a; c < n_max; ++c) pairs.emplace_back(a, c);
  parallel_for(pairs.size(), [&](std::size_t i) {
    const auto [n1, n3] = pairs[i];
    for (int n2 = 0; n2 < n_max; ++n2) {
      const int m = n1 - n2 + n3;
      if (m < 0 || m >= n_max) continue;
      // Odd total degree integrates to zero; n1 + n2 + n3 + m = 2(n1 + n3) is even
      // on the resonant set, so every stored entry is a genuine quadrature.
      const double v = overlap(q, n1, n2, n3, m);
      values[(n1 * n + n2) * n + n3] = v;
      values[(n3 * n + n2) * n + n1] = v;
    }
  });

  std::optional<std::vector<double>> quad;
  if (with_quad) {
    std::vector<double> table(n * n * n * n, 0.0);
    std::vector<std::array<int, 4>> sorted;
    for (int a = 0; a < n_max; ++a)
      for (int b = a; b < n_max; ++b)
        for (int c = b; c < n_max; ++c)
          for (int d = c; d < n_max; ++d)
            if ((a + b + c + d) % 2 == 0) sorted.push_back({a, b, c, d});
    parallel_for(sorted.size(), [&](std::size_t i) {
      std::array<int, 4> idx = sorted[i];
      const double v = overlap(q, idx[0], idx[1], idx[2], idx[3]);
      do {
        table[((idx[0] * n + idx[1]) * n + idx[2]) * n + idx[3]] = v;
      } while (std::next_permutation(idx.begin(), idx.end()));
    });
    quad = std::move(table);
  }
  return ResonantTensor(n_max, std::move(values), std::move(quad));
}

double quad_overlap(int n1, int n2, int n3, int n4, const HermiteRule& rule) {
  for (int v : {n1, n2, n3, n4}) require(v >= 0, "overlap indices must be nonnegative");
  const int n_max = std::max({n1, n2, n3, n4}) + 1;
  if ((n1 + n2 + n3 + n4) % 2 != 0) {
    // Still validate the rule so callers see a consistent contract.
    if (rule.count < 2 * n_max)
      fail(ErrorCode::invalid_argument, "quadrature has " + std::to_string(rule.count) +
                                            " nodes; indices up to " + std::to_string(n_max - 1) +
                                            " require at least " + std::to_string(2 * n_max));
    return 0.0;
  }
  // Canonical order so every permutation sees bitwise the same sum.
  std::array<int, 4> idx = {n1, n2, n3, n4};
  std::sort(idx.begin(), idx.end());
  const ProductNodes q = product_nodes(n_max, rule);
  return overlap(q, idx[0], idx[1], idx[2], idx[3]);
}

double tensor_checksum(const ResonantTensor& tensor) {
  double s = 0.0;
  const int n = tensor.n_max();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (tensor.stored(a, b, c)) s += std::abs(tensor.value(a, b, c));
  return s;
}

}  // namespace phnls
