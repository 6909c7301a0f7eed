#include "corevac/fd.hpp"

#include <algorithm>
#include <stdexcept>

namespace corevac {

std::vector<double> fornberg_weights(double x0, std::span<const double> x, int m) {
  const int n = static_cast<int>(x.size());
  if (n < m + 1) throw std::invalid_argument("fornberg_weights: stencil too small");
  // B. Fornberg, Math. Comp. 51 (1988), 699-706.
  std::vector<double> c(static_cast<size_t>(n) * (m + 1), 0.0);
  auto C = [&](int i, int j) -> double& { return c[static_cast<size_t>(i) * (m + 1) + j]; };
  double c1 = 1.0;
  double c4 = x[0] - x0;
  C(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
        C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k)
        C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
      C(j, 0) = c4 * C(j, 0) / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = C(i, m);
  return w;
}

DiffOp::DiffOp(std::span<const double> nodes) {
  const int np = static_cast<int>(nodes.size());
  if (np < 5) throw std::invalid_argument("DiffOp: need at least 5 nodes");
  rows_.resize(np);
  for (int i = 0; i < np; ++i) {
    const int s = std::clamp(i - 2, 0, np - 5);
    const auto w = fornberg_weights(nodes[i], nodes.subspan(s, 5), 1);
    rows_[i].start = s;
    std::copy(w.begin(), w.end(), rows_[i].w.begin());
  }
}

void DiffOp::apply(std::span<const double> f, std::span<double> df) const {
  for (size_t i = 0; i < rows_.size(); ++i) {
    const Row& r = rows_[i];
    double acc = 0.0;
    for (int j = 0; j < 5; ++j) acc += r.w[j] * f[r.start + j];
    df[i] = acc;
  }
}

std::vector<double> DiffOp::apply(std::span<const double> f) const {
  std::vector<double> df(rows_.size());
  apply(f, df);
  return df;
}

}  // namespace corevac
