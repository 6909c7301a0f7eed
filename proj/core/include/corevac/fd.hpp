#ifndef COREVAC_FD_HPP
#define COREVAC_FD_HPP

#include <array>
#include <span>
#include <vector>

namespace corevac {

/// Finite-difference weights for the m-th derivative at x0 on an arbitrary
/// stencil (Fornberg's recurrence).
std::vector<double> fornberg_weights(double x0, std::span<const double> x, int m);

/// First-derivative operator on a nonuniform mesh: 5-point stencils,
/// centered in the interior and one-sided at the ends (fourth order).
class DiffOp {
 public:
  struct Row {
    int start;
    std::array<double, 5> w;
  };

  explicit DiffOp(std::span<const double> nodes);

  void apply(std::span<const double> f, std::span<double> df) const;
  std::vector<double> apply(std::span<const double> f) const;

  const Row& row(int i) const { return rows_[i]; }
  int size() const { return static_cast<int>(rows_.size()); }

 private:
  std::vector<Row> rows_;
};

}  // namespace corevac

#endif
