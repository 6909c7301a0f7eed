#ifndef COREVAC_ENERGY_REPORT_HPP
#define COREVAC_ENERGY_REPORT_HPP

#include <array>
#include <map>
#include <utility>

namespace corevac {

/// Weighted energy functionals at one instant.
struct EnergyReport {
  double time = 0.0;
  std::array<double, 3> e_j{};  ///< E_j for j = 0..2
  std::array<double, 3> d_j{};  ///< D_j for j = 0..2
  std::map<std::pair<int, int>, double> e_ji;  ///< E_{j,i}, i >= 1, j+i <= order_cap
  double total = 0.0;  ///< sum of the E_j plus E_{0,1}; higher mixed terms
                       ///< are recorded in e_ji but excluded (norm-equivalent)
  int j_max = 2;
  int n_ladder = 0;  ///< 4 + floor(alpha), nominal ladder depth

  double e01() const {
    auto it = e_ji.find({0, 1});
    return it == e_ji.end() ? 0.0 : it->second;
  }
};

}  // namespace corevac

#endif
