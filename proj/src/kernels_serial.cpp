#include <cmath>
#include <limits>

#include "pathent/kernels.hpp"

namespace pathent::kernels::serial {

Matrix apply_local_channel(const Matrix& rho, const ModeLayout& layout, std::size_t mode,
                           std::span<const Matrix> kraus) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const Matrix& k : kraus) {
    const Matrix full = embed(k, mode, layout);
    out += full * rho * full.adjoint();
  }
  return out;
}

Vector apply_local_operator(const Vector& psi, const ModeLayout& layout, std::size_t mode,
                            const Matrix& op) {
  return embed(op, mode, layout) * psi;
}

GridMaximum grid_maximize(const Objective2d& f, const Box& box, std::size_t n1, std::size_t n2) {
  GridMaximum best{-std::numeric_limits<double>::infinity(), box.lo1, box.lo2, 0};
  bool found = false;
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const double x1 = grid_point(box.lo1, box.hi1, i, n1);
      const double x2 = grid_point(box.lo2, box.hi2, j, n2);
      const double v = f(x1, x2);
      if (std::isnan(v)) continue;
      if (!found || v > best.value) {
        best = {v, x1, x2, i * n2 + j};
        found = true;
      }
    }
  }
  if (!found) best.value = std::numeric_limits<double>::quiet_NaN();
  return best;
}

}  // namespace pathent::kernels::serial
