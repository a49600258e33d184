#include "pathent/kernels.hpp"

#include <cmath>
#include <limits>

#include <omp.h>

namespace pathent::kernels {

namespace {

void check_mode(const ModeLayout& layout, std::size_t mode, Eigen::Index op_dim) {
  if (mode >= layout.num_modes()) throw ValidationError("kernel mode index out of range");
  if (op_dim != layout.dim(mode)) throw ValidationError("local operator does not fit the mode");
}

// (I x op x I) m, applied column by column.
Matrix left_apply(const Matrix& m, const ModeLayout& layout, std::size_t mode, const Matrix& op) {
  const Eigen::Index d = layout.dim(mode);
  const Eigen::Index right = layout.stride(mode);
  const Eigen::Index left = layout.total_dim() / (d * right);
  Matrix out(m.rows(), m.cols());
  const Eigen::Index cols = m.cols();
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index l = 0; l < left; ++l) {
      for (Eigen::Index r = 0; r < right; ++r) {
        const Eigen::Index base = l * d * right + r;
        for (Eigen::Index i = 0; i < d; ++i) {
          Complex acc = 0.0;
          for (Eigen::Index a = 0; a < d; ++a) acc += op(i, a) * m(base + a * right, j);
          out(base + i * right, j) = acc;
        }
      }
    }
  }
  return out;
}

bool better(double value, std::size_t index, double best_value, std::size_t best_index) {
  if (std::isnan(value)) return false;
  if (std::isnan(best_value)) return true;
  return value > best_value || (value == best_value && index < best_index);
}

}  // namespace

double grid_point(double lo, double hi, std::size_t i, std::size_t n) {
  if (n <= 1 || hi == lo) return lo;
  if (i + 1 == n) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

Matrix apply_local_channel(const Matrix& rho, const ModeLayout& layout, std::size_t mode,
                           std::span<const Matrix> kraus) {
  Matrix out = Matrix::Zero(rho.rows(), rho.cols());
  for (const Matrix& k : kraus) {
    check_mode(layout, mode, k.rows());
    const Matrix half = left_apply(rho, layout, mode, k);
    out += left_apply(half.adjoint(), layout, mode, k).adjoint();
  }
  return out;
}

Vector apply_local_operator(const Vector& psi, const ModeLayout& layout, std::size_t mode,
                            const Matrix& op) {
  check_mode(layout, mode, op.rows());
  return left_apply(psi, layout, mode, op);
}

GridMaximum grid_maximize(const Objective2d& f, const Box& box, std::size_t n1, std::size_t n2) {
  const std::size_t cells = n1 * n2;
  GridMaximum best{std::numeric_limits<double>::quiet_NaN(), box.lo1, box.lo2, 0};
#pragma omp parallel
  {
    GridMaximum local{std::numeric_limits<double>::quiet_NaN(), box.lo1, box.lo2, 0};
#pragma omp for schedule(static) nowait
    for (std::size_t c = 0; c < cells; ++c) {
      const double x1 = grid_point(box.lo1, box.hi1, c / n2, n1);
      const double x2 = grid_point(box.lo2, box.hi2, c % n2, n2);
      const double v = f(x1, x2);
      if (better(v, c, local.value, local.index)) local = {v, x1, x2, c};
    }
#pragma omp critical(pathent_grid_reduce)
    {
      if (better(local.value, local.index, best.value, best.index)) best = local;
    }
  }
  return best;
}

}  // namespace pathent::kernels
