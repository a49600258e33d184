#pragma once

// Data-parallel inner loops. The functions in `pathent::kernels` are the
// OpenMP versions used by the library; `pathent::kernels::serial` keeps a
// straightforward reference for each one (dense embedding, plain loops) that
// the tests and bench_kernels compare against.

#include <cstddef>
#include <functional>
#include <span>

#include "pathent/fock.hpp"

namespace pathent::kernels {

struct Box {
  double lo1 = 0.0;
  double hi1 = 0.0;
  double lo2 = 0.0;
  double hi2 = 0.0;
};

struct GridMaximum {
  double value = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  std::size_t index = 0;  // row-major cell index, i1 * n2 + i2
};

using Objective2d = std::function<double(double, double)>;

// Grid coordinate i of n points spanning [lo, hi]; a degenerate interval
// yields lo for every i.
double grid_point(double lo, double hi, std::size_t i, std::size_t n);

/// sum_k K_k rho K_k^dag with every K_k acting on `mode` only.
Matrix apply_local_channel(const Matrix& rho, const ModeLayout& layout, std::size_t mode,
                           std::span<const Matrix> kraus);

/// (I x op x I) psi with op acting on `mode`.
Vector apply_local_operator(const Vector& psi, const ModeLayout& layout, std::size_t mode,
                            const Matrix& op);

/// Maximum of `f` over an n1 x n2 grid spanning the box. Ties go to the
/// lowest cell index regardless of thread count.
GridMaximum grid_maximize(const Objective2d& f, const Box& box, std::size_t n1, std::size_t n2);

namespace serial {

Matrix apply_local_channel(const Matrix& rho, const ModeLayout& layout, std::size_t mode,
                           std::span<const Matrix> kraus);
Vector apply_local_operator(const Vector& psi, const ModeLayout& layout, std::size_t mode,
                            const Matrix& op);
GridMaximum grid_maximize(const Objective2d& f, const Box& box, std::size_t n1, std::size_t n2);

}  // namespace serial

}  // namespace pathent::kernels
