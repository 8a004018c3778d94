#pragma once

#include "relmech/tensor.hpp"

namespace relmech::detail {

// Classic fourth-order Runge-Kutta step for an autonomous system y' = f(y).
template <typename Rhs>
Vector rk4_step(const Vector& y, double h, Rhs&& f) {
  const Vector k1 = f(y);
  const Vector k2 = f((y + 0.5 * h * k1).eval());
  const Vector k3 = f((y + 0.5 * h * k2).eval());
  const Vector k4 = f((y + h * k3).eval());
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline bool all_finite(const Vector& y) { return y.allFinite(); }

}  // namespace relmech::detail
