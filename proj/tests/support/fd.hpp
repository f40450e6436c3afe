#pragma once

#include "sinhlab/domain.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <functional>

namespace sinhlab::testing {

/// Central-difference gradient of a scalar function of n variables.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double step) {
  Eigen::VectorXd g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    Eigen::VectorXd p = x, m = x;
    p[i] += step;
    m[i] -= step;
    g[i] = (f(p) - f(m)) / (2 * step);
  }
  return g;
}

/// Central-difference Jacobian of a vector function.
inline Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double step) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd J(f0.size(), x.size());
  for (int i = 0; i < x.size(); ++i) {
    Eigen::VectorXd p = x, m = x;
    p[i] += step;
    m[i] -= step;
    J.col(i) = (f(p) - f(m)) / (2 * step);
  }
  return J;
}

/// max |a - b| / max(|b|_inf, floor).
template <class A, class B>
double rel_err(const A& a, const B& b, double floor = 1e-3) {
  const double scale = std::max(b.cwiseAbs().maxCoeff(), floor);
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

inline Eigen::VectorXd stack(const Vec2& a, const Vec2& b) {
  Eigen::VectorXd v(4);
  v << a, b;
  return v;
}

}  // namespace sinhlab::testing
