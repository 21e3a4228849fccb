#pragma once

// Independent reference computations for the unit tests: quadrature that does
// not share code with the assembly kernels, a hand-rolled dense solver, and
// small statistics helpers.

#include "fracfilt/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

using fracfilt::Point;

// Degree-5 7-point rule on a triangle, applied on a 4^level uniform
// refinement; smooth integrands are resolved far beyond test tolerances.
inline double integrate_tri(const std::function<double(double, double)>& f,
                            Point a, Point b, Point c, int level = 3) {
  if (level > 0) {
    const Point ab{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    const Point bc{0.5 * (b.x + c.x), 0.5 * (b.y + c.y)};
    const Point ca{0.5 * (c.x + a.x), 0.5 * (c.y + a.y)};
    return integrate_tri(f, a, ab, ca, level - 1) +
           integrate_tri(f, ab, b, bc, level - 1) +
           integrate_tri(f, ca, bc, c, level - 1) +
           integrate_tri(f, ab, bc, ca, level - 1);
  }
  const double w0 = 9.0 / 40.0;
  const double w1 = (155.0 - std::sqrt(15.0)) / 1200.0;
  const double w2 = (155.0 + std::sqrt(15.0)) / 1200.0;
  const double g1 = (6.0 - std::sqrt(15.0)) / 21.0;
  const double g2 = (6.0 + std::sqrt(15.0)) / 21.0;
  const std::array<std::array<double, 3>, 7> bary = {{
      {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
      {1.0 - 2.0 * g1, g1, g1},
      {g1, 1.0 - 2.0 * g1, g1},
      {g1, g1, 1.0 - 2.0 * g1},
      {1.0 - 2.0 * g2, g2, g2},
      {g2, 1.0 - 2.0 * g2, g2},
      {g2, g2, 1.0 - 2.0 * g2},
  }};
  const std::array<double, 7> wts = {w0, w1, w1, w1, w2, w2, w2};
  const double area =
      0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
  double s = 0.0;
  for (int q = 0; q < 7; ++q) {
    const double x = bary[q][0] * a.x + bary[q][1] * b.x + bary[q][2] * c.x;
    const double y = bary[q][0] * a.y + bary[q][1] * b.y + bary[q][2] * c.y;
    s += wts[q] * f(x, y);
  }
  return area * s;
}

// Gauss-Legendre 5-point rule on [a, b].
inline double integrate_1d(const std::function<double(double)>& f, double a,
                           double b) {
  const std::array<double, 5> x = {-0.906179845938663992797626878299,
                                   -0.538469310105683091036314420700, 0.0,
                                   0.538469310105683091036314420700,
                                   0.906179845938663992797626878299};
  const std::array<double, 5> w = {0.236926885056189087514264040720,
                                   0.478628670499366468041291514836,
                                   0.568888888888888888888888888889,
                                   0.478628670499366468041291514836,
                                   0.236926885056189087514264040720};
  double s = 0.0;
  for (int q = 0; q < 5; ++q)
    s += w[q] * f(0.5 * (a + b) + 0.5 * (b - a) * x[q]);
  return 0.5 * (b - a) * s;
}

// Dense Gaussian elimination with partial pivoting, written independently of
// any library solver.
inline Eigen::VectorXd gauss_solve(Eigen::MatrixXd a, Eigen::VectorXd b) {
  const int n = static_cast<int>(a.rows());
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (a(piv, k) == 0.0) throw std::runtime_error("gauss_solve: singular");
    if (piv != k) {
      a.row(piv).swap(a.row(k));
      std::swap(b[piv], b[k]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double m = a(i, k) / a(k, k);
      a.row(i).tail(n - k) -= m * a.row(k).tail(n - k);
      b[i] -= m * b[k];
    }
  }
  Eigen::VectorXd x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

// Kolmogorov distance between a weighted sample and a reference CDF given as
// sorted (point, cdf) pairs evaluated at the sample points.
inline double ks_distance(std::vector<double> sample,
                          const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::abs((i + 1) / n - f));
    d = std::max(d, std::abs(i / n - f));
  }
  return d;
}

} // namespace oracle
