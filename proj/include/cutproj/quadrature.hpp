// Adaptive composite Simpson quadrature for smooth complex integrands on
// boxes. Each axis is split into panels that are bisected until two successive
// Simpson estimates agree; the accepted value carries the Richardson correction.

#ifndef CUTPROJ_QUADRATURE_HPP_
#define CUTPROJ_QUADRATURE_HPP_

#include <complex>
#include <functional>

#include "cutproj/lattice.hpp"

namespace cutproj {

using Complex = std::complex<double>;

struct QuadratureOptions {
  double abs_tol = 1e-9;
  int initial_panels = 64;
  int max_depth = 30;
};

// Throws QuadratureNotConverged if a panel needs more than max_depth bisections.
Complex integrate_interval(const std::function<Complex(double)>& fn, double a, double b,
                           const QuadratureOptions& options = {});

// Iterated integral over a box of any dimension; inner axes are integrated to a
// tighter tolerance than the outer one.
Complex integrate_box(const std::function<Complex(const Vector&)>& fn, const Box& box,
                      const QuadratureOptions& options = {});

}  // namespace cutproj

#endif  // CUTPROJ_QUADRATURE_HPP_
