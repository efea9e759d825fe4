#include "cutproj/quadrature.hpp"

#include <cmath>
#include <string>

#include "cutproj/error.hpp"

namespace cutproj {

namespace {

struct Panel {
  double a, b;
  Complex fa, fm, fb;
  Complex whole;
};

Complex simpson(double a, double b, Complex fa, Complex fm, Complex fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

Complex refine(const std::function<Complex(double)>& fn, const Panel& p, double tol,
               int depth, int max_depth) {
  double m = 0.5 * (p.a + p.b);
  double lm = 0.5 * (p.a + m), rm = 0.5 * (m + p.b);
  Complex flm = fn(lm), frm = fn(rm);
  Complex left = simpson(p.a, m, p.fa, flm, p.fm);
  Complex right = simpson(m, p.b, p.fm, frm, p.fb);
  Complex both = left + right;
  Complex diff = both - p.whole;
  // Two levels are always taken so that a coincidental agreement on the
  // coarsest panel cannot end the refinement.
  if (depth >= 2 && std::abs(diff) <= 15.0 * tol)
    return both + diff / 15.0;
  if (depth >= max_depth)
    fail(ErrorKind::QuadratureNotConverged,
         "adaptive Simpson did not converge on [" + std::to_string(p.a) + ", " +
             std::to_string(p.b) + "]");
  return refine(fn, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth + 1, max_depth) +
         refine(fn, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace

Complex integrate_interval(const std::function<Complex(double)>& fn, double a, double b,
                           const QuadratureOptions& options) {
  if (!(b > a))
    return Complex(0.0);
  const int panels = std::max(1, options.initial_panels);
  const double h = (b - a) / panels;
  const double panel_tol = options.abs_tol / panels;
  Complex total(0.0);
  Complex fa = fn(a);
  for (int i = 0; i < panels; ++i) {
    double pa = a + i * h;
    double pb = (i + 1 == panels) ? b : a + (i + 1) * h;
    double pm = 0.5 * (pa + pb);
    Complex fm = fn(pm), fb = fn(pb);
    Panel p{pa, pb, fa, fm, fb, simpson(pa, pb, fa, fm, fb)};
    total += refine(fn, p, panel_tol, 0, options.max_depth);
    fa = fb;
  }
  return total;
}

Complex integrate_box(const std::function<Complex(const Vector&)>& fn, const Box& box,
                      const QuadratureOptions& options) {
  const int n = box.dim();
  Vector x(n);
  std::function<Complex(int, double)> level = [&](int axis, double tol) -> Complex {
    QuadratureOptions o = options;
    o.abs_tol = tol;
    if (axis + 1 == n) {
      return integrate_interval(
          [&](double t) {
            x[axis] = t;
            return fn(x);
          },
          box.lo()[axis], box.hi()[axis], o);
    }
    double width = box.hi()[axis] - box.lo()[axis];
    double inner_tol = 1e-3 * tol / std::max(width, 1.0);
    return integrate_interval(
        [&](double t) {
          x[axis] = t;
          return level(axis + 1, inner_tol);
        },
        box.lo()[axis], box.hi()[axis], o);
  };
  return level(0, options.abs_tol);
}

}  // namespace cutproj
