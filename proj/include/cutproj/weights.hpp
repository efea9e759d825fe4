// Weight functions f: R^m -> C for weighted model sets: evaluation, decay and
// admissibility certificates, Fourier transform, self-correlation f * f~,
// truncation radii and period detection.
//
// Fourier convention: F(k) = \int f(h) exp(+2 pi i k.h) dh.

#ifndef CUTPROJ_WEIGHTS_HPP_
#define CUTPROJ_WEIGHTS_HPP_

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "cutproj/lattice.hpp"
#include "cutproj/quadrature.hpp"
#include "cutproj/scheme.hpp"

namespace cutproj {

enum class WeightKind { gaussian, bump, polydecay, sharp_window, tensor };

// Claim |x|^{m+alpha} |f(x)| <= C for all x.
struct DecayCertificate {
  double C = 0.0;
  double alpha = 1.0;
};

class WeightFunction {
public:
  // exp(-pi |h|^2 / width^2)
  static WeightFunction gaussian(int m, double width = 1.0);
  // exp(1 - 1 / (1 - |h|^2 / radius^2)) inside the ball, 0 outside
  static WeightFunction bump(int m, double radius = 1.0);
  // (1 + |h|^2 / scale^2)^(-exponent / 2)
  static WeightFunction polydecay(int m, double exponent, double scale = 1.0);
  // Indicator of a closed box; not continuous.
  static WeightFunction sharp_window(const Box& window);
  // f(h_1, ..., h_n) = f_1(h_1) ... f_n(h_n) over consecutive coordinate blocks.
  static WeightFunction tensor(std::vector<WeightFunction> factors);

  WeightFunction scaled(Complex amplitude) const;
  WeightFunction translated(const Vector& shift) const;  // h -> f(h - shift)
  WeightFunction with_decay_certificate(DecayCertificate cert) const;

  WeightKind kind() const { return kind_; }
  int dim() const { return m_; }
  bool non_smooth() const;
  bool has_analytic_ft() const;
  Complex amplitude() const { return amp_; }
  const Vector& center() const { return center_; }
  const std::optional<DecayCertificate>& claimed_certificate() const { return claimed_; }
  const std::vector<WeightFunction>& factors() const { return factors_; }
  double parameter() const { return p1_; }
  double scale() const { return p2_; }
  const Box& window() const { return window_; }

  Complex operator()(const Vector& h) const;

  double sup_abs() const;
  // Upper bound for sup_{|h| >= r} |f(h)|, non-increasing in r.
  double envelope(double r) const;
  // Radius of a ball about the origin containing supp f, if compact.
  std::optional<double> support_radius() const;
  // q such that |f(h)| = O(|h|^{-q}); +inf for super-polynomial decay.
  double decay_order() const;
  // Default alpha for the decay certificate: order - m, or 1 if decay is
  // super-polynomial.
  double default_alpha() const;

  std::string describe() const;

private:
  WeightFunction() = default;
  Complex base(const Vector& h) const;
  double base_envelope(double r) const;

  WeightKind kind_ = WeightKind::gaussian;
  int m_ = 1;
  double p1_ = 1.0;
  double p2_ = 1.0;
  Box window_;
  std::vector<WeightFunction> factors_;
  Complex amp_{1.0, 0.0};
  Vector center_;
  std::optional<DecayCertificate> claimed_;
};

Complex eval(const WeightFunction& f, const Vector& h);

struct AdmissibilityCertificate {
  DecayCertificate decay;
  double sampled_max = 0.0;   // max of |x|^{m+alpha} |f(x)| over the sample set
  double tail_constant = 0.0; // 2^{2m+1} C / covolume
  int m = 1;
  // tail_constant * sum_{k >= l} k^{-(1 + alpha)}, for l >= 1.
  double shell_tail(double l) const;
};

// Throws NonSmoothWeight for sharp windows and NotAdmissible when the decay
// claim fails on a radial sample grid (radius <= 50 plus a geometric tail out to
// ~1e6) or when alpha <= 0.
AdmissibilityCertificate admissibility_certificate(const WeightFunction& f,
                                                   const SchemeSpec& scheme);
// Same check with an explicit covolume (used when no scheme is at hand).
AdmissibilityCertificate admissibility_certificate(const WeightFunction& f,
                                                   double covolume);

enum class Method { automatic, quadrature };

Complex fourier(const WeightFunction& f, const Vector& k,
                Method method = Method::automatic);
// Integral of f; also defined for sharp windows.
Complex integral(const WeightFunction& f);
// (f * f~)(u) = \int f(h) conj(f(h - u)) dh.
Complex self_correlation(const WeightFunction& f, const Vector& u,
                         Method method = Method::automatic);

// Certified bound on sum_{|l*| > R} |f(l*)| per unit physical volume when the
// internal images have density `density_scale` per unit internal volume
// (1 / covolume for the bare lattice, times sum |w_j| for decorations).
double truncation_tail_bound(const WeightFunction& f, double radius, double density_scale);
// Smallest radius with truncation_tail_bound < eps; the support radius for
// compactly supported f.
double truncation_radius(const WeightFunction& f, double eps, double density_scale);

// Radius beyond which \int |f| is below tol. Throws QuadratureNotConverged past 1e6.
double integration_radius(const WeightFunction& f, double tol);
// Upper bound for \int_{|h| > r} |f(h)| dh.
double tail_mass(const WeightFunction& f, double r);
// Upper bound for sup_{|k| >= r} |fourier(f, k)|. Exact radial profile for
// gaussian and polydecay; bump uses ||Laplacian f||_1 / (2 pi r)^2.
double fourier_envelope(const WeightFunction& f, double r);

struct PeriodScan {
  bool periodic = false;
  bool degenerate = false;  // f vanishes on the whole sample grid
  Vector witness;
  double best_residual = 0.0;  // min over u of max_h |f(h - u) - f(h)|
};

// Searches u on a grid inside search_box (u != 0) for max_h |f(h - u) - f(h)| <= tol.
PeriodScan has_nontrivial_period(const WeightFunction& f, const Box& search_box,
                                 double tol);
PeriodScan has_nontrivial_period(const WeightFunction& f, double tol = 1e-9);

}  // namespace cutproj

#endif  // CUTPROJ_WEIGHTS_HPP_
