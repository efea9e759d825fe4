#include "cutproj/weights.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "cutproj/error.hpp"

namespace cutproj {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

double unit_ball_volume(int m) {
  return std::pow(pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
}

// Radii 0 = r_0 < r_1 < ... < 1e12 with steps of 1% (at least 0.01).
const std::vector<double>& shell_grid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g{0.0};
    while (g.back() < 1e12)
      g.push_back(g.back() + 0.01 * std::max(1.0, g.back()));
    return g;
  }();
  return grid;
}

// Upper bound for \int_{|h| > R} E(|h|) dh in R^m, for E non-increasing.
// Each shell contributes vol(shell) * E(inner radius). Past the end of the grid
// E(rho) <= E(rho_end) (rho_end / rho)^order is assumed.
double radial_tail(const std::function<double(double)>& envelope, double order, int m,
                   double radius) {
  if (order <= m)
    return inf;
  const auto& grid = shell_grid();
  const double vm = unit_ball_volume(m);
  auto it = std::upper_bound(grid.begin(), grid.end(), radius);
  if (it == grid.end())
    it = grid.end() - 1;
  double total = 0.0;
  double e = envelope(radius);
  if (e == 0.0)
    return 0.0;
  total += vm * (std::pow(*it, m) - std::pow(radius, m)) * e;
  for (; it + 1 != grid.end(); ++it) {
    double r0 = *it, r1 = *(it + 1);
    e = envelope(r0);
    if (e == 0.0)
      return total;
    total += vm * (std::pow(r1, m) - std::pow(r0, m)) * e;
  }
  if (std::isfinite(order)) {
    double rho = grid.back();
    total += 1.001 * m * vm * envelope(rho) * std::pow(rho, m) / (order - m);
  }
  return total;
}

// Smallest R with tail(R) < target, for tail non-increasing in R.
double solve_radius(const std::function<double(double)>& tail, double target,
                    double max_radius) {
  if (tail(0.0) < target)
    return 0.0;
  double hi = 1.0;
  while (!(tail(hi) < target)) {
    hi *= 2.0;
    if (hi > max_radius)
      return inf;
  }
  double lo = hi == 1.0 ? 0.0 : 0.5 * hi;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    double mid = 0.5 * (lo + hi);
    if (tail(mid) < target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::vector<Vector> sample_directions(int m) {
  std::vector<Vector> dirs;
  for (int i = 0; i < m; ++i) {
    Vector e = Vector::Zero(m);
    e[i] = 1.0;
    dirs.push_back(e);
    dirs.push_back(-e);
  }
  if (m > 1) {
    for (int mask = 0; mask < (1 << m); ++mask) {
      Vector v(m);
      for (int i = 0; i < m; ++i)
        v[i] = (mask >> i) & 1 ? -1.0 : 1.0;
      dirs.push_back(v.normalized());
    }
    std::mt19937_64 rng(20240611);
    std::normal_distribution<double> normal;
    for (int n = 0; n < 32; ++n) {
      Vector v(m);
      for (int i = 0; i < m; ++i)
        v[i] = normal(rng);
      dirs.push_back(v.normalized());
    }
  }
  return dirs;
}

void require_smooth(const WeightFunction& f, const char* what) {
  if (f.non_smooth())
    fail(ErrorKind::NonSmoothWeight,
         std::string(what) + " requires a continuous weight; got " + f.describe());
}

void require_dim(const WeightFunction& f, const Vector& v) {
  if (v.size() != f.dim())
    fail(ErrorKind::InvalidArgument, "argument dimension " + std::to_string(v.size()) +
                                         " does not match weight dimension " +
                                         std::to_string(f.dim()));
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

WeightFunction WeightFunction::gaussian(int m, double width) {
  if (m <= 0 || !(width > 0.0) || !std::isfinite(width))
    fail(ErrorKind::InvalidArgument, "gaussian needs m > 0 and width > 0");
  WeightFunction f;
  f.kind_ = WeightKind::gaussian;
  f.m_ = m;
  f.p1_ = width;
  f.center_ = Vector::Zero(m);
  return f;
}

WeightFunction WeightFunction::bump(int m, double radius) {
  if (m <= 0 || !(radius > 0.0) || !std::isfinite(radius))
    fail(ErrorKind::InvalidArgument, "bump needs m > 0 and radius > 0");
  WeightFunction f;
  f.kind_ = WeightKind::bump;
  f.m_ = m;
  f.p1_ = radius;
  f.center_ = Vector::Zero(m);
  return f;
}

WeightFunction WeightFunction::polydecay(int m, double exponent, double scale) {
  if (m <= 0 || !(exponent > 0.0) || !(scale > 0.0))
    fail(ErrorKind::InvalidArgument, "polydecay needs m > 0, exponent > 0, scale > 0");
  WeightFunction f;
  f.kind_ = WeightKind::polydecay;
  f.m_ = m;
  f.p1_ = exponent;
  f.p2_ = scale;
  f.center_ = Vector::Zero(m);
  return f;
}

WeightFunction WeightFunction::sharp_window(const Box& window) {
  if (window.dim() <= 0)
    fail(ErrorKind::InvalidArgument, "sharp window needs a non-empty box");
  WeightFunction f;
  f.kind_ = WeightKind::sharp_window;
  f.m_ = window.dim();
  f.window_ = window;
  f.center_ = Vector::Zero(f.m_);
  return f;
}

WeightFunction WeightFunction::tensor(std::vector<WeightFunction> factors) {
  if (factors.empty())
    fail(ErrorKind::InvalidArgument, "tensor weight needs at least one factor");
  WeightFunction f;
  f.kind_ = WeightKind::tensor;
  f.m_ = 0;
  for (const auto& g : factors)
    f.m_ += g.dim();
  f.factors_ = std::move(factors);
  f.center_ = Vector::Zero(f.m_);
  return f;
}

WeightFunction WeightFunction::scaled(Complex amplitude) const {
  WeightFunction f = *this;
  f.amp_ *= amplitude;
  if (f.claimed_)
    f.claimed_->C *= std::abs(amplitude);
  return f;
}

WeightFunction WeightFunction::translated(const Vector& shift) const {
  require_dim(*this, shift);
  WeightFunction f = *this;
  f.center_ += shift;
  return f;
}

WeightFunction WeightFunction::with_decay_certificate(DecayCertificate cert) const {
  WeightFunction f = *this;
  f.claimed_ = cert;
  return f;
}

// ---------------------------------------------------------------------------
// Properties

bool WeightFunction::non_smooth() const {
  if (kind_ == WeightKind::sharp_window)
    return true;
  return std::any_of(factors_.begin(), factors_.end(),
                     [](const WeightFunction& g) { return g.non_smooth(); });
}

bool WeightFunction::has_analytic_ft() const {
  switch (kind_) {
    case WeightKind::gaussian:
    case WeightKind::polydecay:
    case WeightKind::sharp_window:
      return true;
    case WeightKind::bump:
      return false;
    case WeightKind::tensor:
      return std::all_of(factors_.begin(), factors_.end(),
                         [](const WeightFunction& g) { return g.has_analytic_ft(); });
  }
  return false;
}

Complex WeightFunction::base(const Vector& h) const {
  switch (kind_) {
    case WeightKind::gaussian:
      return std::exp(-pi * h.squaredNorm() / (p1_ * p1_));
    case WeightKind::bump: {
      double t = h.squaredNorm() / (p1_ * p1_);
      return t < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t)) : 0.0;
    }
    case WeightKind::polydecay:
      return std::pow(1.0 + h.squaredNorm() / (p2_ * p2_), -0.5 * p1_);
    case WeightKind::sharp_window:
      return window_.contains(h, 0.0) ? 1.0 : 0.0;
    case WeightKind::tensor: {
      Complex v(1.0);
      Eigen::Index offset = 0;
      for (const auto& g : factors_) {
        v *= g(h.segment(offset, g.dim()));
        offset += g.dim();
      }
      return v;
    }
  }
  return 0.0;
}

Complex WeightFunction::operator()(const Vector& h) const {
  require_dim(*this, h);
  return amp_ * base(h - center_);
}

Complex eval(const WeightFunction& f, const Vector& h) { return f(h); }

double WeightFunction::base_envelope(double r) const {
  switch (kind_) {
    case WeightKind::gaussian:
      return std::exp(-pi * r * r / (p1_ * p1_));
    case WeightKind::bump: {
      double t = r * r / (p1_ * p1_);
      return t < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t)) : 0.0;
    }
    case WeightKind::polydecay:
      return std::pow(1.0 + r * r / (p2_ * p2_), -0.5 * p1_);
    case WeightKind::sharp_window: {
      double reach = 0.0;
      for (int i = 0; i < m_; ++i)
        reach += std::max(window_.lo()[i] * window_.lo()[i], window_.hi()[i] * window_.hi()[i]);
      return r <= std::sqrt(reach) ? 1.0 : 0.0;
    }
    case WeightKind::tensor: {
      // |h| >= r forces |h_i| >= r / sqrt(n) for some block i.
      double n = static_cast<double>(factors_.size());
      double best = 0.0;
      for (std::size_t i = 0; i < factors_.size(); ++i) {
        double v = factors_[i].envelope(r / std::sqrt(n));
        for (std::size_t j = 0; j < factors_.size(); ++j)
          if (j != i)
            v *= factors_[j].sup_abs();
        best = std::max(best, v);
      }
      return best;
    }
  }
  return 0.0;
}

double WeightFunction::envelope(double r) const {
  return std::abs(amp_) * base_envelope(std::max(0.0, r - center_.norm()));
}

double WeightFunction::sup_abs() const { return envelope(0.0); }

std::optional<double> WeightFunction::support_radius() const {
  std::optional<double> base_radius;
  switch (kind_) {
    case WeightKind::gaussian:
    case WeightKind::polydecay:
      break;
    case WeightKind::bump:
      base_radius = p1_;
      break;
    case WeightKind::sharp_window: {
      double reach = 0.0;
      for (int i = 0; i < m_; ++i)
        reach += std::max(window_.lo()[i] * window_.lo()[i], window_.hi()[i] * window_.hi()[i]);
      base_radius = std::sqrt(reach);
      break;
    }
    case WeightKind::tensor: {
      double sq = 0.0;
      for (const auto& g : factors_) {
        auto r = g.support_radius();
        if (!r)
          return std::nullopt;
        sq += *r * *r;
      }
      base_radius = std::sqrt(sq);
      break;
    }
  }
  if (!base_radius)
    return std::nullopt;
  return *base_radius + center_.norm();
}

double WeightFunction::decay_order() const {
  switch (kind_) {
    case WeightKind::polydecay:
      return p1_;
    case WeightKind::tensor: {
      double q = inf;
      for (const auto& g : factors_)
        q = std::min(q, g.decay_order());
      return q;
    }
    default:
      return inf;
  }
}

double WeightFunction::default_alpha() const {
  double q = decay_order();
  return std::isfinite(q) ? q - m_ : 1.0;
}

std::string WeightFunction::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case WeightKind::gaussian: os << "gaussian(width=" << p1_ << ")"; break;
    case WeightKind::bump: os << "bump(radius=" << p1_ << ")"; break;
    case WeightKind::polydecay:
      os << "polydecay(exponent=" << p1_ << ", scale=" << p2_ << ")";
      break;
    case WeightKind::sharp_window: os << "sharp_window"; break;
    case WeightKind::tensor: {
      os << "tensor(";
      for (std::size_t i = 0; i < factors_.size(); ++i)
        os << (i ? ", " : "") << factors_[i].describe();
      os << ")";
      break;
    }
  }
  os << " on R^" << m_;
  return os.str();
}

// ---------------------------------------------------------------------------
// Admissibility

double AdmissibilityCertificate::shell_tail(double l) const {
  if (!(l >= 1.0))
    fail(ErrorKind::InvalidArgument, "shell index must be at least 1");
  const double a = decay.alpha;
  double k0 = std::ceil(l);
  double sum = 0.0;
  constexpr int terms = 10000;
  for (int i = 0; i < terms; ++i)
    sum += std::pow(k0 + i, -(1.0 + a));
  // Convex terms: sum_{k >= K} g(k) <= \int_{K - 1/2}^inf g.
  sum += std::pow(k0 + terms - 0.5, -a) / a;
  return tail_constant * sum;
}

AdmissibilityCertificate admissibility_certificate(const WeightFunction& f,
                                                   const SchemeSpec& scheme) {
  if (scheme.m() != f.dim())
    fail(ErrorKind::InvalidArgument, "weight dimension does not match internal dimension");
  return admissibility_certificate(f, scheme.covolume());
}

AdmissibilityCertificate admissibility_certificate(const WeightFunction& f,
                                                   double covolume) {
  require_smooth(f, "admissibility certificate");
  const int m = f.dim();
  const auto& claimed = f.claimed_certificate();
  const double alpha = claimed ? claimed->alpha : f.default_alpha();
  if (!(alpha > 0.0))
    fail(ErrorKind::NotAdmissible, "decay exponent alpha must be positive (got " +
                                       std::to_string(alpha) + ") for " + f.describe());
  const double q = m + alpha;

  auto value = [&](const Vector& dir, double r) {
    if (r == 0.0)
      return 0.0;
    return std::pow(r, q) * std::abs(f(r * dir));
  };

  double best = 0.0;
  Vector best_dir = Vector::Zero(m);
  double best_r = 0.0;
  for (const Vector& dir : sample_directions(m)) {
    for (int i = 0; i <= 5000; ++i) {
      double r = 0.01 * i;
      double v = value(dir, r);
      if (v > best) {
        best = v;
        best_dir = dir;
        best_r = r;
      }
    }
    double prev = 0.0, last = 0.0;
    for (int j = 1; j <= 15; ++j) {
      double r = 50.0 * std::ldexp(1.0, j);
      double v = value(dir, r);
      if (v > best) {
        best = v;
        best_dir = dir;
        best_r = r;
      }
      prev = last;
      last = v;
    }
    if (prev > 1e-300 && last > prev * (1.0 + 1e-3))
      fail(ErrorKind::NotAdmissible,
           "|x|^(m+alpha)|f(x)| keeps growing at large radius; decay slower than claimed for " +
               f.describe());
  }
  // Polish the grid maximum along its direction.
  if (best > 0.0 && best_r <= 50.0) {
    double lo = std::max(0.0, best_r - 0.01), hi = best_r + 0.01;
    for (int it = 0; it < 100; ++it) {
      double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
      if (value(best_dir, a) < value(best_dir, b))
        lo = a;
      else
        hi = b;
    }
    best = std::max(best, value(best_dir, 0.5 * (lo + hi)));
  }

  AdmissibilityCertificate cert;
  cert.m = m;
  cert.sampled_max = best;
  cert.decay.alpha = alpha;
  if (claimed) {
    if (best > 1.01 * claimed->C)
      fail(ErrorKind::NotAdmissible,
           "sampled |x|^(m+alpha)|f(x)| = " + std::to_string(best) +
               " exceeds claimed C = " + std::to_string(claimed->C));
    cert.decay.C = claimed->C;
  } else {
    cert.decay.C = best;
  }
  cert.tail_constant = std::ldexp(1.0, 2 * m + 1) * cert.decay.C / covolume;
  return cert;
}

// ---------------------------------------------------------------------------
// Fourier transform, integral, self-correlation

namespace {

// \int_{R^m} (1 + |h|^2)^{-p/2} exp(2 pi i k.h) dh, a Matern-type closed form.
double polydecay_ft(int m, double p, double kn) {
  const double nu = 0.5 * (p - m);
  if (!(nu > 0.0))
    fail(ErrorKind::NotAdmissible, "polydecay with exponent <= m is not integrable");
  if (kn == 0.0)
    return std::pow(pi, 0.5 * m) * std::tgamma(nu) / std::tgamma(0.5 * p);
  double x = 2.0 * pi * kn;
  if (x > 700.0)
    return 0.0;
  return 2.0 * std::pow(pi, 0.5 * p) / std::tgamma(0.5 * p) * std::pow(kn, nu) *
         std::cyl_bessel_k(nu, x);
}

Complex phase(const Vector& k, const Vector& c) {
  double arg = 2.0 * pi * k.dot(c);
  return {std::cos(arg), std::sin(arg)};
}

Complex fourier_quadrature(const WeightFunction& f, const Vector& k) {
  double radius = integration_radius(f, 1e-11);
  Box box = Box::cube(f.dim(), radius);
  QuadratureOptions opts;
  opts.abs_tol = 1e-10;
  return integrate_box(
      [&](const Vector& h) {
        double arg = 2.0 * pi * k.dot(h);
        return f(h) * Complex(std::cos(arg), std::sin(arg));
      },
      box, opts);
}

Complex fourier_automatic(const WeightFunction& f, const Vector& k) {
  const int m = f.dim();
  Complex pre = f.amplitude() * phase(k, f.center());
  switch (f.kind()) {
    case WeightKind::gaussian: {
      double a = f.parameter();
      return pre * std::pow(a, m) * std::exp(-pi * a * a * k.squaredNorm());
    }
    case WeightKind::polydecay: {
      double s = f.scale();
      return pre * std::pow(s, m) * polydecay_ft(m, f.parameter(), s * k.norm());
    }
    case WeightKind::tensor: {
      Complex v = pre;
      Eigen::Index offset = 0;
      for (const auto& g : f.factors()) {
        v *= fourier_automatic(g, k.segment(offset, g.dim()));
        offset += g.dim();
      }
      return v;
    }
    case WeightKind::sharp_window: {
      Complex v = pre;
      const Box& w = f.window();
      for (int i = 0; i < m; ++i) {
        double width = w.hi()[i] - w.lo()[i];
        if (std::abs(k[i]) * std::max(width, 1.0) < 1e-14) {
          v *= width;
        } else {
          Complex num = std::exp(Complex(0.0, 2.0 * pi * k[i] * w.hi()[i])) -
                        std::exp(Complex(0.0, 2.0 * pi * k[i] * w.lo()[i]));
          v *= num / Complex(0.0, 2.0 * pi * k[i]);
        }
      }
      return v;
    }
    case WeightKind::bump:
      return fourier_quadrature(f, k);
  }
  return 0.0;
}

Complex self_correlation_quadrature(const WeightFunction& f, const Vector& u) {
  const int m = f.dim();
  double radius;
  if (auto sr = f.support_radius()) {
    radius = *sr;
  } else {
    double un = u.norm();
    auto env = [&](double r) { return f.envelope(r) * f.envelope(0.5 * r); };
    radius = solve_radius(
        [&](double r) { return radial_tail(env, 2.0 * f.decay_order(), m, r); }, 1e-12, 1e6);
    if (!std::isfinite(radius))
      fail(ErrorKind::QuadratureNotConverged, "self-correlation integrand decays too slowly");
    radius = std::max(radius, 2.0 * un);
  }
  QuadratureOptions opts;
  opts.abs_tol = 1e-11;
  return integrate_box([&](const Vector& h) { return f(h) * std::conj(f(h - u)); },
                       Box::cube(m, radius), opts);
}

Complex self_correlation_automatic(const WeightFunction& f, const Vector& u) {
  const int m = f.dim();
  double a2 = std::norm(f.amplitude());
  switch (f.kind()) {
    case WeightKind::gaussian: {
      double w = f.parameter();
      return a2 * std::pow(0.5 * w * w, 0.5 * m) * std::exp(-pi * u.squaredNorm() / (2.0 * w * w));
    }
    case WeightKind::tensor: {
      Complex v = a2;
      Eigen::Index offset = 0;
      for (const auto& g : f.factors()) {
        v *= self_correlation_automatic(g, u.segment(offset, g.dim()));
        offset += g.dim();
      }
      return v;
    }
    default:
      return self_correlation_quadrature(f, u);
  }
}

}  // namespace

double integration_radius(const WeightFunction& f, double tol) {
  if (auto r = f.support_radius())
    return *r;
  const int m = f.dim();
  double radius = solve_radius(
      [&](double r) {
        return radial_tail([&](double x) { return f.envelope(x); }, f.decay_order(), m, r);
      },
      tol, 1e6);
  if (!std::isfinite(radius))
    fail(ErrorKind::QuadratureNotConverged,
         "integration domain for " + f.describe() + " exceeds radius 1e6");
  return radius;
}

double tail_mass(const WeightFunction& f, double r) {
  return radial_tail([&](double x) { return f.envelope(x); }, f.decay_order(), f.dim(),
                     std::max(0.0, r));
}

namespace {

// ||Laplacian of the unit bump of radius rad||_1 on R^m.
double bump_laplacian_l1(int m, double rad) {
  auto integrand = [&](double rho) -> Complex {
    double t = rho * rho / (rad * rad);
    if (t >= 1.0)
      return 0.0;
    double u = 1.0 / (1.0 - t);
    double g = std::exp(1.0 - u);
    if (g == 0.0)
      return 0.0;
    double r2 = rad * rad;
    double lap = g * (4.0 * rho * rho / (r2 * r2) * (u * u * u * u - 2.0 * u * u * u) -
                      2.0 * m * u * u / r2);
    return std::abs(lap) * std::pow(rho, m - 1);
  };
  QuadratureOptions opts;
  opts.abs_tol = 1e-8;
  double radial = integrate_interval(integrand, 0.0, rad, opts).real();
  return m * unit_ball_volume(m) * radial;
}

}  // namespace

double fourier_envelope(const WeightFunction& f, double r) {
  require_smooth(f, "fourier envelope");
  const int m = f.dim();
  const double a = std::abs(f.amplitude());
  r = std::max(0.0, r);
  switch (f.kind()) {
    case WeightKind::gaussian: {
      double w = f.parameter();
      return a * std::pow(w, m) * std::exp(-pi * w * w * r * r);
    }
    case WeightKind::polydecay: {
      double s = f.scale();
      return a * std::pow(s, m) * polydecay_ft(m, f.parameter(), s * r);
    }
    case WeightKind::bump: {
      double rad = f.parameter();
      double mass = std::pow(rad, m) * std::abs(fourier(WeightFunction::bump(m, 1.0),
                                                        Vector::Zero(m)));
      if (r == 0.0)
        return a * mass;
      return a * std::min(mass, bump_laplacian_l1(m, rad) / std::pow(2.0 * pi * r, 2));
    }
    case WeightKind::tensor: {
      const auto& fs = f.factors();
      double n = static_cast<double>(fs.size());
      double best = 0.0;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        double v = fourier_envelope(fs[i], r / std::sqrt(n));
        for (std::size_t j = 0; j < fs.size(); ++j)
          if (j != i)
            v *= fourier_envelope(fs[j], 0.0);
        best = std::max(best, v);
      }
      return a * best;
    }
    case WeightKind::sharp_window:
      break;
  }
  return 0.0;
}

Complex fourier(const WeightFunction& f, const Vector& k, Method method) {
  require_smooth(f, "fourier");
  require_dim(f, k);
  if (method == Method::quadrature)
    return fourier_quadrature(f, k);
  return fourier_automatic(f, k);
}

Complex integral(const WeightFunction& f) {
  Vector zero = Vector::Zero(f.dim());
  if (f.kind() == WeightKind::sharp_window)
    return f.amplitude() * f.window().volume();
  if (f.kind() == WeightKind::tensor) {
    Complex v = f.amplitude();
    for (const auto& g : f.factors())
      v *= integral(g);
    return v;
  }
  return fourier(f, zero);
}

Complex self_correlation(const WeightFunction& f, const Vector& u, Method method) {
  require_smooth(f, "self_correlation");
  require_dim(f, u);
  if (method == Method::quadrature)
    return self_correlation_quadrature(f, u);
  return self_correlation_automatic(f, u);
}

// ---------------------------------------------------------------------------
// Truncation

double truncation_tail_bound(const WeightFunction& f, double radius, double density_scale) {
  // Lattice points per unit physical volume with star image in a shell S are
  // at most 2 vol(S) / covolume asymptotically (density formula with slack 2).
  auto env = [&](double r) { return f.envelope(r); };
  return 2.0 * density_scale * radial_tail(env, f.decay_order(), f.dim(), radius);
}

double truncation_radius(const WeightFunction& f, double eps, double density_scale) {
  if (!(eps > 0.0) || !(density_scale >= 0.0))
    fail(ErrorKind::InvalidArgument, "truncation needs eps > 0 and density_scale >= 0");
  if (auto r = f.support_radius())
    return *r;
  double radius = solve_radius(
      [&](double r) { return truncation_tail_bound(f, r, density_scale); }, eps, 1e12);
  if (!std::isfinite(radius))
    fail(ErrorKind::NotAdmissible, "no finite truncation radius reaches eps for " + f.describe());
  return radius;
}

// ---------------------------------------------------------------------------
// Periods

PeriodScan has_nontrivial_period(const WeightFunction& f, const Box& search_box, double tol) {
  require_smooth(f, "period scan");
  const int m = f.dim();
  if (search_box.dim() != m)
    fail(ErrorKind::InvalidArgument, "search box dimension does not match weight");

  double sup = f.sup_abs();
  double reach = 1.0;
  if (sup > 0.0) {
    if (auto r = f.support_radius())
      reach = *r;
    else
      reach = solve_radius([&](double r) { return f.envelope(r) / sup; }, 1e-3, 1e6);
  }
  const int nh = m == 1 ? 401 : (m == 2 ? 61 : 17);
  const int nu = m == 1 ? 201 : (m == 2 ? 41 : 11);

  std::vector<Vector> h_grid;
  {
    std::vector<int> idx(m, 0);
    while (true) {
      Vector h(m);
      for (int i = 0; i < m; ++i)
        h[i] = -reach + 2.0 * reach * idx[i] / (nh - 1);
      h_grid.push_back(h);
      int i = 0;
      while (i < m && ++idx[i] == nh)
        idx[i++] = 0;
      if (i == m)
        break;
    }
  }
  std::vector<Complex> f_vals;
  f_vals.reserve(h_grid.size());
  bool all_zero = true;
  for (const Vector& h : h_grid) {
    f_vals.push_back(f(h));
    if (f_vals.back() != 0.0)
      all_zero = false;
  }

  PeriodScan scan;
  scan.degenerate = all_zero && sup == 0.0;
  scan.best_residual = inf;
  std::vector<int> idx(m, 0);
  while (true) {
    Vector u(m);
    for (int i = 0; i < m; ++i)
      u[i] = search_box.lo()[i] +
             (search_box.hi()[i] - search_box.lo()[i]) * idx[i] / (nu - 1);
    if (u.norm() > 1e-12) {
      double residual = 0.0;
      for (std::size_t j = 0; j < h_grid.size() && residual <= scan.best_residual; ++j)
        residual = std::max(residual, std::abs(f(h_grid[j] - u) - f_vals[j]));
      if (residual < scan.best_residual)
        scan.best_residual = residual;
      if (residual <= tol) {
        scan.periodic = true;
        scan.witness = u;
        scan.best_residual = residual;
        return scan;
      }
    }
    int i = 0;
    while (i < m && ++idx[i] == nu)
      idx[i++] = 0;
    if (i == m)
      break;
  }
  return scan;
}

PeriodScan has_nontrivial_period(const WeightFunction& f, double tol) {
  double sup = f.sup_abs();
  double reach = 1.0;
  if (sup > 0.0) {
    if (auto r = f.support_radius())
      reach = *r;
    else
      reach = solve_radius([&](double r) { return f.envelope(r) / sup; }, 1e-3, 1e6);
  }
  return has_nontrivial_period(f, Box::cube(f.dim(), std::max(2.0 * reach, 1.0)), tol);
}

}  // namespace cutproj
