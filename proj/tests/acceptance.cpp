// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and runtime
// limits are pinned below; the exit status is nonzero if any line fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "cutproj/almost_periods.hpp"
#include "cutproj/comb.hpp"
#include "cutproj/error.hpp"
#include "cutproj/scheme.hpp"
#include "cutproj/spectral.hpp"
#include "cutproj/weights.hpp"

using namespace cutproj;

namespace {

const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
const double pi = 3.14159265358979323846;

// 1
constexpr double density_rel_tol = 0.005;
constexpr double density_uniform_tol = 0.01;
constexpr double density_seconds = 10.0;
// 2
constexpr double window_rel_tol = 0.01;
constexpr double window_seconds = 5.0;
// 3
constexpr double autocorr_rel_tol = 0.02;
constexpr double autocorr_zero_tol = 1e-9;
constexpr double autocorr_seconds = 60.0;
// 4
constexpr double diffraction_rel_tol = 0.03;
constexpr double central_tol = 1e-10;
constexpr double diffraction_seconds = 120.0;
// 5
constexpr double hull_spread_tol = 0.01;
// 6
constexpr double off_peak_ratio = 0.2;
constexpr double off_peak_distance = 0.05;
// 7
constexpr double position_tol = 1e-9;
constexpr double weight_tol = 1e-10;
// 8
constexpr double almost_period_eps = 1e-3;
constexpr std::size_t min_almost_periods = 5;
// 9
constexpr double decorated_rel_tol = 0.03;
// 11
constexpr double quadrature_tol = 1e-8;
constexpr double hermitian_tol = 1e-9;

constexpr double eps_trunc = 1e-12;
constexpr double intensity_floor = 1e-8;
constexpr double peak_cut = 5.0;

Vector v1(double x) { return Vector::Constant(1, x); }
Box interval(double lo, double hi) { return Box(v1(lo), v1(hi)); }

BoxSequence single(double hi) {
  BoxSequence b;
  b.base = interval(0, hi);
  b.growth = 2.0;
  b.steps = 1;
  return b;
}

SchemeSpec golden_scheme() {
  Matrix b(2, 2);
  b << 1.0, phi, 1.0, -1.0 / phi;
  return validate_scheme(1, 1, make_basis(b));
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Suite {
public:
  void run(int id, const char* name, const std::function<Outcome()>& body,
           double seconds_limit = std::numeric_limits<double>::infinity()) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const Error& e) {
      o = {false, std::string("error ") + std::string(to_string(e.kind())) + ": " + e.what()};
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs <= seconds_limit;
    bool pass = o.pass && in_time;
    std::string limit = std::isfinite(seconds_limit) ? " (limit " + fmt(seconds_limit, "%.0f") + " s)" : "";
    std::printf("[%s] %d %s: %s; %.2f s%s\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(),
                secs, limit.c_str());
    std::fflush(stdout);
    failures_ += pass ? 0 : 1;
  }

  int failures() const { return failures_; }

  static std::string fmt(double x, const char* f = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
  }

private:
  int failures_ = 0;
};

std::string fmt(double x, const char* f = "%.6g") { return Suite::fmt(x, f); }

double rel(Complex est, Complex ref) { return std::abs(est - ref) / std::abs(ref); }

// Worst relative error of the pair-sum estimate on the top-n closed-form entries.
double autocorr_worst(const SchemeSpec& s, const WeightFunction& f, const Decoration& dec,
                      double box_hi, std::size_t n, AutocorrelationTable* closed_out = nullptr) {
  double cut = autocorr_internal_cut(s, f, dec, intensity_floor);
  AutocorrelationTable closed = autocorr_closed(s, f, dec, interval(-20, 20), cut);
  WeightedComb comb = generate_comb(s, f, dec, interval(0, box_hi), eps_trunc);
  AutocorrelationTable est = autocorr_estimate(comb, closed, 1e-6);
  double worst = 0.0;
  for (std::size_t i : closed.top(n))
    worst = std::max(worst, rel(est.entries[i].eta, closed.entries[i].eta));
  if (closed_out)
    *closed_out = closed;
  return worst;
}

// Worst relative error of |Fourier-Bohr|^2 against |c|^2 on the top-n peaks.
double diffraction_worst(const SchemeSpec& s, const WeightFunction& f, const Decoration& dec,
                         double box_hi, std::size_t n, PeakList* peaks_out = nullptr) {
  PeakList pl = diffraction_peaks(s, f, dec, interval(-5, 5), peak_cut, intensity_floor);
  WeightedComb comb = generate_comb(s, f, dec, interval(0, box_hi), eps_trunc);
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(n, pl.peaks.size()); ++i) {
    const Peak& p = pl.peaks[i];
    Complex fb = fourier_bohr_estimate(comb, p.k, single(box_hi))[0];
    worst = std::max(worst, std::abs(std::norm(fb) - p.intensity) / p.intensity);
  }
  if (peaks_out)
    *peaks_out = pl;
  return worst;
}

bool same_atoms(const WeightedComb& a, const WeightedComb& b, double* dpos, double* dw) {
  if (a.atoms.size() != b.atoms.size())
    return false;
  for (std::size_t i = 0; i < a.atoms.size(); ++i) {
    *dpos = std::max(*dpos, (a.atoms[i].position - b.atoms[i].position).cwiseAbs().maxCoeff());
    *dw = std::max(*dw, std::abs(a.atoms[i].weight - b.atoms[i].weight));
  }
  return true;
}

}  // namespace

int main() {
  const SchemeSpec s = golden_scheme();
  const WeightFunction g = WeightFunction::gaussian(1);
  const Decoration unit = Decoration::unit(s);
  const Decoration two = Decoration::make(
      s, {{v1(0.0), v1(0.0), 1.0}, {v1(0.5), v1(0.2), Complex(0.5, 0.5)}});
  const double inv_sqrt5 = 1.0 / std::sqrt(5.0);
  Suite suite;

  suite.run(1, "density", [&] {
    Complex closed = density_closed(s, g, unit);
    auto w = weyl_average(s, g, unit, torus_point(s, v1(0), v1(0)), single(1e4), eps_trunc);
    double e0 = rel(w[0], closed);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      auto wx = weyl_average(s, g, unit, torus_point(s, v1(u(rng)), v1(u(rng))), single(1e4), eps_trunc);
      worst = std::max(worst, rel(wx[0], closed));
    }
    bool ok = e0 <= density_rel_tol && worst <= density_uniform_tol &&
              std::abs(closed - inv_sqrt5) <= 1e-12;
    return Outcome{ok, "closed " + fmt(closed.real(), "%.7f") + ", rel err " + fmt(e0) +
                           " (tol " + fmt(density_rel_tol) + "), max over 10 torus points " +
                           fmt(worst) + " (tol " + fmt(density_uniform_tol) + ")"};
  }, density_seconds);

  suite.run(2, "sharp-window density", [&] {
    WeightFunction window = WeightFunction::sharp_window(interval(-0.5, 0.5));
    WeightedComb c = generate_comb(s, window, unit, interval(0, 1e4), eps_trunc);
    double density = static_cast<double>(c.atoms.size()) / 1e4;
    double e = std::abs(density - inv_sqrt5) / inv_sqrt5;
    return Outcome{e <= window_rel_tol, std::to_string(c.atoms.size()) + " points, density " +
                                            fmt(density) + ", rel err " + fmt(e) + " (tol " +
                                            fmt(window_rel_tol) + ")"};
  }, window_seconds);

  suite.run(3, "autocorrelation", [&] {
    AutocorrelationTable closed;
    double worst = autocorr_worst(s, g, unit, 1e4, 15, &closed);
    Complex zero = 0.0;
    for (const auto& e : closed.entries)
      if (e.z.isZero())
        zero = e.eta;
    double ez = std::abs(zero - 1.0 / std::sqrt(10.0));
    bool ok = worst <= autocorr_rel_tol && ez <= autocorr_zero_tol;
    return Outcome{ok, "top-15 max rel err " + fmt(worst) + " (tol " + fmt(autocorr_rel_tol) +
                           "), eta(0) = " + fmt(zero.real(), "%.7f")};
  }, autocorr_seconds);

  PeakList golden_peaks;
  suite.run(4, "diffraction", [&] {
    double worst = diffraction_worst(s, g, unit, 1e5, 10, &golden_peaks);
    double central = golden_peaks.peaks.at(0).intensity;
    double dens2 = std::norm(density_closed(s, g, unit));
    bool ok = worst <= diffraction_rel_tol && golden_peaks.peaks[0].z.isZero() &&
              std::abs(central - dens2) <= central_tol && std::abs(central - 0.2) <= central_tol;
    return Outcome{ok, "top-10 max rel err " + fmt(worst) + " (tol " + fmt(diffraction_rel_tol) +
                           "), central " + fmt(central, "%.12f")};
  }, diffraction_seconds);

  suite.run(5, "hull-element independence", [&] {
    PeakList pl = diffraction_peaks(s, g, unit, interval(-5, 5), peak_cut, intensity_floor);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::size_t n = std::min<std::size_t>(5, pl.peaks.size());
    std::vector<double> lo(n, std::numeric_limits<double>::infinity()), hi(n, 0.0);
    for (int trial = 0; trial < 5; ++trial) {
      TorusPoint xi = torus_point(s, v1(u(rng)), v1(u(rng)));
      WeightedComb h = hull_element(s, g, unit, xi, interval(0, 1e5), eps_trunc);
      for (std::size_t i = 0; i < n; ++i) {
        double m = std::abs(fourier_bohr_estimate(h, pl.peaks[i].k, single(1e5))[0]);
        lo[i] = std::min(lo[i], m);
        hi[i] = std::max(hi[i], m);
      }
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      worst = std::max(worst, (hi[i] - lo[i]) / std::abs(pl.peaks[i].c));
    return Outcome{n == 5 && worst <= hull_spread_tol,
                   "max relative spread " + fmt(worst) + " (tol " + fmt(hull_spread_tol) + ")"};
  });

  suite.run(6, "off-peak decay", [&] {
    PeakList pl = diffraction_peaks(s, g, unit, interval(-5, 5), peak_cut, intensity_floor);
    WeightedComb c = generate_comb(s, g, unit, interval(0, 1e4), eps_trunc);
    BoxSequence boxes;
    boxes.base = interval(0, 1e2);
    boxes.growth = 100.0;
    boxes.steps = 2;
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    double worst = 0.0;
    int found = 0;
    for (int tries = 0; found < 5 && tries < 100000; ++tries) {
      double k = u(rng);
      double dist = std::numeric_limits<double>::infinity();
      for (const auto& p : pl.peaks)
        dist = std::min(dist, std::abs(p.k[0] - k));
      if (dist < off_peak_distance)
        continue;
      ++found;
      auto est = fourier_bohr_estimate(c, v1(k), boxes);
      worst = std::max(worst, std::abs(est[1]) / std::abs(est[0]));
    }
    return Outcome{found == 5 && worst <= off_peak_ratio,
                   std::to_string(found) + " frequencies, max ratio " + fmt(worst) + " (tol " +
                       fmt(off_peak_ratio) + ")"};
  });

  suite.run(7, "exact invariances", [&] {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::uniform_int_distribution<int> zi(-50, 50);
    Box box = interval(0, 100);
    double dpos = 0.0, dw = 0.0;
    bool sizes = true;
    for (int trial = 0; trial < 100; ++trial) {
      Vector sv = v1(u(rng)), kv = v1(u(rng));
      Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> z(2);
      z << zi(rng), zi(rng);
      StarImage lat = star_map(s, z);
      TorusPoint xi = torus_point(s, sv, kv);
      WeightedComb a = hull_element(s, g, unit, xi, box, eps_trunc);
      WeightedComb b = hull_element(s, g, unit, torus_point(s, sv + lat.l, kv + lat.l_star), box, eps_trunc);
      sizes = same_atoms(a, b, &dpos, &dw) && sizes;
      Vector t = v1(u(rng));
      WeightedComb moved = hull_element(s, g, unit, torus_add(s, xi, iota(s, t)), box, eps_trunc);
      WeightedComb shifted = translate(hull_element(s, g, unit, xi, box.translated(-t), eps_trunc), t);
      sizes = same_atoms(moved, shifted, &dpos, &dw) && sizes;
    }
    return Outcome{sizes && dpos <= position_tol && dw <= weight_tol,
                   "100 cases, max position diff " + fmt(dpos) + ", max weight diff " + fmt(dw)};
  });

  suite.run(8, "almost periods", [&] {
    AlmostPeriodResult r = almost_periods(s, g, unit, almost_period_eps, 5.0, interval(0, 500));
    double worst = 0.0;
    for (const auto& p : r.periods)
      worst = std::max(worst, p.verified_sup);
    bool ok = r.periods.size() >= min_almost_periods && worst <= almost_period_eps &&
              std::isfinite(r.max_gap);
    return Outcome{ok, std::to_string(r.periods.size()) + " of " + std::to_string(r.candidates) +
                           " candidates verified, max sup " + fmt(worst) + ", max gap " +
                           fmt(r.max_gap)};
  });

  suite.run(9, "decorated scheme", [&] {
    double a = autocorr_worst(s, g, two, 1e4, 15);
    double d = diffraction_worst(s, g, two, 1e5, 10);
    return Outcome{a <= decorated_rel_tol && d <= decorated_rel_tol,
                   "autocorrelation max rel err " + fmt(a) + ", diffraction max rel err " + fmt(d) +
                       " (tol " + fmt(decorated_rel_tol) + ")"};
  });

  suite.run(10, "injectivity report", [&] {
    InjectivityReport good = injectivity_report(s, g, unit, 10);
    Decoration cancel = Decoration::make(s, {{v1(0.0), v1(0.0), 1.0}, {v1(0.5), v1(0.2), -1.0}});
    InjectivityReport bad = injectivity_report(s, g, cancel, 10);
    bool ok = good.min_abs_rho == 1.0 && good.verdict && !bad.verdict && bad.argmin.size() == 2;
    std::string witness = bad.argmin.size() == 2
                              ? "(" + std::to_string(bad.argmin[0]) + ", " + std::to_string(bad.argmin[1]) + ")"
                              : "none";
    return Outcome{ok, "default min|rho| = " + fmt(good.min_abs_rho, "%.17g") + ", colliding decoration witness " +
                           witness + " with |rho| = " + fmt(bad.min_abs_rho)};
  });

  suite.run(11, "numerics", [&] {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    double fq = 0.0;
    for (int i = 0; i < 100; ++i) {
      Vector k = v1(u(rng));
      fq = std::max(fq, std::abs(fourier(g, k, Method::quadrature) - std::exp(-pi * k[0] * k[0])));
    }
    WeightFunction c = g.translated(v1(0.3)).scaled(Complex(0.6, 0.8));
    double herm = 0.0;
    for (int i = 0; i < 20; ++i) {
      Vector x = v1(u(rng));
      for (Method m : {Method::automatic, Method::quadrature})
        herm = std::max(herm, std::abs(self_correlation(c, -x, m) - std::conj(self_correlation(c, x, m))));
    }
    return Outcome{fq <= quadrature_tol && herm <= hermitian_tol,
                   "quadrature vs analytic " + fmt(fq) + " (tol " + fmt(quadrature_tol) +
                       "), Hermitian defect " + fmt(herm) + " (tol " + fmt(hermitian_tol) + ")"};
  });

  std::printf("%d of 11 criteria failed\n", suite.failures());
  return suite.failures() == 0 ? 0 : 1;
}
