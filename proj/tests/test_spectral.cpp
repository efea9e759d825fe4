#include <doctest.h>

#include <algorithm>
#include <map>

#include "cutproj/almost_periods.hpp"
#include "cutproj/error.hpp"
#include "cutproj/spectral.hpp"
#include "support.hpp"

using namespace cutproj;
using namespace testing;

namespace {

const WeightFunction& gauss() {
  static const WeightFunction g = WeightFunction::gaussian(1);
  return g;
}

Decoration two_atoms() {
  return Decoration::make(golden(), {{vec({0}), vec({0}), 1.0}, {vec({0.5}), vec({0.2}), Complex(0.5, 0.5)}});
}

BoxSequence seq(double hi, double growth, int steps) {
  BoxSequence b;
  b.base = interval(0, hi);
  b.growth = growth;
  b.steps = steps;
  return b;
}

const Peak* find_peak(const PeakList& list, const IntVector& z) {
  for (const auto& p : list.peaks)
    if (p.z == z)
      return &p;
  return nullptr;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("box sequences") {
  auto boxes = seq(100, 10, 3).boxes();
  REQUIRE(boxes.size() == 3);
  CHECK(boxes[2].hi()[0] == doctest::Approx(10000.0));
  CHECK(boxes[2].lo()[0] == 0.0);
  CHECK(seq(100, 10, 3).largest().volume() == doctest::Approx(10000.0));
}

TEST_CASE("density") {
  const SchemeSpec& s = golden();
  CHECK(density_closed(s, gauss(), Decoration::unit(s)).real() == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-14));
  CHECK(std::abs(density_closed(s, gauss(), two_atoms()) - Complex(1.5, 0.5) / std::sqrt(5.0)) <= 1e-14);
  CHECK(density_closed(s, WeightFunction::sharp_window(interval(-0.5, 0.5)), Decoration::unit(s)).real() ==
        doctest::Approx(1.0 / std::sqrt(5.0)));

  auto w = weyl_average(s, gauss(), Decoration::unit(s), torus_point(s, vec({0}), vec({0})), seq(100, 10, 3));
  REQUIRE(w.size() == 3);
  CHECK(std::abs(w[2] - 1.0 / std::sqrt(5.0)) <= 0.01 / std::sqrt(5.0));

  Complex dec_closed = density_closed(s, gauss(), two_atoms());
  auto wd = weyl_average(s, gauss(), two_atoms(), torus_point(s, vec({0}), vec({0})), seq(100, 10, 3));
  CHECK(std::abs(wd[2] - dec_closed) <= 0.01 * std::abs(dec_closed));

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 10; ++i) {
    TorusPoint xi = torus_point(s, vec({u(rng)}), vec({u(rng)}));
    auto wx = weyl_average(s, gauss(), Decoration::unit(s), xi, seq(100, 10, 3));
    CHECK(std::abs(wx[2] - 1.0 / std::sqrt(5.0)) <= 0.01 / std::sqrt(5.0));
  }

  WeightFunction zero = gauss().scaled(0.0);
  CHECK(std::abs(density_closed(s, zero, Decoration::unit(s))) == 0.0);
  auto wz = weyl_average(s, zero, Decoration::unit(s), torus_point(s, vec({0}), vec({0})), seq(100, 10, 2));
  CHECK(std::abs(wz[1]) == 0.0);
}

TEST_CASE("closed-form autocorrelation") {
  const SchemeSpec& s = golden();
  AutocorrelationTable t = autocorr_closed(s, gauss(), Decoration::unit(s), interval(-10, 10), 5.0);
  CHECK(t.normalization == doctest::Approx(1.0 / std::sqrt(5.0)));
  std::map<std::pair<long, long>, Complex> by_z;
  for (const auto& e : t.entries)
    by_z[{static_cast<long>(e.z[0]), static_cast<long>(e.z[1])}] = e.eta;

  // eta(l) = (1/sqrt 5) (1/sqrt 2) exp(-pi l*^2 / 2).
  auto oracle = [](double ls) { return std::exp(-pi * ls * ls / 2.0) / std::sqrt(10.0); };
  REQUIRE(by_z.count({0, 0}));
  CHECK(by_z[{0, 0}].real() == doctest::Approx(0.316228).epsilon(1e-6));
  REQUIRE(by_z.count({1, 0}));
  CHECK(std::abs(by_z[{1, 0}] - oracle(1.0)) <= 1e-14);
  REQUIRE(by_z.count({1, 1}));
  CHECK(std::abs(by_z[{1, 1}] - oracle(2.0 - phi)) <= 1e-14);

  for (const auto& e : t.entries) {
    CHECK(std::abs(e.l[0]) <= 10.0 + 1e-12);
    // Each lattice displacement l has -l in the table with the conjugate value.
    auto it = by_z.find({-static_cast<long>(e.z[0]), -static_cast<long>(e.z[1])});
    REQUIRE(it != by_z.end());
    CHECK(std::abs(it->second - std::conj(e.eta)) <= 1e-15);
  }

  // Decorated, with a polynomially decaying weight: coefficients against a
  // quadrature self-correlation.
  WeightFunction p = WeightFunction::polydecay(1, 4.0);
  Decoration dec = two_atoms();
  AutocorrelationTable td = autocorr_closed(s, p, dec, interval(-5, 5), 4.0);
  int checked = 0;
  for (const auto& e : td.entries) {
    Complex expected = 0.0;
    for (const auto& ai : dec.atoms())
      for (const auto& aj : dec.atoms())
        for (int a = -20; a <= 20; ++a)
          for (int b = -20; b <= 20; ++b) {
            StarImage lat = star_map(s, ivec({a, b}));
            Vector x = ai.s - aj.s + lat.l;
            Vector h = ai.k - aj.k + lat.l_star;
            if (std::abs(x[0] - e.l[0]) < 1e-9 && std::abs(h[0]) <= 4.0)
              expected += ai.w * std::conj(aj.w) * self_correlation(p, h, Method::quadrature) / std::sqrt(5.0);
          }
    CHECK(std::abs(e.eta - expected) <= 1e-8);
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("autocorrelation estimates") {
  const SchemeSpec& s = golden();
  AutocorrelationTable t = autocorr_closed(s, gauss(), Decoration::unit(s), interval(-20, 20), 5.0);
  WeightedComb c = generate_comb(s, gauss(), Decoration::unit(s), interval(0, 10000), 1e-12);
  AutocorrelationTable est = autocorr_estimate(c, t);
  REQUIRE(est.entries.size() == t.entries.size());
  for (std::size_t i : t.top(15))
    CHECK(std::abs(est.entries[i].eta - t.entries[i].eta) <= 0.02 * std::abs(t.entries[i].eta));

  AutocorrelationTable free = autocorr_estimate(c, interval(-3, 3));
  CHECK(free.entries.size() >= 3);
  bool saw_zero = false;
  for (const auto& e : free.entries)
    if (std::abs(e.l[0]) < 1e-9) {
      saw_zero = true;
      CHECK(e.eta.real() == doctest::Approx(0.316228).epsilon(0.02));
    }
  CHECK(saw_zero);
}

TEST_CASE("diffraction peaks") {
  const SchemeSpec& s = golden();
  Box kr = interval(-5, 5);
  PeakList pl = diffraction_peaks(s, gauss(), Decoration::unit(s), kr, 5.0, 1e-8);
  REQUIRE(!pl.peaks.empty());
  CHECK(pl.peaks[0].z.isZero());
  CHECK(pl.peaks[0].intensity == doctest::Approx(0.2).epsilon(1e-14));

  // Dual point z = (0, 1): k = 1/sqrt 5, eta = -1/sqrt 5.
  const Peak* p01 = find_peak(pl, ivec({0, 1}));
  REQUIRE(p01 != nullptr);
  CHECK(p01->k[0] == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-12));
  CHECK(p01->eta[0] == doctest::Approx(-1.0 / std::sqrt(5.0)).epsilon(1e-12));
  CHECK(p01->intensity == doctest::Approx(std::exp(-2.0 * pi / 5.0) / 5.0).epsilon(1e-12));

  WeightedComb c = generate_comb(s, gauss(), Decoration::unit(s), interval(0, 100000), 1e-12);
  auto fb = fourier_bohr_estimate(c, p01->k, seq(100000, 2, 1));
  CHECK(std::abs(fb[0] - p01->c) <= 1e-3);

  for (std::size_t i = 0; i < pl.peaks.size(); ++i) {
    const Peak& p = pl.peaks[i];
    CHECK(p.intensity >= 1e-8);
    CHECK(kr.contains(p.k));
    CHECK(std::abs(p.intensity - std::norm(p.c)) <= 1e-15);
    CHECK(std::abs(p.eta[0]) <= 5.0);
    if (i > 0)
      CHECK(pl.peaks[i - 1].intensity >= p.intensity);
  }

  // Scaling the decoration by 2 scales every intensity by 4; amplitudes add
  // over the atoms of a decoration.
  PeakList doubled = diffraction_peaks(s, gauss(), Decoration::unit(s).scaled(2.0), kr, 5.0, 1e-8);
  CHECK(doubled.peaks[0].intensity == doctest::Approx(0.8));
  const Peak* d01 = find_peak(doubled, ivec({0, 1}));
  REQUIRE(d01 != nullptr);
  CHECK(d01->intensity == doctest::Approx(4.0 * p01->intensity).epsilon(1e-12));

  DecorationAtom a{vec({0}), vec({0}), 1.0};
  DecorationAtom b{vec({0.5}), vec({0.2}), Complex(0.5, 0.5)};
  PeakList pa = diffraction_peaks(s, gauss(), Decoration::make(s, {a}), kr, 5.0, 0.0);
  PeakList pb = diffraction_peaks(s, gauss(), Decoration::make(s, {b}), kr, 5.0, 0.0);
  PeakList pab = diffraction_peaks(s, gauss(), two_atoms(), kr, 5.0, 0.0);
  for (const auto& p : pab.peaks) {
    const Peak* x = find_peak(pa, p.z);
    const Peak* y = find_peak(pb, p.z);
    REQUIRE(x != nullptr);
    REQUIRE(y != nullptr);
    CHECK(std::abs(p.c - (x->c + y->c)) <= 1e-14);
  }

  CHECK_THROWS_AS(diffraction_peaks(s, WeightFunction::sharp_window(interval(-0.5, 0.5)),
                                    Decoration::unit(s), kr, 5.0, 1e-8),
                  Error);
}

TEST_CASE("torus character") {
  const SchemeSpec& s = golden();
  Decoration dec = two_atoms();
  // Dual point z = (1, 0): lambda = (1 / phi, phi) / sqrt 5.
  double phase = (0.5 / phi + 0.2 * phi) / std::sqrt(5.0);
  Complex expected = 1.0 + Complex(0.5, 0.5) * std::exp(Complex(0.0, -2.0 * pi * phase));
  CHECK(std::abs(rho_torus(s, dec, ivec({1, 0})) - expected) <= 1e-12);
  CHECK(std::abs(rho_torus(s, dec, ivec({0, 0})) - dec.total_weight()) <= 1e-15);
}

TEST_CASE("Fourier-Bohr coefficients") {
  const SchemeSpec& s = golden();
  Decoration unit = Decoration::unit(s);
  WeightedComb c = generate_comb(s, gauss(), unit, interval(0, 10000), 1e-12);
  BoxSequence boxes = seq(100, 10, 3);
  auto at0 = fourier_bohr_estimate(c, vec({0}), boxes);
  auto weyl = weyl_average(c, boxes);
  for (std::size_t i = 0; i < at0.size(); ++i)
    CHECK(std::abs(at0[i] - weyl[i]) <= 1e-12);

  // Far from every dual point with non-negligible mass.
  auto off = fourier_bohr_estimate(c, vec({0.123456}), boxes);
  CHECK(std::abs(off[2]) <= 5e-3);

  // Peak amplitudes do not depend on the hull element up to a phase.
  PeakList pl = diffraction_peaks(s, gauss(), unit, interval(-2, 2), 5.0, 1e-4);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 3; ++trial) {
    TorusPoint xi = torus_point(s, vec({u(rng)}), vec({u(rng)}));
    WeightedComb h = hull_element(s, gauss(), unit, xi, interval(0, 10000), 1e-12);
    for (std::size_t i = 0; i < std::min<std::size_t>(5, pl.peaks.size()); ++i) {
      auto est = fourier_bohr_estimate(h, pl.peaks[i].k, seq(10000, 2, 1));
      CHECK(std::abs(std::abs(est[0]) - std::abs(pl.peaks[i].c)) <= 2e-3);
    }
  }
}

TEST_CASE("mean diffraction intensity equals the central autocorrelation mass") {
  const SchemeSpec& s = golden();
  double K = 30.0;
  PeakList pl = diffraction_peaks(s, gauss(), Decoration::unit(s), interval(-K, K), 3.0, 0.0);
  double total = 0.0;
  for (const auto& p : pl.peaks)
    total += p.intensity;
  double gamma0 = self_correlation(gauss(), vec({0})).real() / std::sqrt(5.0);
  CHECK(total / (2.0 * K) == doctest::Approx(gamma0).epsilon(0.05));
}

TEST_CASE("injectivity report") {
  const SchemeSpec& s = golden();
  InjectivityReport r = injectivity_report(s, gauss(), Decoration::unit(s), 10);
  CHECK(r.verdict);
  CHECK(r.dual_points == 21 * 21);
  CHECK(r.min_abs_rho == doctest::Approx(1.0));
  CHECK(r.message == "injectivity hypotheses verified on searched range");

  Decoration cancel = Decoration::make(s, {{vec({0}), vec({0}), 1.0}, {vec({0.5}), vec({0.2}), -1.0}});
  InjectivityReport bad = injectivity_report(s, gauss(), cancel, 5);
  CHECK_FALSE(bad.verdict);
  CHECK(bad.min_abs_rho <= 1e-12);
  CHECK(bad.argmin.isZero());

  InjectivityReport flat = injectivity_report(s, gauss().scaled(0.0), Decoration::unit(s), 3);
  CHECK_FALSE(flat.verdict);
}

TEST_CASE("almost periods") {
  const SchemeSpec& s = golden();
  AlmostPeriodResult r = almost_periods(s, gauss(), Decoration::unit(s), 1e-3, 5.0, interval(0, 200));
  REQUIRE(!r.periods.empty());
  CHECK(r.delta > 0.0);
  for (const auto& p : r.periods) {
    CHECK(p.verified_sup <= 1e-3);
    StarImage lat = star_map(s, p.z);
    CHECK(std::abs(lat.l[0] - p.t[0]) <= 1e-9);
    CHECK(std::abs(lat.l_star[0]) <= r.delta + 1e-12);
    CHECK(p.t[0] >= 0.0);
    CHECK(p.t[0] <= 200.0);
  }
  CHECK_THROWS_AS(almost_periods(s, gauss(), Decoration::unit(s), 1e-3, 1.0, interval(0, 50)), Error);
}

TEST_CASE("worker count does not change sums") {
  const SchemeSpec& s = golden();
  WeightedComb c = generate_comb(s, gauss(), two_atoms(), interval(0, 20000), 1e-12);
  set_worker_count(1);
  auto one = fourier_bohr_estimate(c, vec({0.3}), seq(20000, 2, 1));
  set_worker_count(4);
  auto four = fourier_bohr_estimate(c, vec({0.3}), seq(20000, 2, 1));
  set_worker_count(1);
  CHECK(one[0] == four[0]);
}

}  // TEST_SUITE
