#include "cutproj/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "cutproj/error.hpp"
#include "parallel.hpp"

namespace cutproj {

namespace {

std::atomic<int> g_workers{1};

constexpr double two_pi = 2.0 * std::numbers::pi;

Complex expi(double arg) { return {std::cos(arg), std::sin(arg)}; }

bool vector_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a[i] != b[i])
      return a[i] < b[i];
  return false;
}

bool int_less(const IntVector& a, const IntVector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

// Smallest r in [0, 1e6] with bound(r) < target, bound non-increasing.
double bisect_radius(const std::function<double(double)>& bound, double target) {
  if (bound(0.0) < target)
    return 0.0;
  double hi = 1.0;
  while (!(bound(hi) < target)) {
    hi *= 2.0;
    if (hi > 1e6)
      fail(ErrorKind::NotAdmissible, "no cut radius below 1e6 reaches the requested floor");
  }
  double lo = 0.5 * hi;
  if (hi == 1.0)
    lo = 0.0;
  for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (bound(mid) < target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

void check_scheme_weight(const SchemeSpec& scheme, const WeightFunction& f) {
  if (f.dim() != scheme.m())
    fail(ErrorKind::InvalidArgument, "weight dimension " + std::to_string(f.dim()) +
                                         " does not match internal dimension " +
                                         std::to_string(scheme.m()));
}

}  // namespace

void set_worker_count(int n) {
  if (n < 1)
    fail(ErrorKind::InvalidArgument, "worker count must be at least 1");
  g_workers = n;
}

int worker_count() { return g_workers.load(); }

// ---------------------------------------------------------------------------
// Boxes

std::vector<Box> BoxSequence::boxes() const {
  if (!(growth > 1.0) || steps < 1)
    fail(ErrorKind::InvalidArgument, "box sequence needs growth > 1 and steps >= 1");
  if (!(base.volume() > 0.0))
    fail(ErrorKind::InvalidArgument, "base box must have positive volume");
  std::vector<Box> out;
  double factor = 1.0;
  for (int i = 0; i < steps; ++i) {
    out.emplace_back(base.lo(), base.lo() + factor * (base.hi() - base.lo()));
    factor *= growth;
  }
  return out;
}

Box BoxSequence::largest() const { return boxes().back(); }

// ---------------------------------------------------------------------------
// Density

Complex density_closed(const SchemeSpec& scheme, const WeightFunction& f,
                       const Decoration& decoration) {
  check_scheme_weight(scheme, f);
  if (!f.non_smooth())
    admissibility_certificate(f, scheme);
  return decoration.total_weight() / scheme.covolume() * integral(f);
}

std::vector<Complex> weyl_average(const WeightedComb& comb, const BoxSequence& boxes) {
  std::vector<Complex> out;
  for (const Box& b : boxes.boxes()) {
    if (!comb.physical_box.contains(b))
      fail(ErrorKind::InvalidArgument, "comb does not cover every averaging box");
    Complex sum = detail::ordered_sum(comb.atoms.size(), [&](std::size_t i) -> Complex {
      const Atom& a = comb.atoms[i];
      return b.contains(a.position, 0.0) ? a.weight : Complex(0.0);
    });
    out.push_back(sum / b.volume());
  }
  return out;
}

std::vector<Complex> weyl_average(const SchemeSpec& scheme, const WeightFunction& f,
                                  const Decoration& decoration, const TorusPoint& xi,
                                  const BoxSequence& boxes, double eps_trunc) {
  check_scheme_weight(scheme, f);
  Box largest = boxes.largest();
  WeightedComb comb;
  if (f.non_smooth()) {
    // Point counting through a window: no truncation needed.
    Vector rep = scheme.basis().matrix() * xi.fractional;
    comb = comb_with_radius(scheme, f, decoration, scheme.physical(rep), scheme.internal(rep),
                            largest, *f.support_radius());
  } else {
    comb = hull_element(scheme, f, decoration, xi, largest, eps_trunc);
  }
  return weyl_average(comb, boxes);
}

// ---------------------------------------------------------------------------
// Autocorrelation

std::vector<std::size_t> AutocorrelationTable::top(std::size_t n) const {
  std::vector<std::size_t> idx(entries.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    double ma = std::abs(entries[a].eta), mb = std::abs(entries[b].eta);
    if (ma != mb)
      return ma > mb;
    return vector_less(entries[a].l, entries[b].l);
  });
  if (idx.size() > n)
    idx.resize(n);
  return idx;
}

namespace {

std::vector<AutocorrEntry> merge_entries(std::vector<AutocorrEntry> raw) {
  std::stable_sort(raw.begin(), raw.end(),
                   [](const AutocorrEntry& a, const AutocorrEntry& b) {
                     return vector_less(a.l, b.l);
                   });
  std::vector<AutocorrEntry> out;
  std::vector<char> gone(raw.size(), 0);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (gone[i])
      continue;
    AutocorrEntry e = raw[i];
    for (std::size_t j = i + 1; j < raw.size() && raw[j].l[0] - raw[i].l[0] <= 1e-9; ++j) {
      if (!gone[j] && (raw[j].l - raw[i].l).cwiseAbs().maxCoeff() <= 1e-9) {
        e.eta += raw[j].eta;
        gone[j] = 1;
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

AutocorrelationTable autocorr_closed(const SchemeSpec& scheme, const WeightFunction& f,
                                     const Decoration& decoration, const Box& range,
                                     double internal_cut) {
  check_scheme_weight(scheme, f);
  if (f.non_smooth())
    fail(ErrorKind::NonSmoothWeight, "closed-form autocorrelation needs a continuous weight");
  if (range.dim() != scheme.d())
    fail(ErrorKind::InvalidArgument, "displacement range has wrong dimension");
  if (!(internal_cut >= 0.0))
    fail(ErrorKind::InvalidArgument, "internal_cut must be non-negative");
  const int d = scheme.d(), m = scheme.m();
  const double inv_covol = 1.0 / scheme.covolume();

  std::vector<AutocorrEntry> raw;
  for (const auto& ai : decoration.atoms()) {
    for (const auto& aj : decoration.atoms()) {
      Complex ww = ai.w * std::conj(aj.w);
      if (ww == 0.0)
        continue;
      Vector ds = ai.s - aj.s, dk = ai.k - aj.k;
      Box region = range.translated(-ds).product(Box::cube(m, internal_cut).translated(-dk));
      for_each_in_box(scheme.basis(), region, [&](const IntVector& z, const Vector& x) {
        Vector u = x.tail(m) + dk;
        if (u.norm() > internal_cut)
          return;
        Vector l = x.head(d) + ds;
        if (!range.contains(l))
          return;
        raw.push_back({l, z, inv_covol * ww * self_correlation(f, u)});
      });
    }
  }
  AutocorrelationTable table;
  table.entries = merge_entries(std::move(raw));
  table.normalization = inv_covol;
  return table;
}

double autocorr_internal_cut(const SchemeSpec& scheme, const WeightFunction& f,
                             const Decoration& decoration, double floor) {
  check_scheme_weight(scheme, f);
  if (!(floor > 0.0))
    fail(ErrorKind::InvalidArgument, "floor must be positive");
  if (auto r = f.support_radius())
    return 2.0 * *r;
  // |(f * f~)(u)| <= 2 sup|f| \int_{|h| >= |u|/2} |f|.
  double pref = std::pow(decoration.abs_weight(), 2) / scheme.covolume() * 2.0 * f.sup_abs();
  return bisect_radius([&](double r) { return pref * tail_mass(f, 0.5 * r); }, floor);
}

AutocorrelationTable autocorr_estimate(const WeightedComb& comb,
                                       const AutocorrelationTable& support,
                                       double match_tol) {
  if (!(match_tol >= 0.0))
    fail(ErrorKind::InvalidArgument, "match_tol must be non-negative");
  const auto& atoms = comb.atoms;
  const double inv_vol = 1.0 / comb.physical_box.volume();
  AutocorrelationTable out;
  out.normalization = inv_vol;
  for (const auto& e : support.entries) {
    if (e.l.size() != comb.physical_box.dim())
      fail(ErrorKind::InvalidArgument, "displacement has wrong dimension");
    Complex sum = detail::ordered_sum(atoms.size(), [&](std::size_t i) -> Complex {
      const Atom& x = atoms[i];
      Vector target = x.position - e.l;
      auto it = std::lower_bound(atoms.begin(), atoms.end(), target[0] - match_tol,
                                 [](const Atom& a, double v) { return a.position[0] < v; });
      Complex acc = 0.0;
      for (; it != atoms.end() && it->position[0] <= target[0] + match_tol; ++it)
        if ((it->position - target).norm() <= match_tol)
          acc += x.weight * std::conj(it->weight);
      return acc;
    });
    out.entries.push_back({e.l, e.z, sum * inv_vol});
  }
  return out;
}

AutocorrelationTable autocorr_estimate(const WeightedComb& comb, const Box& range,
                                       double match_tol) {
  if (range.dim() != comb.physical_box.dim())
    fail(ErrorKind::InvalidArgument, "displacement range has wrong dimension");
  const auto& atoms = comb.atoms;
  std::vector<AutocorrEntry> raw;
  for (const Atom& x : atoms) {
    // y with x - y in range, i.e. y_0 in [x_0 - hi_0, x_0 - lo_0].
    auto it = std::lower_bound(atoms.begin(), atoms.end(), x.position[0] - range.hi()[0],
                               [](const Atom& a, double v) { return a.position[0] < v; });
    for (; it != atoms.end() && it->position[0] <= x.position[0] - range.lo()[0]; ++it) {
      Vector l = x.position - it->position;
      if (range.contains(l))
        raw.push_back({l, IntVector(), x.weight * std::conj(it->weight)});
    }
  }
  std::stable_sort(raw.begin(), raw.end(), [](const AutocorrEntry& a, const AutocorrEntry& b) {
    return vector_less(a.l, b.l);
  });
  AutocorrelationTable out;
  out.normalization = 1.0 / comb.physical_box.volume();
  std::vector<char> gone(raw.size(), 0);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (gone[i])
      continue;
    AutocorrEntry e = raw[i];
    for (std::size_t j = i + 1; j < raw.size() && raw[j].l[0] - raw[i].l[0] <= match_tol; ++j) {
      if (!gone[j] && (raw[j].l - raw[i].l).norm() <= match_tol) {
        e.eta += raw[j].eta;
        gone[j] = 1;
      }
    }
    e.eta *= out.normalization;
    out.entries.push_back(std::move(e));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Diffraction

Complex rho_torus(const Decoration& decoration, const Vector& k, const Vector& eta) {
  Complex sum = 0.0;
  for (const auto& a : decoration.atoms()) {
    if (a.s.size() != k.size() || a.k.size() != eta.size())
      fail(ErrorKind::InvalidArgument, "dual vector has wrong dimensions");
    sum += a.w * expi(-two_pi * (k.dot(a.s) + eta.dot(a.k)));
  }
  return sum;
}

Complex rho_torus(const SchemeSpec& scheme, const Decoration& decoration, const IntVector& z) {
  if (z.size() != scheme.dim())
    fail(ErrorKind::InvalidArgument, "dual coordinates have wrong dimension");
  Vector lambda = scheme.dual().point(z);
  return rho_torus(decoration, scheme.physical(lambda), scheme.internal(lambda));
}

double peak_internal_cut(const SchemeSpec& scheme, const WeightFunction& f,
                         const Decoration& decoration, double floor) {
  check_scheme_weight(scheme, f);
  if (!(floor > 0.0))
    fail(ErrorKind::InvalidArgument, "intensity floor must be positive");
  double pref = decoration.abs_weight() / scheme.covolume();
  return bisect_radius(
      [&](double r) { return std::pow(pref * fourier_envelope(f, r), 2); }, floor);
}

PeakList diffraction_peaks(const SchemeSpec& scheme, const WeightFunction& f,
                           const Decoration& decoration, const Box& k_range,
                           double internal_cut, double intensity_floor) {
  check_scheme_weight(scheme, f);
  if (f.non_smooth())
    fail(ErrorKind::NonSmoothWeight, "diffraction needs a continuous weight; got " +
                                         f.describe());
  if (k_range.dim() != scheme.d())
    fail(ErrorKind::InvalidArgument, "k range has wrong dimension");
  if (!(internal_cut >= 0.0) || !(intensity_floor >= 0.0))
    fail(ErrorKind::InvalidArgument, "internal_cut and intensity_floor must be non-negative");
  admissibility_certificate(f, scheme);
  const int d = scheme.d(), m = scheme.m();
  const double inv_covol = 1.0 / scheme.covolume();

  PeakList list;
  list.intensity_floor = intensity_floor;
  list.internal_cut = internal_cut;
  Box region = k_range.product(Box::cube(m, internal_cut));
  for_each_in_box(scheme.dual(), region, [&](const IntVector& z, const Vector& lambda) {
    Vector eta = lambda.tail(m);
    if (eta.norm() > internal_cut)
      return;
    Vector k = lambda.head(d);
    Complex c = rho_torus(decoration, k, eta) * fourier(f, eta) * inv_covol;
    double intensity = std::norm(c);
    if (intensity < intensity_floor)
      return;
    list.peaks.push_back({k, z, eta, c, intensity});
  });
  std::sort(list.peaks.begin(), list.peaks.end(), [](const Peak& a, const Peak& b) {
    if (a.intensity != b.intensity)
      return a.intensity > b.intensity;
    if (vector_less(a.k, b.k) || vector_less(b.k, a.k))
      return vector_less(a.k, b.k);
    return int_less(a.z, b.z);
  });
  return list;
}

std::vector<Complex> fourier_bohr_estimate(const WeightedComb& comb, const Vector& k,
                                           const BoxSequence& boxes) {
  if (k.size() != comb.physical_box.dim())
    fail(ErrorKind::InvalidArgument, "frequency has wrong dimension");
  std::vector<Complex> out;
  for (const Box& b : boxes.boxes()) {
    if (!comb.physical_box.contains(b))
      fail(ErrorKind::InvalidArgument, "comb does not cover every averaging box");
    Complex sum = detail::ordered_sum(comb.atoms.size(), [&](std::size_t i) -> Complex {
      const Atom& a = comb.atoms[i];
      if (!b.contains(a.position, 0.0))
        return 0.0;
      return a.weight * expi(-two_pi * k.dot(a.position));
    });
    out.push_back(sum / b.volume());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Injectivity

InjectivityReport injectivity_report(const SchemeSpec& scheme, const WeightFunction& f,
                                     const Decoration& decoration,
                                     std::int64_t dual_search_radius) {
  check_scheme_weight(scheme, f);
  if (dual_search_radius < 0)
    fail(ErrorKind::InvalidArgument, "dual search radius must be non-negative");
  const int n = scheme.dim();
  const std::int64_t side = 2 * dual_search_radius + 1;
  double total = std::pow(static_cast<double>(side), n);
  if (total > 1e7)
    fail(ErrorKind::CapacityExceeded, "dual search range has more than 1e7 points");

  InjectivityReport report;
  report.min_abs_rho = std::numeric_limits<double>::infinity();
  // Visit z in order of increasing |z|_inf so the witness is the smallest one.
  for (std::int64_t shell = 0; shell <= dual_search_radius; ++shell) {
    IntVector z = IntVector::Constant(n, -shell);
    while (true) {
      if (z.cwiseAbs().maxCoeff() == shell) {
        ++report.dual_points;
        double v = std::abs(rho_torus(scheme, decoration, z));
        if (v < report.min_abs_rho) {
          report.min_abs_rho = v;
          report.argmin = z;
        }
      }
      int i = n - 1;
      while (i >= 0 && z[i] == shell)
        z[i--] = -shell;
      if (i < 0)
        break;
      ++z[i];
    }
  }
  report.period = has_nontrivial_period(f);
  bool rho_ok = report.min_abs_rho > 1e-9;
  report.verdict = rho_ok && !report.period.periodic;
  if (report.verdict) {
    report.message = "injectivity hypotheses verified on searched range";
  } else {
    report.message = "injectivity hypotheses violated:";
    if (!rho_ok)
      report.message += " rho_T vanishes (to 1e-9) at the witness dual point;";
    if (report.period.periodic)
      report.message += report.period.degenerate ? " weight is identically zero;"
                                                 : " weight has a nontrivial period;";
  }
  return report;
}

}  // namespace cutproj
