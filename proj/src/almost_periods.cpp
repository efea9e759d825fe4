#include "cutproj/almost_periods.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cutproj/error.hpp"
#include "cutproj/spectral.hpp"

namespace cutproj {

namespace {

constexpr double pi = std::numbers::pi;
// exp(-pi * 6^2) ~ 1e-49: kernel reach in units of the scale.
constexpr double kernel_reach = 6.0;

class Smoothed {
public:
  Smoothed(const WeightedComb& comb, double scale) : atoms_(comb.atoms), scale_(scale) {
    norm_ = std::pow(scale, -static_cast<double>(comb.physical_box.dim()));
  }

  Complex operator()(const Vector& x) const {
    const double reach = kernel_reach * scale_;
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x[0] - reach,
                               [](const Atom& a, double v) { return a.position[0] < v; });
    Complex sum = 0.0;
    for (; it != atoms_.end() && it->position[0] <= x[0] + reach; ++it) {
      Vector diff = x - it->position;
      if (diff.cwiseAbs().maxCoeff() > reach)
        continue;
      sum += it->weight * std::exp(-pi * diff.squaredNorm() / (scale_ * scale_));
    }
    return norm_ * sum;
  }

private:
  const std::vector<Atom>& atoms_;
  double scale_;
  double norm_;
};

std::vector<Vector> grid_points(const Box& box, double spacing) {
  const int d = box.dim();
  std::vector<std::int64_t> counts(d);
  for (int i = 0; i < d; ++i)
    counts[i] = static_cast<std::int64_t>(std::floor((box.hi()[i] - box.lo()[i]) / spacing)) + 1;
  std::vector<Vector> pts;
  std::vector<std::int64_t> idx(d, 0);
  while (true) {
    Vector p(d);
    for (int i = 0; i < d; ++i)
      p[i] = box.lo()[i] + spacing * static_cast<double>(idx[i]);
    pts.push_back(p);
    int i = 0;
    while (i < d && ++idx[i] == counts[i])
      idx[i++] = 0;
    if (i == d)
      break;
  }
  return pts;
}

}  // namespace

AlmostPeriodResult almost_periods(const SchemeSpec& scheme, const WeightFunction& f,
                                  const Decoration& decoration, double eps,
                                  double kernel_scale, const Box& search_box,
                                  const AlmostPeriodOptions& options) {
  const int d = scheme.d(), m = scheme.m();
  if (!(eps > 0.0) || !(kernel_scale > 0.0))
    fail(ErrorKind::InvalidArgument, "almost periods need eps > 0 and kernel scale > 0");
  if (search_box.dim() != d)
    fail(ErrorKind::InvalidArgument, "search box has wrong dimension");
  if (f.non_smooth())
    fail(ErrorKind::NonSmoothWeight, "almost periods need a continuous weight");
  admissibility_certificate(f, scheme);

  AlmostPeriodResult result;

  // Fourier-side sum S over the dual points that matter.
  const double k_reach = std::sqrt(46.0 / pi) / kernel_scale;
  const double floor = std::pow(1e-6 * eps, 2);
  const double cut = peak_internal_cut(scheme, f, decoration, floor);
  PeakList peaks = diffraction_peaks(scheme, f, decoration, Box::cube(d, k_reach), cut, 0.0);
  double S = 0.0;
  for (const Peak& p : peaks.peaks)
    S += std::abs(p.c) * p.eta.norm() *
         std::exp(-pi * kernel_scale * kernel_scale * p.k.squaredNorm());
  result.fourier_sum = S;
  // With S = 0 every lattice translation works; keep the search finite.
  result.delta = S > 0.0 ? eps / (2.0 * pi * S) : 1.0;

  // Candidates: lattice points with physical part in the search box and
  // |l*| <= delta.
  std::vector<AlmostPeriod> candidates;
  Box region = search_box.product(Box::cube(m, result.delta));
  for_each_in_box(scheme.basis(), region, [&](const IntVector& z, const Vector& x) {
    if (x.tail(m).norm() <= result.delta)
      candidates.push_back({x.head(d), z, 0.0});
  });
  result.candidates = candidates.size();
  bool nonzero = std::any_of(candidates.begin(), candidates.end(),
                             [](const AlmostPeriod& c) { return !c.z.isZero(); });
  if (!nonzero)
    fail(ErrorKind::NoCandidatesInRange,
         "no lattice translation with |l*| <= " + std::to_string(result.delta) +
             " in the search box; enlarge it or increase the kernel scale");

  // Verification grid and the comb it needs.
  Box window = options.verify_window.value_or(search_box);
  if (window.dim() != d)
    fail(ErrorKind::InvalidArgument, "verification window has wrong dimension");
  double spacing = kernel_scale / 20.0;
  {
    double cells = 1.0;
    for (int i = 0; i < d; ++i)
      cells *= std::floor((window.hi()[i] - window.lo()[i]) / spacing) + 1.0;
    if (cells > static_cast<double>(options.max_grid_points))
      spacing *= std::pow(cells / static_cast<double>(options.max_grid_points), 1.0 / d);
  }
  result.grid_spacing = spacing;
  const double pad = kernel_reach * kernel_scale;
  Vector lo = window.lo() - search_box.hi() - Vector::Constant(d, pad);
  Vector hi = window.hi() - search_box.lo() + Vector::Constant(d, pad);
  lo = lo.cwiseMin(window.lo() - Vector::Constant(d, pad));
  hi = hi.cwiseMax(window.hi() + Vector::Constant(d, pad));
  WeightedComb comb = generate_comb(scheme, f, decoration, Box(lo, hi), options.eps_trunc);
  Smoothed g(comb, kernel_scale);

  std::vector<Vector> xs = grid_points(window, spacing);
  std::vector<Complex> gx;
  gx.reserve(xs.size());
  for (const Vector& x : xs)
    gx.push_back(g(x));

  for (AlmostPeriod& c : candidates) {
    double sup = 0.0;
    if (!c.z.isZero()) {
      for (std::size_t i = 0; i < xs.size() && sup <= eps; ++i)
        sup = std::max(sup, std::abs(g(xs[i] - c.t) - gx[i]));
    }
    c.verified_sup = sup;
    if (sup <= eps)
      result.periods.push_back(c);
  }
  std::sort(result.periods.begin(), result.periods.end(),
            [](const AlmostPeriod& a, const AlmostPeriod& b) {
              for (Eigen::Index i = 0; i < a.t.size(); ++i)
                if (a.t[i] != b.t[i])
                  return a.t[i] < b.t[i];
              return false;
            });

  if (result.periods.size() < 2) {
    result.max_gap = std::numeric_limits<double>::infinity();
  } else if (d == 1) {
    for (std::size_t i = 1; i < result.periods.size(); ++i)
      result.max_gap =
          std::max(result.max_gap, result.periods[i].t[0] - result.periods[i - 1].t[0]);
  } else {
    double side = 1.0;
    for (int i = 0; i < d; ++i)
      side = std::max(side, search_box.hi()[i] - search_box.lo()[i]);
    for (const Vector& p : grid_points(search_box, side / 40.0)) {
      double best = std::numeric_limits<double>::infinity();
      for (const AlmostPeriod& a : result.periods)
        best = std::min(best, (p - a.t).norm());
      result.max_gap = std::max(result.max_gap, best);
    }
  }
  return result;
}

}  // namespace cutproj
