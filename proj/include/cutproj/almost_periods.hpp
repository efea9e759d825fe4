// Almost periods of the smoothed comb g = nu_f * phi, phi(x) = s^{-d}
// exp(-pi |x|^2 / s^2) with s the kernel scale.
//
// Candidates are lattice translations l with |l*| <= delta. For such l every
// Fourier mode of g moves by at most 2 pi |eta| |l*|, so
//   sup |g(. - l) - g| <= 2 pi |l*| sum_lambda |c_lambda| |eta_lambda| phi^(k_lambda),
// and delta = eps / (2 pi S) with S that sum over the dual points carrying
// non-negligible mass. Each candidate is then checked on a grid of spacing
// s / 20 and kept only if the measured sup is at most eps.

#ifndef CUTPROJ_ALMOST_PERIODS_HPP_
#define CUTPROJ_ALMOST_PERIODS_HPP_

#include <optional>
#include <vector>

#include "cutproj/comb.hpp"
#include "cutproj/scheme.hpp"
#include "cutproj/weights.hpp"

namespace cutproj {

struct AlmostPeriod {
  Vector t;
  IntVector z;
  double verified_sup = 0.0;
};

struct AlmostPeriodOptions {
  double eps_trunc = 1e-12;
  // Window of x values for the sup; defaults to the search box.
  std::optional<Box> verify_window;
  // Cap on grid points in the verification window (spacing grows past it).
  std::int64_t max_grid_points = 200000;
};

struct AlmostPeriodResult {
  std::vector<AlmostPeriod> periods;  // sorted by t
  double delta = 0.0;
  double fourier_sum = 0.0;           // S above
  std::size_t candidates = 0;
  double grid_spacing = 0.0;
  // d = 1: largest gap between consecutive periods; otherwise the largest
  // distance from a sample of the search box to the nearest period.
  double max_gap = 0.0;
};

// Throws NoCandidatesInRange when the search box holds no nonzero candidate.
AlmostPeriodResult almost_periods(const SchemeSpec& scheme, const WeightFunction& f,
                                  const Decoration& decoration, double eps,
                                  double kernel_scale, const Box& search_box,
                                  const AlmostPeriodOptions& options = {});

}  // namespace cutproj

#endif  // CUTPROJ_ALMOST_PERIODS_HPP_
