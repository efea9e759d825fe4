// Averaged quantities of weighted combs: density, autocorrelation and
// diffraction, each in closed form and as a brute-force estimate over boxes.
//
// Conventions. A dual vector lambda = (k, eta) = D z pairs integrally with the
// lattice. Its torus character weight is
//   rho_T(lambda) = sum_j w_j exp(-2 pi i (k.s_j + eta.k_j))
// and the peak amplitude is c = rho_T(lambda) F(eta) / covolume with
// F = fourier(f). This matches the Fourier-Bohr average
//   (1/vol B) sum_{x in B} w_x exp(-2 pi i k.x).

#ifndef CUTPROJ_SPECTRAL_HPP_
#define CUTPROJ_SPECTRAL_HPP_

#include <string>
#include <vector>

#include "cutproj/comb.hpp"
#include "cutproj/lattice.hpp"
#include "cutproj/scheme.hpp"
#include "cutproj/weights.hpp"

namespace cutproj {

// Threads used by the exponential and pair sums (default 1). Sums are split
// into fixed chunks, so the worker count does not change the result.
void set_worker_count(int n);
int worker_count();

// base, base * growth, base * growth^2, ... with the lower corner pinned.
struct BoxSequence {
  Box base;
  double growth = 2.0;
  int steps = 1;

  std::vector<Box> boxes() const;
  Box largest() const;
};

// (sum_j w_j / covolume) * \int f. Sharp windows allowed.
Complex density_closed(const SchemeSpec& scheme, const WeightFunction& f,
                       const Decoration& decoration);

// (1 / vol B_n) * sum of weights of the comb in B_n, for each box.
std::vector<Complex> weyl_average(const WeightedComb& comb, const BoxSequence& boxes);
// Builds the hull element at xi over the largest box first (origin: the plain
// comb, which also accepts sharp windows).
std::vector<Complex> weyl_average(const SchemeSpec& scheme, const WeightFunction& f,
                                  const Decoration& decoration, const TorusPoint& xi,
                                  const BoxSequence& boxes, double eps_trunc = 1e-12);

struct AutocorrEntry {
  Vector l;       // displacement
  IntVector z;    // lattice coordinates of the lattice part of l
  Complex eta;    // coefficient of the point mass at l (normalization applied)
};

struct AutocorrelationTable {
  std::vector<AutocorrEntry> entries;  // sorted by displacement
  double normalization = 1.0;          // 1 / covolume or 1 / box volume

  // Indices of the n entries of largest |eta|, ties broken by displacement.
  std::vector<std::size_t> top(std::size_t n) const;
};

// Entries at s_i - s_j + l (displacement in range) with |k_i - k_j + l*| <=
// internal_cut and coefficient w_i conj(w_j) (f * f~)(k_i - k_j + l*) / covolume.
AutocorrelationTable autocorr_closed(const SchemeSpec& scheme, const WeightFunction& f,
                                     const Decoration& decoration, const Box& range,
                                     double internal_cut);

// Smallest internal radius outside which every closed-form coefficient is
// below `floor`.
double autocorr_internal_cut(const SchemeSpec& scheme, const WeightFunction& f,
                             const Decoration& decoration, double floor);

// Pair-sum estimate (1 / vol) sum_{|x - y - l| <= match_tol} w_x conj(w_y) at
// each displacement of `support`.
AutocorrelationTable autocorr_estimate(const WeightedComb& comb,
                                       const AutocorrelationTable& support,
                                       double match_tol = 1e-6);
// Same, with the support taken from all pair differences inside `range`
// (clustered at match_tol). z is left empty.
AutocorrelationTable autocorr_estimate(const WeightedComb& comb, const Box& range,
                                       double match_tol = 1e-6);

Complex rho_torus(const Decoration& decoration, const Vector& k, const Vector& eta);
Complex rho_torus(const SchemeSpec& scheme, const Decoration& decoration, const IntVector& z);

struct Peak {
  Vector k;
  IntVector z;
  Vector eta;
  Complex c;
  double intensity = 0.0;
};

struct PeakList {
  std::vector<Peak> peaks;  // descending intensity
  double intensity_floor = 0.0;
  double internal_cut = 0.0;
};

// Smallest |eta| beyond which |c|^2 < floor is guaranteed by the Fourier
// envelope of f.
double peak_internal_cut(const SchemeSpec& scheme, const WeightFunction& f,
                         const Decoration& decoration, double floor);

PeakList diffraction_peaks(const SchemeSpec& scheme, const WeightFunction& f,
                           const Decoration& decoration, const Box& k_range,
                           double internal_cut, double intensity_floor);

// (1 / vol B_n) sum_{x in B_n} w_x exp(-2 pi i k.x) for each box.
std::vector<Complex> fourier_bohr_estimate(const WeightedComb& comb, const Vector& k,
                                           const BoxSequence& boxes);

struct InjectivityReport {
  double min_abs_rho = 0.0;
  IntVector argmin;         // dual coordinates attaining the minimum
  std::int64_t dual_points = 0;
  PeriodScan period;
  bool verdict = false;
  std::string message;
};

// Scans dual points with |z|_inf <= dual_search_radius (z = 0 included).
InjectivityReport injectivity_report(const SchemeSpec& scheme, const WeightFunction& f,
                                     const Decoration& decoration,
                                     std::int64_t dual_search_radius);

}  // namespace cutproj

#endif  // CUTPROJ_SPECTRAL_HPP_
