// JSON run configuration for the command-line tool. Every object is parsed
// strictly: unknown keys are errors, and each error names the dotted path of
// the field at fault.

#ifndef CUTPROJ_CONFIG_HPP_
#define CUTPROJ_CONFIG_HPP_

#include <optional>
#include <string>
#include <vector>

#include "cutproj/comb.hpp"
#include "cutproj/scheme.hpp"
#include "cutproj/spectral.hpp"
#include "cutproj/weights.hpp"

namespace cutproj {

struct Thresholds {
  double eps_trunc = 1e-12;
  double intensity_floor = 1e-8;
  std::optional<double> internal_cut;   // peaks; derived from the floor if absent
  std::optional<double> autocorr_cut;   // autocorrelation; derived if absent
  double match_tol = 1e-6;
  double almost_period_eps = 1e-3;
};

struct SpectralParams {
  Box k_range;
  Box displacement_range;
  std::optional<Vector> xi_s;  // hull element lift; the plain comb if absent
  std::optional<Vector> xi_k;
  std::vector<Vector> fourier_bohr_k;  // empty: use the strongest peaks
  double kernel_scale = 5.0;
  Box almost_period_box;
  std::int64_t dual_search_radius = 10;
  int top_autocorr = 15;
  int top_peaks = 10;
};

struct CompareTolerances {
  double density = 0.01;
  double autocorr = 0.02;
  double diffraction = 0.03;
};

struct OutputParams {
  std::string directory = "out";
  bool csv = true;
  bool json = true;
};

struct RunConfig {
  int d = 1;
  int m = 1;
  Matrix basis;  // columns generate the lattice
  ValidationOptions validation;
  WeightFunction weight = WeightFunction::gaussian(1);
  std::vector<DecorationAtom> decoration;  // raw offsets, reduced once the scheme exists
  BoxSequence boxes;
  Thresholds thresholds;
  SpectralParams spectral;
  CompareTolerances compare;
  OutputParams output;
};

// Throws IoError if the file cannot be read, ParseError for malformed JSON
// (with line and column) and ValidationError with a field path otherwise.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& source = "<string>");

}  // namespace cutproj

#endif  // CUTPROJ_CONFIG_HPP_
