// CSV export and import of combs, peak lists and autocorrelation tables.
// Reals are written with 17 significant digits, so a file read back gives the
// same doubles.

#ifndef CUTPROJ_IO_HPP_
#define CUTPROJ_IO_HPP_

#include <string>
#include <vector>

#include "cutproj/comb.hpp"
#include "cutproj/spectral.hpp"

namespace cutproj {

// position_1..position_d,weight_re,weight_im
void write_comb_csv(const std::string& path, const WeightedComb& comb);
std::vector<Atom> read_comb_csv(const std::string& path);

// k_1..k_d,z_1..z_{d+m},eta_1..eta_m,c_re,c_im,intensity
void write_peaks_csv(const std::string& path, const PeakList& peaks, int d, int m);
std::vector<Peak> read_peaks_csv(const std::string& path);

// l_1..l_d,z_1..z_{d+m},eta_re,eta_im (z left blank when unknown)
void write_autocorr_csv(const std::string& path, const AutocorrelationTable& table, int d,
                        int n);
std::vector<AutocorrEntry> read_autocorr_csv(const std::string& path);

// 17 significant digits, shortest exponent form.
std::string format_real(double x);

}  // namespace cutproj

#endif  // CUTPROJ_IO_HPP_
