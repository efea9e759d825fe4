// Shared fixtures for the unit tests.

#ifndef CUTPROJ_TESTS_SUPPORT_HPP_
#define CUTPROJ_TESTS_SUPPORT_HPP_

#include <cmath>
#include <random>

#include "cutproj/lattice.hpp"
#include "cutproj/scheme.hpp"

namespace testing {

inline const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
inline const double pi = 3.14159265358979323846;

// Columns (1, 1) and (phi, -1/phi).
inline cutproj::Matrix golden_matrix() {
  cutproj::Matrix b(2, 2);
  b << 1.0, phi, 1.0, -1.0 / phi;
  return b;
}

inline const cutproj::SchemeSpec& golden() {
  static const cutproj::SchemeSpec s =
      cutproj::validate_scheme(1, 1, cutproj::make_basis(golden_matrix()));
  return s;
}

inline cutproj::Vector vec(std::initializer_list<double> xs) {
  cutproj::Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs)
    v[i++] = x;
  return v;
}

inline cutproj::IntVector ivec(std::initializer_list<std::int64_t> xs) {
  cutproj::IntVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs)
    v[i++] = x;
  return v;
}

inline cutproj::Box interval(double lo, double hi) { return cutproj::Box(vec({lo}), vec({hi})); }

}  // namespace testing

#endif  // CUTPROJ_TESTS_SUPPORT_HPP_
