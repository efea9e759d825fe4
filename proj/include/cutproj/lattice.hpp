// Linear algebra for a full-rank lattice in R^n (n = d + m <= 8):
// covolume, dual basis, enumeration of lattice points in axis-aligned boxes
// and reduction modulo the lattice.

#ifndef CUTPROJ_LATTICE_HPP_
#define CUTPROJ_LATTICE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace cutproj {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

inline constexpr int max_lattice_dim = 8;

// Closed axis-aligned box [lo_1, hi_1] x ... x [lo_n, hi_n].
class Box {
public:
  Box() = default;
  // Throws InvalidArgument unless lo and hi have equal size and lo <= hi.
  Box(Vector lo, Vector hi);
  static Box cube(int dim, double half_side);

  int dim() const { return static_cast<int>(lo_.size()); }
  const Vector& lo() const { return lo_; }
  const Vector& hi() const { return hi_; }
  double volume() const;
  Vector center() const { return 0.5 * (lo_ + hi_); }
  // Membership with an absolute tie tolerance scaled by max(1, |bound|).
  bool contains(const Vector& x, double tie_tol = 1e-12) const;
  bool contains(const Box& other) const;
  Box translated(const Vector& t) const { return Box(lo_ + t, hi_ + t); }
  // Cartesian product with another box (this box's axes come first).
  Box product(const Box& other) const;

private:
  Vector lo_;
  Vector hi_;
};

// Invertible square matrix whose columns generate the lattice.
class LatticeBasis {
public:
  explicit LatticeBasis(const Matrix& columns);

  int dim() const { return static_cast<int>(b_.rows()); }
  const Matrix& matrix() const { return b_; }
  const Matrix& inverse() const { return inv_; }
  double det_abs() const { return det_abs_; }
  Vector column(int j) const { return b_.col(j); }

  Vector point(const IntVector& z) const { return b_ * z.cast<double>(); }
  // Coordinates of v with respect to the basis, B^{-1} v.
  Vector coords(const Vector& v) const { return inv_ * v; }

private:
  Matrix b_;
  Matrix inv_;
  double det_abs_ = 0.0;
};

// Throws SingularBasis if |det| < 1e-10 * (product of column norms).
LatticeBasis make_basis(std::span<const Vector> columns);
LatticeBasis make_basis(const Matrix& columns);

// Columns of (B^{-1})^T: <d_i, b_j> = delta_ij.
LatticeBasis dual_basis(const LatticeBasis& basis);

struct LatticePoint {
  IntVector int_coords;
  Vector point;
};

struct EnumerateOptions {
  // Number of candidate integer vectors examined before giving up.
  std::int64_t max_candidates = 100'000'000;
  double tie_tol = 1e-12;
  // Optional bound |z|_inf <= coord_bound on the integer coordinates.
  std::optional<std::int64_t> coord_bound;
};

// Calls visit(z, B z) for every lattice point in the closed box. Candidates
// come from the integer bounding box of B^{-1}(region), narrowed coordinate by
// coordinate through interval propagation of the box constraints; each one is
// then tested for membership. Throws CapacityExceeded past the candidate cap.
void for_each_in_box(const LatticeBasis& basis, const Box& region,
                     const std::function<void(const IntVector&, const Vector&)>& visit,
                     const EnumerateOptions& options = {});

std::vector<LatticePoint> enumerate_in_box(const LatticeBasis& basis, const Box& region,
                                           const EnumerateOptions& options = {});

struct Reduction {
  Vector fractional;  // frac(B^{-1} v), each entry in [0, 1)
  Vector rep;         // B * fractional
};

Reduction reduce_to_fundamental(const LatticeBasis& basis, const Vector& v);

// Distance between two fractional coordinate vectors on the unit torus
// (max over axes of the circular distance).
double torus_distance(const Vector& a, const Vector& b);

}  // namespace cutproj

#endif  // CUTPROJ_LATTICE_HPP_
