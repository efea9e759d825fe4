#include "cutproj/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cutproj/error.hpp"

namespace cutproj {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SingularBasis: return "SingularBasis";
    case ErrorKind::CapacityExceeded: return "CapacityExceeded";
    case ErrorKind::InjectivityFailed: return "InjectivityFailed";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::NonSmoothWeight: return "NonSmoothWeight";
    case ErrorKind::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorKind::NoCandidatesInRange: return "NoCandidatesInRange";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Box

Box::Box(Vector lo, Vector hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size())
    fail(ErrorKind::InvalidArgument, "box bounds have different dimensions");
  for (Eigen::Index i = 0; i < lo_.size(); ++i) {
    if (!std::isfinite(lo_[i]) || !std::isfinite(hi_[i]))
      fail(ErrorKind::InvalidArgument, "box bounds must be finite");
    if (lo_[i] > hi_[i])
      fail(ErrorKind::InvalidArgument,
           "box has hi < lo on axis " + std::to_string(i));
  }
}

Box Box::cube(int dim, double half_side) {
  return Box(Vector::Constant(dim, -half_side), Vector::Constant(dim, half_side));
}

double Box::volume() const {
  double v = 1.0;
  for (Eigen::Index i = 0; i < lo_.size(); ++i)
    v *= hi_[i] - lo_[i];
  return v;
}

bool Box::contains(const Vector& x, double tie_tol) const {
  for (Eigen::Index i = 0; i < lo_.size(); ++i) {
    double tl = tie_tol * std::max(1.0, std::abs(lo_[i]));
    double th = tie_tol * std::max(1.0, std::abs(hi_[i]));
    if (x[i] < lo_[i] - tl || x[i] > hi_[i] + th)
      return false;
  }
  return true;
}

bool Box::contains(const Box& other) const {
  return (other.lo_.array() >= lo_.array()).all() &&
         (other.hi_.array() <= hi_.array()).all();
}

Box Box::product(const Box& other) const {
  Vector lo(dim() + other.dim()), hi(dim() + other.dim());
  lo << lo_, other.lo_;
  hi << hi_, other.hi_;
  return Box(lo, hi);
}

// ---------------------------------------------------------------------------
// LatticeBasis

LatticeBasis::LatticeBasis(const Matrix& columns) : b_(columns) {
  if (b_.rows() != b_.cols() || b_.rows() == 0)
    fail(ErrorKind::InvalidArgument, "basis matrix must be square and non-empty");
  if (b_.rows() > max_lattice_dim)
    fail(ErrorKind::InvalidArgument, "lattice dimension exceeds 8");
  if (!b_.allFinite())
    fail(ErrorKind::InvalidArgument, "basis entries must be finite");
  Eigen::FullPivLU<Matrix> lu(b_);
  double det = lu.determinant();
  double scale = 1.0;
  for (Eigen::Index j = 0; j < b_.cols(); ++j)
    scale *= b_.col(j).norm();
  if (!(std::abs(det) >= 1e-10 * scale) || scale == 0.0)
    fail(ErrorKind::SingularBasis, "basis is singular (|det| = " +
                                       std::to_string(std::abs(det)) + ")");
  det_abs_ = std::abs(det);
  inv_ = lu.inverse();
}

LatticeBasis make_basis(std::span<const Vector> columns) {
  if (columns.empty())
    fail(ErrorKind::InvalidArgument, "basis needs at least one column");
  Eigen::Index n = columns.front().size();
  Matrix b(n, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != n)
      fail(ErrorKind::InvalidArgument, "basis columns have different lengths");
    b.col(static_cast<Eigen::Index>(j)) = columns[j];
  }
  return LatticeBasis(b);
}

LatticeBasis make_basis(const Matrix& columns) { return LatticeBasis(columns); }

LatticeBasis dual_basis(const LatticeBasis& basis) {
  return LatticeBasis(basis.inverse().transpose());
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

struct Bounds {
  std::int64_t lo;
  std::int64_t hi;
  bool empty() const { return lo > hi; }
};

std::int64_t to_index(double v, bool up) {
  constexpr double limit = 9.0e15;
  if (!(std::abs(v) < limit))
    fail(ErrorKind::CapacityExceeded, "enumeration range exceeds integer limits");
  return static_cast<std::int64_t>(up ? std::ceil(v) : std::floor(v));
}

}  // namespace

void for_each_in_box(const LatticeBasis& basis, const Box& region,
                     const std::function<void(const IntVector&, const Vector&)>& visit,
                     const EnumerateOptions& options) {
  const int n = basis.dim();
  if (region.dim() != n)
    fail(ErrorKind::InvalidArgument, "box dimension does not match lattice dimension");
  const Matrix& b = basis.matrix();
  const Matrix& inv = basis.inverse();
  constexpr double slack = 1e-9;

  // Integer bounding box of B^{-1}(region).
  std::vector<Bounds> global(n);
  for (int i = 0; i < n; ++i) {
    double mn = 0.0, mx = 0.0;
    for (int j = 0; j < n; ++j) {
      double a = inv(i, j) * region.lo()[j];
      double c = inv(i, j) * region.hi()[j];
      mn += std::min(a, c);
      mx += std::max(a, c);
    }
    double pad = slack * std::max(1.0, std::max(std::abs(mn), std::abs(mx)));
    global[i] = {to_index(mn - pad, true), to_index(mx + pad, false)};
    if (options.coord_bound) {
      global[i].lo = std::max(global[i].lo, -*options.coord_bound);
      global[i].hi = std::min(global[i].hi, *options.coord_bound);
    }
    if (global[i].empty())
      return;
  }

  // rest_min/rest_max[k][i]: range of sum_{j>k} B_ij z_j over the global box.
  std::vector<Vector> rest_min(n, Vector::Zero(n)), rest_max(n, Vector::Zero(n));
  for (int k = n - 2; k >= 0; --k) {
    for (int i = 0; i < n; ++i) {
      double a = b(i, k + 1) * static_cast<double>(global[k + 1].lo);
      double c = b(i, k + 1) * static_cast<double>(global[k + 1].hi);
      rest_min[k][i] = rest_min[k + 1][i] + std::min(a, c);
      rest_max[k][i] = rest_max[k + 1][i] + std::max(a, c);
    }
  }

  Vector tol(n);
  for (int i = 0; i < n; ++i)
    tol[i] = options.tie_tol *
             std::max({1.0, std::abs(region.lo()[i]), std::abs(region.hi()[i])});

  IntVector z(n);
  std::vector<Vector> partial(n + 1, Vector::Zero(n));
  std::int64_t examined = 0;

  std::function<void(int)> descend = [&](int k) {
    const Vector& p = partial[k];
    double lower = static_cast<double>(global[k].lo);
    double upper = static_cast<double>(global[k].hi);
    for (int i = 0; i < n && lower <= upper; ++i) {
      double coef = b(i, k);
      double a = region.lo()[i] - tol[i] - p[i] - rest_max[k][i];
      double c = region.hi()[i] + tol[i] - p[i] - rest_min[k][i];
      double scale = std::max({1.0, std::abs(a), std::abs(c)}) * 1e-12;
      a -= scale;
      c += scale;
      if (coef == 0.0) {
        if (a > 0.0 || c < 0.0)
          return;
        continue;
      }
      double t0 = a / coef, t1 = c / coef;
      if (coef < 0.0)
        std::swap(t0, t1);
      lower = std::max(lower, t0);
      upper = std::min(upper, t1);
    }
    if (lower > upper)
      return;
    std::int64_t zlo = std::max(global[k].lo, to_index(lower - slack, true));
    std::int64_t zhi = std::min(global[k].hi, to_index(upper + slack, false));
    for (std::int64_t v = zlo; v <= zhi; ++v) {
      if (++examined > options.max_candidates)
        fail(ErrorKind::CapacityExceeded,
             "lattice enumeration exceeded " + std::to_string(options.max_candidates) +
                 " candidates");
      z[k] = v;
      partial[k + 1] = p + b.col(k) * static_cast<double>(v);
      if (k + 1 < n) {
        descend(k + 1);
      } else {
        Vector x = b * z.cast<double>();
        if (region.contains(x, options.tie_tol))
          visit(z, x);
      }
    }
  };
  descend(0);
}

std::vector<LatticePoint> enumerate_in_box(const LatticeBasis& basis, const Box& region,
                                           const EnumerateOptions& options) {
  std::vector<LatticePoint> out;
  for_each_in_box(
      basis, region,
      [&](const IntVector& z, const Vector& x) { out.push_back({z, x}); }, options);
  return out;
}

// ---------------------------------------------------------------------------
// Reduction

Reduction reduce_to_fundamental(const LatticeBasis& basis, const Vector& v) {
  if (v.size() != basis.dim())
    fail(ErrorKind::InvalidArgument, "vector dimension does not match lattice dimension");
  Vector c = basis.coords(v);
  Vector frac(c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    double r = std::round(c[i]);
    double f;
    if (std::abs(c[i] - r) <= 1e-11 * std::max(1.0, std::abs(c[i])))
      f = 0.0;
    else
      f = c[i] - std::floor(c[i]);
    if (f >= 1.0)
      f = 0.0;
    frac[i] = f;
  }
  return {frac, basis.matrix() * frac};
}

double torus_distance(const Vector& a, const Vector& b) {
  double dist = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double d = std::abs(a[i] - b[i]);
    d -= std::floor(d);
    dist = std::max(dist, std::min(d, 1.0 - d));
  }
  return dist;
}

}  // namespace cutproj
