#include "cutproj/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cutproj/error.hpp"

namespace cutproj {

SchemeSpec::SchemeSpec(int d, int m, LatticeBasis basis, ValidationCertificate validation)
  : d_(d), m_(m), basis_(std::move(basis)), dual_(dual_basis(basis_)),
    validation_(validation) {
  if (d_ <= 0 || m_ <= 0)
    fail(ErrorKind::InvalidArgument, "physical and internal dimensions must be positive");
  if (d_ + m_ != basis_.dim())
    fail(ErrorKind::InvalidArgument, "d + m = " + std::to_string(d_ + m_) +
                                         " does not match basis dimension " +
                                         std::to_string(basis_.dim()));
}

Vector SchemeSpec::join(const Vector& s, const Vector& k) const {
  if (s.size() != d_ || k.size() != m_)
    fail(ErrorKind::InvalidArgument, "physical/internal vector has wrong dimension");
  Vector x(d_ + m_);
  x << s, k;
  return x;
}

StarImage star_map(const SchemeSpec& scheme, const IntVector& z) {
  if (z.size() != scheme.dim())
    fail(ErrorKind::InvalidArgument, "integer vector has wrong dimension");
  Vector x = scheme.basis().point(z);
  return {scheme.physical(x), scheme.internal(x)};
}

namespace {

// Flip the sign so that the first nonzero coordinate is positive.
IntVector canonical_sign(IntVector z) {
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (z[i] != 0) {
      if (z[i] < 0)
        z = -z;
      break;
    }
  }
  return z;
}

bool witness_less(const IntVector& a, const IntVector& b) {
  std::int64_t na = a.cwiseAbs().maxCoeff(), nb = b.cwiseAbs().maxCoeff();
  if (na != nb)
    return na < nb;
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

}  // namespace

SchemeSpec validate_scheme(int d, int m, const LatticeBasis& basis,
                           const ValidationOptions& options) {
  if (options.search_radius < 10)
    fail(ErrorKind::InvalidArgument, "search_radius must be at least 10");
  if (!(options.coverage_eps > 0.0))
    fail(ErrorKind::InvalidArgument, "coverage_eps must be positive");
  if (d <= 0 || m <= 0 || d + m != basis.dim())
    fail(ErrorKind::InvalidArgument, "d + m must equal the basis dimension");

  const double r = static_cast<double>(options.search_radius);
  ValidationCertificate cert;
  cert.search_radius = options.search_radius;
  cert.coverage_eps = options.coverage_eps;

  // Injectivity: lattice points in the slab {|physical| < 1e-9} whose integer
  // coordinates lie within the search radius.
  {
    constexpr double zero_tol = 1e-9;
    const Matrix& b = basis.matrix();
    Vector lo(d + m), hi(d + m);
    for (int i = 0; i < d + m; ++i) {
      if (i < d) {
        lo[i] = -zero_tol;
        hi[i] = zero_tol;
      } else {
        double reach = r * b.row(i).cwiseAbs().sum();
        lo[i] = -reach;
        hi[i] = reach;
      }
    }
    EnumerateOptions opts;
    opts.coord_bound = options.search_radius;
    opts.tie_tol = 0.0;
    bool found = false;
    IntVector witness;
    for_each_in_box(
        basis, Box(lo, hi),
        [&](const IntVector& z, const Vector& x) {
          if (z.isZero() || x.head(d).norm() >= zero_tol)
            return;
          IntVector w = canonical_sign(z);
          if (!found || witness_less(w, witness))
            witness = w;
          found = true;
        },
        opts);
    if (found) {
      std::vector<std::int64_t> w(witness.data(), witness.data() + witness.size());
      throw Error(ErrorKind::InjectivityFailed,
                  "lattice point with zero physical part found within search radius")
          .with_witness(w);
    }
    cert.injectivity_ok = true;
  }

  // Denseness heuristic: star images of lattice points with physical part in
  // [-r, r]^d that land in the reference cube [-1/2, 1/2]^m must hit every
  // cell of an eps-grid of that cube.
  {
    const int cells_per_axis = static_cast<int>(std::ceil(1.0 / options.coverage_eps));
    std::int64_t total = 1;
    for (int i = 0; i < m; ++i)
      total *= cells_per_axis;
    std::vector<char> hit(static_cast<std::size_t>(total), 0);
    std::int64_t n_hit = 0;
    Box region = Box::cube(d, r).product(Box::cube(m, 0.5));
    for_each_in_box(basis, region, [&](const IntVector&, const Vector& x) {
      std::int64_t index = 0;
      for (int i = 0; i < m; ++i) {
        double u = x[d + i] + 0.5;
        int c = std::clamp(static_cast<int>(std::floor(u / options.coverage_eps)), 0,
                           cells_per_axis - 1);
        index = index * cells_per_axis + c;
      }
      if (!hit[static_cast<std::size_t>(index)]) {
        hit[static_cast<std::size_t>(index)] = 1;
        ++n_hit;
      }
    });
    cert.cells_total = total;
    cert.cells_hit = n_hit;
    cert.denseness_ok = n_hit == total;
    cert.denseness_overridden = !cert.denseness_ok && options.assume_dense;
  }

  return SchemeSpec(d, m, basis, cert);
}

TorusPoint torus_point(const SchemeSpec& scheme, const Vector& s, const Vector& k) {
  Vector lift = scheme.join(s, k);
  return {reduce_to_fundamental(scheme.basis(), lift).fractional, lift};
}

TorusPoint iota(const SchemeSpec& scheme, const Vector& t) {
  return torus_point(scheme, t, Vector::Zero(scheme.m()));
}

TorusPoint kappa(const SchemeSpec& scheme, const Vector& h) {
  return torus_point(scheme, Vector::Zero(scheme.d()), h);
}

TorusPoint torus_add(const SchemeSpec& scheme, const TorusPoint& a, const TorusPoint& b) {
  Vector lift = a.lift + b.lift;
  return {reduce_to_fundamental(scheme.basis(), lift).fractional, lift};
}

}  // namespace cutproj
