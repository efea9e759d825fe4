// Cut-and-project scheme (R^d, R^m, lattice): projections, star map, torus
// points, and finite-radius certificates for the two structural axioms.

#ifndef CUTPROJ_SCHEME_HPP_
#define CUTPROJ_SCHEME_HPP_

#include <cstdint>

#include "cutproj/lattice.hpp"

namespace cutproj {

// Finite checks, not proofs: injectivity is verified for |z|_inf <= search_radius
// and denseness is an epsilon-net coverage test.
struct ValidationCertificate {
  bool injectivity_ok = false;
  std::int64_t search_radius = 0;
  bool denseness_ok = false;
  double coverage_eps = 0.0;
  std::int64_t cells_total = 0;
  std::int64_t cells_hit = 0;
  // Set when the caller asked to proceed although the coverage test failed.
  bool denseness_overridden = false;
};

class SchemeSpec {
public:
  SchemeSpec(int d, int m, LatticeBasis basis, ValidationCertificate validation);

  int d() const { return d_; }
  int m() const { return m_; }
  int dim() const { return d_ + m_; }
  const LatticeBasis& basis() const { return basis_; }
  const LatticeBasis& dual() const { return dual_; }
  double covolume() const { return basis_.det_abs(); }
  const ValidationCertificate& validation() const { return validation_; }

  Vector physical(const Vector& x) const { return x.head(d_); }
  Vector internal(const Vector& x) const { return x.tail(m_); }
  Vector join(const Vector& s, const Vector& k) const;

private:
  int d_;
  int m_;
  LatticeBasis basis_;
  LatticeBasis dual_;
  ValidationCertificate validation_;
};

struct StarImage {
  Vector l;       // physical part of B z
  Vector l_star;  // internal part of B z
};

StarImage star_map(const SchemeSpec& scheme, const IntVector& z);

struct ValidationOptions {
  std::int64_t search_radius = 100;
  double coverage_eps = 0.05;
  bool assume_dense = false;
};

// Throws InjectivityFailed (with the offending z as witness) if a nonzero
// z with |z|_inf <= search_radius has |physical part| < 1e-9. Denseness
// failure is reported in the certificate only.
SchemeSpec validate_scheme(int d, int m, const LatticeBasis& basis,
                           const ValidationOptions& options = {});

// Point [s, k] of the torus (R^d x R^m) / lattice. `fractional` holds the
// canonical basis coordinates; `lift` keeps the representative it was built from.
struct TorusPoint {
  Vector fractional;
  Vector lift;
};

TorusPoint torus_point(const SchemeSpec& scheme, const Vector& s, const Vector& k);
TorusPoint iota(const SchemeSpec& scheme, const Vector& t);
TorusPoint kappa(const SchemeSpec& scheme, const Vector& h);
TorusPoint torus_add(const SchemeSpec& scheme, const TorusPoint& a, const TorusPoint& b);

}  // namespace cutproj

#endif  // CUTPROJ_SCHEME_HPP_
