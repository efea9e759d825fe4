#include "cutproj/comb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cutproj/error.hpp"

namespace cutproj {

// ---------------------------------------------------------------------------
// Decoration

Decoration Decoration::unit(const SchemeSpec& scheme) {
  return make(scheme, {{Vector::Zero(scheme.d()), Vector::Zero(scheme.m()), 1.0}});
}

Decoration Decoration::make(const SchemeSpec& scheme, std::vector<DecorationAtom> atoms) {
  if (atoms.empty())
    fail(ErrorKind::InvalidArgument, "decoration needs at least one atom");
  Decoration dec;
  for (auto& a : atoms) {
    if (a.s.size() != scheme.d() || a.k.size() != scheme.m())
      fail(ErrorKind::InvalidArgument, "decoration atom has wrong dimensions");
    if (!std::isfinite(a.w.real()) || !std::isfinite(a.w.imag()))
      fail(ErrorKind::InvalidArgument, "decoration weight must be finite");
    Vector rep = reduce_to_fundamental(scheme.basis(), scheme.join(a.s, a.k)).rep;
    dec.atoms_.push_back({scheme.physical(rep), scheme.internal(rep), a.w});
  }
  return dec;
}

Complex Decoration::total_weight() const {
  Complex t = 0.0;
  for (const auto& a : atoms_)
    t += a.w;
  return t;
}

double Decoration::abs_weight() const {
  double t = 0.0;
  for (const auto& a : atoms_)
    t += std::abs(a.w);
  return t;
}

Decoration Decoration::scaled(Complex c) const {
  Decoration dec = *this;
  for (auto& a : dec.atoms_)
    a.w *= c;
  return dec;
}

// ---------------------------------------------------------------------------
// Realization

namespace {

constexpr double merge_tol = 1e-9;

bool position_less(const Atom& a, const Atom& b) {
  for (Eigen::Index i = 0; i < a.position.size(); ++i)
    if (a.position[i] != b.position[i])
      return a.position[i] < b.position[i];
  if (a.weight.real() != b.weight.real())
    return a.weight.real() < b.weight.real();
  return a.weight.imag() < b.weight.imag();
}

std::vector<Atom> merge_atoms(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(), position_less);
  std::vector<char> gone(atoms.size(), 0);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (gone[i])
      continue;
    for (std::size_t j = i + 1;
         j < atoms.size() && atoms[j].position[0] - atoms[i].position[0] <= merge_tol; ++j) {
      if (!gone[j] &&
          (atoms[j].position - atoms[i].position).cwiseAbs().maxCoeff() <= merge_tol) {
        atoms[i].weight += atoms[j].weight;
        gone[j] = 1;
      }
    }
  }
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (!gone[i] && atoms[i].weight != 0.0)
      out.push_back(std::move(atoms[i]));
  return out;
}

double density_scale(const SchemeSpec& scheme, const Decoration& decoration) {
  return decoration.abs_weight() / scheme.covolume();
}

}  // namespace

WeightedComb comb_with_radius(const SchemeSpec& scheme, const WeightFunction& f,
                              const Decoration& decoration, const Vector& s, const Vector& k,
                              const Box& box, double radius) {
  const int d = scheme.d(), m = scheme.m();
  if (box.dim() != d)
    fail(ErrorKind::InvalidArgument, "physical box has dimension " + std::to_string(box.dim()) +
                                         ", expected " + std::to_string(d));
  if (f.dim() != m)
    fail(ErrorKind::InvalidArgument, "weight dimension does not match internal dimension");
  if (!(radius >= 0.0) || !std::isfinite(radius))
    fail(ErrorKind::InvalidArgument, "internal radius must be finite and non-negative");

  const double ball_tol = 1e-12 * std::max(1.0, radius);
  std::vector<Atom> atoms;
  for (const auto& a : decoration.atoms()) {
    if (a.w == 0.0)
      continue;
    Vector shift_s = a.s + s;
    Vector shift_k = a.k + k;
    Box region = box.translated(-shift_s).product(Box::cube(m, radius).translated(-shift_k));
    for_each_in_box(scheme.basis(), region, [&](const IntVector&, const Vector& x) {
      Vector h = x.tail(m) + shift_k;
      if (h.norm() > radius + ball_tol)
        return;
      Vector pos = x.head(d) + shift_s;
      if (!box.contains(pos))
        return;
      atoms.push_back({pos, a.w * f(h)});
    });
  }

  WeightedComb comb;
  comb.atoms = merge_atoms(std::move(atoms));
  comb.physical_box = box;
  comb.internal_radius = radius;
  comb.origin = torus_point(scheme, s, k);
  return comb;
}

WeightedComb generate_comb(const SchemeSpec& scheme, const WeightFunction& f,
                           const Decoration& decoration, const Box& box, double eps_trunc) {
  if (!(eps_trunc > 0.0))
    fail(ErrorKind::InvalidArgument, "eps_trunc must be positive");
  double radius, bound = 0.0;
  if (f.non_smooth()) {
    radius = *f.support_radius();
  } else {
    admissibility_certificate(f, scheme);
    double ds = density_scale(scheme, decoration);
    radius = truncation_radius(f, eps_trunc, ds);
    bound = f.support_radius() ? 0.0 : truncation_tail_bound(f, radius, ds);
  }
  WeightedComb comb = comb_with_radius(scheme, f, decoration, Vector::Zero(scheme.d()),
                                       Vector::Zero(scheme.m()), box, radius);
  comb.trunc_eps = bound;
  return comb;
}

WeightedComb hull_element(const SchemeSpec& scheme, const WeightFunction& f,
                          const Decoration& decoration, const TorusPoint& xi,
                          const Box& box, double eps_trunc) {
  if (f.non_smooth())
    fail(ErrorKind::NonSmoothWeight, "hull elements need a continuous weight; got " +
                                         f.describe());
  if (!(eps_trunc > 0.0))
    fail(ErrorKind::InvalidArgument, "eps_trunc must be positive");
  if (xi.fractional.size() != scheme.dim())
    fail(ErrorKind::InvalidArgument, "torus point has wrong dimension");
  admissibility_certificate(f, scheme);
  double ds = density_scale(scheme, decoration);
  double radius = truncation_radius(f, eps_trunc, ds);
  Vector rep = scheme.basis().matrix() * xi.fractional;
  WeightedComb comb = comb_with_radius(scheme, f, decoration, scheme.physical(rep),
                                       scheme.internal(rep), box, radius);
  comb.trunc_eps = f.support_radius() ? 0.0 : truncation_tail_bound(f, radius, ds);
  comb.origin = xi;
  return comb;
}

WeightedComb translate(const WeightedComb& comb, const Vector& t) {
  if (t.size() != comb.physical_box.dim())
    fail(ErrorKind::InvalidArgument, "translation has wrong dimension");
  WeightedComb out = comb;
  for (auto& a : out.atoms)
    a.position += t;
  out.physical_box = comb.physical_box.translated(t);
  return out;
}

double mass_in(const WeightedComb& comb, const Box& region) {
  double total = 0.0;
  for (const auto& a : comb.atoms)
    if (region.contains(a.position, 0.0))
      total += std::abs(a.weight);
  return total;
}

double comb_mass_bound(const SchemeSpec& scheme, const WeightFunction& f,
                       const Decoration& decoration, double volume, double radius) {
  const int n = scheme.dim(), m = scheme.m();
  double abs_density = decoration.abs_weight() / scheme.covolume() * std::abs(integral(f));

  // Any unit cube of R^{d+m} holds at most as many lattice points as [-1, 1]^{d+m}.
  double per_cell = static_cast<double>(enumerate_in_box(scheme.basis(), Box::cube(n, 1.0)).size());

  // Sum of sup |f| over the unit cells z + [0,1]^m meeting the truncation ball,
  // grouped by the distance of the cell to the origin.
  const double vm = std::pow(std::numbers::pi, 0.5 * m) / std::tgamma(0.5 * m + 1.0);
  const double diag = std::sqrt(static_cast<double>(m));
  double cells = 0.0;
  for (double rho = 0.0; rho <= radius; rho += 1.0) {
    double count = vm * (std::pow(rho + 1.0 + diag, m) - std::pow(rho, m));
    cells += count * f.envelope(rho);
  }
  return 2.0 * abs_density * volume + decoration.abs_weight() * per_cell * cells;
}

}  // namespace cutproj
