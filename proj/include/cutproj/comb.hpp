// Finite pieces of weighted Dirac combs: the comb nu_f itself, hull elements
// indexed by torus points, and combs of decorated lattices delta_L * rho_0.

#ifndef CUTPROJ_COMB_HPP_
#define CUTPROJ_COMB_HPP_

#include <vector>

#include "cutproj/lattice.hpp"
#include "cutproj/scheme.hpp"
#include "cutproj/weights.hpp"

namespace cutproj {

struct DecorationAtom {
  Vector s;   // physical offset
  Vector k;   // internal offset
  Complex w;
};

// Finite atomic rho_0; offsets are stored reduced to the fundamental cell.
class Decoration {
public:
  // The single atom (0, 0, 1), i.e. rho = delta of the lattice.
  static Decoration unit(const SchemeSpec& scheme);
  // Reduces every (s_j, k_j) modulo the lattice. Throws InvalidArgument on an
  // empty list or mismatched dimensions.
  static Decoration make(const SchemeSpec& scheme, std::vector<DecorationAtom> atoms);

  const std::vector<DecorationAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  Complex total_weight() const;
  double abs_weight() const;
  Decoration scaled(Complex c) const;

private:
  std::vector<DecorationAtom> atoms_;
};

struct Atom {
  Vector position;
  Complex weight;
};

struct WeightedComb {
  std::vector<Atom> atoms;   // sorted lexicographically by position
  Box physical_box;
  double internal_radius = 0.0;
  double trunc_eps = 0.0;    // certified tail bound per unit physical volume
  TorusPoint origin;
};

// Realizes the comb for the lift (s, k): atoms l + s_j + s with weight
// w_j f(l* + k_j + k) over lattice points with the position in `box` and
// |l* + k_j + k| <= radius. Positions closer than 1e-9 are merged, atoms whose
// weight is exactly zero are dropped.
WeightedComb comb_with_radius(const SchemeSpec& scheme, const WeightFunction& f,
                              const Decoration& decoration, const Vector& s, const Vector& k,
                              const Box& box, double radius);

// Sharp windows are accepted here (point counting); smooth weights must pass
// the admissibility check.
WeightedComb generate_comb(const SchemeSpec& scheme, const WeightFunction& f,
                           const Decoration& decoration, const Box& box, double eps_trunc);

// Uses the canonical representative of xi, so every lift gives the same comb.
// Throws NonSmoothWeight for sharp windows.
WeightedComb hull_element(const SchemeSpec& scheme, const WeightFunction& f,
                          const Decoration& decoration, const TorusPoint& xi,
                          const Box& box, double eps_trunc);

WeightedComb translate(const WeightedComb& comb, const Vector& t);

// Sum of |weight| over the atoms inside `region`.
double mass_in(const WeightedComb& comb, const Box& region);

// A priori bound on the total |weight| of any comb realization inside a box
// of the given volume: 2 * abs density * volume plus the mass one unit cell can
// carry.
double comb_mass_bound(const SchemeSpec& scheme, const WeightFunction& f,
                       const Decoration& decoration, double volume, double radius);

}  // namespace cutproj

#endif  // CUTPROJ_COMB_HPP_
