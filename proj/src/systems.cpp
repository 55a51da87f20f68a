#include "reachlp/systems.hpp"

#include <string>

#include "reachlp/errors.hpp"

namespace reachlp {

VectorField bicycle_field(double lf, double lr) {
  return make_field(BicycleField{lf, lr}, "bicycle");
}

VectorField vanderpol_field(double mu) {
  if (mu == 0.0) throw DomainError("vanderpol: mu must be nonzero");
  return make_field(VanDerPolField{mu}, "vanderpol");
}

VectorField single_integrator_field() {
  return make_field(SingleIntegratorField{}, "integrator");
}

IntervalVector inclusion(const VectorField& f, const IntervalVector& x,
                         const Vec& u, const IntervalVector& w) {
  if (x.size() != f.state_dim || u.size() != f.input_dim ||
      w.size() != f.dist_dim)
    throw DimensionMismatch("inclusion: argument sizes do not match field");
  IntervalVector ui;
  ui.reserve(u.size());
  for (double v : u) ui.emplace_back(v);
  IntervalVector out(f.state_dim);
  f.box(x, ui, w, out);
  return out;
}

}  // namespace reachlp
