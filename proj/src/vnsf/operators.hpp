#pragma once

// Second-order collocated difference operators.
//
// Ghost cells for PaperBC grids are filled by reflection: scalars with a
// homogeneous Neumann condition use an even mirror, velocities (no-slip) an odd
// mirror. The composite operators are built so that the discrete
// summation-by-parts identity <grad s, u> = -<s, div u> holds for matching
// parities, which is what makes the discrete energy balance exact:
//
//   laplacian(s)        = div_odd(grad_even(s))
//   vector_laplacian(u) = div_even(grad_odd(u_k))   per component
//   grad_div(u)         = grad_even(div_odd(u))

#include "vnsf/fields.hpp"

namespace vnsf {

// Sign applied to the mirrored interior value when filling a wall ghost cell.
enum class Parity { Even, Odd };

VectorField grad(const ScalarField& s, Parity parity = Parity::Even);
ScalarField div(const VectorField& u, Parity parity = Parity::Odd);
ScalarField laplacian(const ScalarField& s);
VectorField vector_laplacian(const VectorField& u);
VectorField grad_div(const VectorField& u);

// (w . grad) u, with u treated as a no-slip velocity.
VectorField directional_derivative(const VectorField& w, const VectorField& u);

// Conservative discretisation of div(s v) with local Lax-Friedrichs face
// fluxes F = {s v_n} - a/2 [s], a = max(|v_n^L|, |v_n^R|).
ScalarField convect_scalar(const VectorField& v, const ScalarField& s);

// Conservative discretisation of div(m (x) v), m = rho v. The central part uses
// the face mass flux {m_n} times {v}, which conserves kinetic energy together
// with convect_scalar; the same Lax-Friedrichs speed damps [m].
VectorField convect_momentum(const VectorField& v, const VectorField& m);

// Discrete L2 inner products (midpoint rule, sequential sums).
double inner(const ScalarField& a, const ScalarField& b);
double inner(const VectorField& a, const VectorField& b);

// Low-level central difference of one plane along `axis`, accumulated into
// `out` scaled by `scale`.
void accumulate_central(const Grid& grid, std::span<const double> in, int axis, Parity parity, double scale,
                        std::span<double> out);

}  // namespace vnsf
