#pragma once

// Parameter-manifold immersions into a complex state space, plus Hermitian
// Hamiltonian actions on that space.  These are the inputs of the generic
// reduction engine: an immersion only has to produce a nonzero state vector
// for each admissible parameter tuple; all geometry is derived numerically.

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

#include "varq/common.hpp"
#include "varq/grid.hpp"

namespace varq::engine {

struct Immersion {
    std::size_t param_dim = 0;
    // Must return a nonzero vector for every admissible parameter tuple and
    // throw (std::domain_error preferred) outside the admissible set.
    std::function<ComplexVector(const std::vector<double>&)> evaluate;
    std::string label;
};

struct HamiltonianAction {
    // Hermitian: <u, apply(v)> == conj(<v, apply(u)>).
    std::function<ComplexVector(const ComplexVector&)> apply;
    std::string label;
};

// --- immersion factories ---------------------------------------------------

// exp(-a x^2 + b x + c) sampled on the grid; parameters
// (a_R, a_I, b_R, b_I, c_R, c_I), a_R > 0.
Immersion gaussian_grid_immersion(const grid::SpatialGrid& g);

// Same family with c frozen to 0; parameters (a_R, a_I, b_R, b_I).
Immersion gaussian_grid_immersion_ab(const grid::SpatialGrid& g);

// Two-level coherent family psi(theta, phi) =
//   (sin(theta/2) e^{-i phi}, cos(theta/2))
// in the basis (excited, ground): the unit sphere with the ground state at
// theta = 0.
Immersion two_level_immersion();

// --- Hamiltonian factories ---------------------------------------------------

// H = p^2/2 + V(x) on the grid (spectral kinetic part, cached plans).
HamiltonianAction grid_hamiltonian(const grid::SpatialGrid& g,
                                   const std::function<double(double)>& potential,
                                   const std::string& label);

// Finite-dimensional H given as a dense Hermitian matrix.
HamiltonianAction matrix_hamiltonian(const Eigen::MatrixXcd& h, const std::string& label);

// diag(B/2, -B/2) on the two-level family above.
HamiltonianAction two_level_field_hamiltonian(double field);

}  // namespace varq::engine
