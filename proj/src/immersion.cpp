#include "varq/immersion.hpp"

#include <cmath>
#include <stdexcept>

#include "varq/gaussian.hpp"

namespace varq::engine {

Immersion gaussian_grid_immersion(const grid::SpatialGrid& g) {
    grid::validate(g);
    Immersion im;
    im.param_dim = 6;
    im.label = "gaussian exp(-a x^2 + b x + c) on [" + std::to_string(g.x_min) + ", " +
               std::to_string(g.x_max) + "]";
    im.evaluate = [g](const std::vector<double>& x) {
        if (x.size() != 6)
            throw std::invalid_argument("gaussian immersion expects 6 parameters");
        const gaussian::GaussianParams p{x[0], x[1], x[2], x[3], x[4], x[5]};
        gaussian::validate(p);
        return grid::sample_gaussian(g, p).samples;
    };
    return im;
}

Immersion gaussian_grid_immersion_ab(const grid::SpatialGrid& g) {
    grid::validate(g);
    Immersion im;
    im.param_dim = 4;
    im.label = "gaussian exp(-a x^2 + b x), c = 0";
    im.evaluate = [g](const std::vector<double>& x) {
        if (x.size() != 4)
            throw std::invalid_argument("gaussian (a, b) immersion expects 4 parameters");
        const gaussian::GaussianParams p{x[0], x[1], x[2], x[3], 0.0, 0.0};
        gaussian::validate(p);
        return grid::sample_gaussian(g, p).samples;
    };
    return im;
}

Immersion two_level_immersion() {
    Immersion im;
    im.param_dim = 2;
    im.label = "two-level coherent sphere (theta, phi)";
    im.evaluate = [](const std::vector<double>& x) {
        if (x.size() != 2)
            throw std::invalid_argument("two-level immersion expects (theta, phi)");
        const double theta = x[0], phi = x[1];
        ComplexVector psi(2);
        psi[0] = std::sin(0.5 * theta) * std::exp(Complex(0.0, -phi));
        psi[1] = std::cos(0.5 * theta);
        return psi;
    };
    return im;
}

HamiltonianAction grid_hamiltonian(const grid::SpatialGrid& g,
                                   const std::function<double(double)>& potential,
                                   const std::string& label) {
    grid::SpectralHamiltonian h(g, potential);
    HamiltonianAction act;
    act.label = label;
    act.apply = [h](const ComplexVector& v) { return h.apply(v); };
    return act;
}

HamiltonianAction matrix_hamiltonian(const Eigen::MatrixXcd& h, const std::string& label) {
    if (h.rows() != h.cols()) throw std::invalid_argument("matrix Hamiltonian must be square");
    if ((h - h.adjoint()).norm() > 1e-12 * std::max(1.0, h.norm()))
        throw std::invalid_argument("matrix Hamiltonian must be Hermitian");
    HamiltonianAction act;
    act.label = label;
    act.apply = [h](const ComplexVector& v) {
        if (static_cast<Eigen::Index>(v.size()) != h.rows())
            throw std::invalid_argument("matrix Hamiltonian: dimension mismatch");
        const Eigen::Map<const Eigen::VectorXcd> vin(v.data(), h.rows());
        const Eigen::VectorXcd out = h * vin;
        return ComplexVector(out.data(), out.data() + out.size());
    };
    return act;
}

HamiltonianAction two_level_field_hamiltonian(double field) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2, 2);
    h(0, 0) = 0.5 * field;
    h(1, 1) = -0.5 * field;
    return matrix_hamiltonian(h, "two-level field splitting");
}

}  // namespace varq::engine
