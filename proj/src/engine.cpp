#include "varq/engine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "varq/linalg.hpp"

namespace varq::engine {

namespace {

// Absolute largest-singular-value threshold below which the two-form is
// treated as identically zero; finite-difference noise sits near 1e-10.
constexpr double kOmegaFloor = 1e-9;
// A "no dynamics" point is a consistent equilibrium only if ||dE|| stays
// below this.
constexpr double kCriticalPointTol = 1e-8;

ComplexVector normalized_or_throw(ComplexVector v, const std::string& label) {
    const double n2 = norm_sq(v);
    if (!(n2 > 0.0) || !std::isfinite(n2))
        throw std::domain_error("immersion '" + label + "' returned a zero or non-finite state");
    const double s = 1.0 / std::sqrt(n2);
    for (Complex& c : v) c *= s;
    return v;
}

double step_for(const std::vector<double>& point, std::size_t axis, const FdOptions& opt) {
    return std::max(opt.step * std::max(std::abs(point[axis]), 1.0), opt.step_floor);
}

// Normalized immersion state at point shifted by delta along one axis;
// failures are rethrown naming the coordinate being differenced.
ComplexVector eval_shifted(const Immersion& im, std::vector<double> point, std::size_t axis,
                           double delta) {
    point[axis] += delta;
    try {
        return normalized_or_throw(im.evaluate(point), im.label);
    } catch (const std::exception& e) {
        throw std::runtime_error("immersion '" + im.label +
                                 "' evaluation failed while differencing coordinate " +
                                 std::to_string(axis) + ": " + e.what());
    }
}

// Five-point fourth-order derivative of the unit-normalized section along one
// coordinate.
ComplexVector tangent(const Immersion& im, const std::vector<double>& point, std::size_t axis,
                      const FdOptions& opt) {
    const double h = step_for(point, axis, opt);
    const ComplexVector m2 = eval_shifted(im, point, axis, -2.0 * h);
    const ComplexVector m1 = eval_shifted(im, point, axis, -h);
    const ComplexVector p1 = eval_shifted(im, point, axis, h);
    const ComplexVector p2 = eval_shifted(im, point, axis, 2.0 * h);
    ComplexVector d(p1.size());
    const double inv = 1.0 / (12.0 * h);
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] = (m2[i] - 8.0 * m1[i] + 8.0 * p1[i] - p2[i]) * inv;
    return d;
}

void check_point(const Immersion& im, const std::vector<double>& point) {
    if (im.param_dim == 0 || !im.evaluate)
        throw std::invalid_argument("immersion is not initialized");
    if (point.size() != im.param_dim)
        throw std::invalid_argument("point dimension does not match the immersion");
}

void center_and_tangents(const Immersion& im, const std::vector<double>& point,
                         const FdOptions& opt, ComplexVector* center,
                         std::vector<ComplexVector>* tangents) {
    *center = normalized_or_throw(im.evaluate(point), im.label);
    tangents->clear();
    tangents->reserve(im.param_dim);
    for (std::size_t j = 0; j < im.param_dim; ++j)
        tangents->push_back(tangent(im, point, j, opt));
}

}  // namespace

std::vector<double> cartan_one_form(const Immersion& im, const std::vector<double>& point,
                                    const FdOptions& opt) {
    check_point(im, point);
    ComplexVector center;
    std::vector<ComplexVector> t;
    center_and_tangents(im, point, opt, &center, &t);
    std::vector<double> theta(im.param_dim);
    const double n2 = norm_sq(center);
    for (std::size_t j = 0; j < im.param_dim; ++j)
        theta[j] = inner_product(t[j], center).imag() / n2;
    return theta;
}

TwoForm lagrangian_two_form(const Immersion& im, const std::vector<double>& point,
                            const FdOptions& opt) {
    check_point(im, point);
    ComplexVector center;
    std::vector<ComplexVector> t;
    center_and_tangents(im, point, opt, &center, &t);
    const auto m = static_cast<Eigen::Index>(im.param_dim);
    Eigen::MatrixXd raw(m, m);
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index k = 0; k < m; ++k)
            raw(j, k) = -2.0 * inner_product(t[static_cast<std::size_t>(j)],
                                             t[static_cast<std::size_t>(k)])
                                   .imag();
    TwoForm out;
    out.omega = 0.5 * (raw - raw.transpose());
    out.asymmetry = 0.5 * (raw + raw.transpose()).norm();
    return out;
}

double reduced_energy(const Immersion& im, const HamiltonianAction& ham,
                      const std::vector<double>& point) {
    check_point(im, point);
    if (!ham.apply) throw std::invalid_argument("Hamiltonian action is not initialized");
    const ComplexVector psi = im.evaluate(point);
    const double n2 = norm_sq(psi);
    if (!(n2 > 0.0) || !std::isfinite(n2))
        throw std::domain_error("reduced energy of a zero-norm state");
    return inner_product(psi, ham.apply(psi)).real() / n2;
}

std::vector<double> energy_differential(const Immersion& im, const HamiltonianAction& ham,
                                        const std::vector<double>& point, const FdOptions& opt) {
    check_point(im, point);
    std::vector<double> g(im.param_dim);
    for (std::size_t j = 0; j < im.param_dim; ++j) {
        const double h = step_for(point, j, opt);
        auto e_at = [&](double delta) {
            std::vector<double> q = point;
            q[j] += delta;
            try {
                return reduced_energy(im, ham, q);
            } catch (const std::exception& e) {
                throw std::runtime_error("immersion '" + im.label +
                                         "' evaluation failed while differencing coordinate " +
                                         std::to_string(j) + ": " + e.what());
            }
        };
        g[j] = (e_at(-2.0 * h) - 8.0 * e_at(-h) + 8.0 * e_at(h) - e_at(2.0 * h)) / (12.0 * h);
    }
    return g;
}

ReducedGeometry reduced_geometry(const Immersion& im, const HamiltonianAction& ham,
                                 const std::vector<double>& point, const FdOptions& opt) {
    ReducedGeometry geo;
    geo.point = point;
    geo.theta = cartan_one_form(im, point, opt);
    const TwoForm tf = lagrangian_two_form(im, point, opt);
    geo.omega = tf.omega;
    geo.asymmetry = tf.asymmetry;
    geo.dE = energy_differential(im, ham, point, opt);
    const Eigen::Map<const Eigen::VectorXd> dE(geo.dE.data(),
                                               static_cast<Eigen::Index>(geo.dE.size()));
    geo.kernel = kernel_solve(geo.omega, dE, opt.kernel_rel_tol).kernel;
    return geo;
}

ReducedField reduced_field(const Immersion& im, const HamiltonianAction& ham,
                           const std::vector<double>& point, const FdOptions& opt) {
    check_point(im, point);
    const TwoForm tf = lagrangian_two_form(im, point, opt);
    const std::vector<double> de = energy_differential(im, ham, point, opt);
    const Eigen::Map<const Eigen::VectorXd> dE(de.data(), static_cast<Eigen::Index>(de.size()));

    ReducedField out;
    const KernelSolve ks = kernel_solve(tf.omega, dE, opt.kernel_rel_tol);
    if (ks.sigma_max <= kOmegaFloor) {
        out.no_dynamics = true;
        out.gamma.assign(im.param_dim, 0.0);
        out.kernel = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(im.param_dim),
                                               static_cast<Eigen::Index>(im.param_dim));
        out.residual = dE.norm();
        return out;
    }
    out.gamma.assign(ks.solution.data(), ks.solution.data() + ks.solution.size());
    out.kernel = ks.kernel;
    out.residual = ks.residual;
    return out;
}

ReducedTrajectory integrate_reduced(const Immersion& im, const HamiltonianAction& ham,
                                    const std::vector<double>& p0, double dt, double t_end,
                                    const FdOptions& opt, std::size_t stride) {
    check_point(im, p0);
    if (!(dt > 0.0)) throw std::invalid_argument("integrate_reduced: dt must be positive");
    if (!(t_end > 0.0)) throw std::invalid_argument("integrate_reduced: t_end must be positive");
    if (stride == 0) stride = 1;
    const std::size_t m = im.param_dim;

    ReducedTrajectory traj;
    auto field = [&](const std::vector<double>& x) {
        const ReducedField rf = reduced_field(im, ham, x, opt);
        traj.max_residual = std::max(traj.max_residual, rf.residual);
        if (rf.no_dynamics && rf.residual > kCriticalPointTol)
            throw std::runtime_error(
                "no dynamics: the two-form vanished and the critical-point condition dE = 0 "
                "fails (||dE|| = " +
                std::to_string(rf.residual) + ") for immersion '" + im.label + "'");
        return rf;
    };

    auto store = [&](double t, const std::vector<double>& x) {
        const ReducedField rf = field(x);
        traj.times.push_back(t);
        traj.points.push_back(x);
        traj.energies.push_back(reduced_energy(im, ham, x));
        traj.kernel_dims.push_back(rf.kernel.cols());
    };

    std::vector<double> x = p0;
    store(0.0, x);
    double t = 0.0;
    std::size_t step = 0;
    const double t_eps = 1e-12 * std::max(1.0, std::abs(t_end));
    std::vector<double> k1(m), k2(m), k3(m), k4(m), xs(m);
    while (t < t_end - t_eps) {
        const double h = std::min(dt, t_end - t);
        k1 = field(x).gamma;
        for (std::size_t i = 0; i < m; ++i) xs[i] = x[i] + 0.5 * h * k1[i];
        k2 = field(xs).gamma;
        for (std::size_t i = 0; i < m; ++i) xs[i] = x[i] + 0.5 * h * k2[i];
        k3 = field(xs).gamma;
        for (std::size_t i = 0; i < m; ++i) xs[i] = x[i] + h * k3[i];
        k4 = field(xs).gamma;
        for (std::size_t i = 0; i < m; ++i)
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t += h;
        ++step;
        if (step % stride == 0 || t >= t_end - t_eps) store(t, x);
    }
    return traj;
}

}  // namespace varq::engine
