#include "varq/acceptance.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "varq/common.hpp"
#include "varq/csv.hpp"
#include "varq/engine.hpp"
#include "varq/fermi.hpp"
#include "varq/fit.hpp"
#include "varq/fock.hpp"
#include "varq/gaussian.hpp"
#include "varq/gkls.hpp"
#include "varq/grassmann.hpp"
#include "varq/grid.hpp"
#include "varq/immersion.hpp"
#include "varq/ode.hpp"
#include "varq/scenario.hpp"
#include "varq/spin.hpp"

namespace varq::acceptance {

namespace {

using gaussian::GaussianParams;
using gaussian::ModelParams;
using nlohmann::json;

// The canonical initial wavepacket used by the closed-form criteria.
const GaussianParams kP0{0.5, 0.0, 0.3, 0.2, 0.0, 0.0};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

double seconds_since(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
}

std::string read_file(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    std::ostringstream buf;
    buf << file.rdbuf();
    return buf.str();
}

json read_report(const std::string& path) {
    return json::parse(read_file(path));
}

// Closed-form two-form on the (a_R, a_I, b_R, b_I) block of the Gaussian
// family.
Eigen::Matrix4d analytic_two_form(const GaussianParams& p) {
    const double aR = p.a_R, bR = p.b_R;
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    m(0, 1) = -(bR * bR / (2.0 * aR * aR * aR) + 1.0 / (4.0 * aR * aR));
    m(2, 1) = bR / (2.0 * aR * aR);
    m(0, 3) = bR / (2.0 * aR * aR);
    m(2, 3) = -1.0 / (2.0 * aR);
    m(1, 0) = -m(0, 1);
    m(1, 2) = -m(2, 1);
    m(3, 0) = -m(0, 3);
    m(3, 2) = -m(2, 3);
    return m;
}

std::function<double(double)> potential_for(const ModelParams& m) {
    return [m](double x) {
        return 0.5 * m.omega * m.omega * x * x + 0.5 * m.lambda * x * x * x * x;
    };
}

grid::SpatialGrid engine_grid() { return grid::SpatialGrid{-12.0, 12.0, 512}; }

GaussianParams random_point(std::mt19937& rng) {
    std::uniform_real_distribution<double> ua(0.2, 2.0);
    std::uniform_real_distribution<double> u1(-1.0, 1.0);
    GaussianParams p;
    p.a_R = ua(rng);
    p.a_I = u1(rng);
    // |b| <= 1: rejection-sample the unit disc.
    do {
        p.b_R = u1(rng);
        p.b_I = u1(rng);
    } while (p.b_R * p.b_R + p.b_I * p.b_I > 1.0);
    p.c_R = 0.0;
    p.c_I = 0.0;
    return p;
}

// Largest principal angle between span(kernel columns) and span(e_i1, e_i2).
double kernel_angle(const Eigen::MatrixXd& kernel, int i1, int i2) {
    if (kernel.cols() != 2) return kPi / 2.0;
    Eigen::MatrixXd target = Eigen::MatrixXd::Zero(kernel.rows(), 2);
    target(i1, 0) = 1.0;
    target(i2, 1) = 1.0;
    const Eigen::Matrix2d overlap = target.transpose() * kernel;
    const Eigen::JacobiSVD<Eigen::Matrix2d> svd(overlap);
    const double cos_angle = std::min(1.0, svd.singularValues().minCoeff());
    return std::acos(cos_angle);
}

scenario::Scenario base_scenario(const std::string& name,
                                 const std::string& model,
                                 const std::string& method) {
    scenario::Scenario s;
    s.name = name;
    s.model = model;
    s.method = method;
    return s;
}

// ---------------------------------------------------------------------------
// 1. Free-particle reduction vs closed forms.
// ---------------------------------------------------------------------------
CriterionResult c1_free_closed_form(const std::string& out_dir) {
    CriterionResult res{1, "free-closed-form", false, ""};

    const auto start = std::chrono::steady_clock::now();
    const OdeSolution sol =
        integrate_rk4(gaussian::make_free_problem(kP0), 2.0, 1e-4, 100);
    const double runtime = seconds_since(start);

    double max_dev = 0.0, max_ratio = 0.0;
    const Complex ratio0 = kP0.b() / kP0.a();
    for (std::size_t i = 0; i < sol.times.size(); ++i) {
        const auto ref = gaussian::free_closed_form(kP0, sol.times[i]).as_array();
        const auto& y = sol.states[i];
        for (int j = 0; j < 6; ++j) {
            max_dev = std::max(max_dev, std::abs(y[j] - ref[j]));
        }
        const Complex a{y[0], y[1]}, b{y[2], y[3]};
        max_ratio = std::max(max_ratio, std::abs(b / a - ratio0));
    }

    scenario::Scenario s = base_scenario(res.name, "free", "restricted");
    s.dt = 1e-4;
    s.t_end = 2.0;
    s.stride = 100;
    scenario::run_scenario(s, out_dir);

    res.passed = max_dev <= 1e-7 && max_ratio <= 1e-10 && runtime < 1.0;
    res.detail = "closed-form deviation " + num(max_dev) +
                 " (tol 1e-7), b/a drift " + num(max_ratio) +
                 " (tol 1e-10), integration " + num(runtime) + " s (< 1 s)";
    return res;
}

// ---------------------------------------------------------------------------
// 2. Harmonic reduction vs closed forms and linearizing invariants.
// ---------------------------------------------------------------------------
CriterionResult c2_harmonic_closed_form(const std::string& out_dir) {
    CriterionResult res{2, "harmonic-closed-form", false, ""};
    const ModelParams m{1.0, 0.0};

    const OdeSolution sol = integrate_rk4(
        gaussian::make_harmonic_problem(kP0, m), 2.0, 1e-4, 100);

    double max_dev = 0.0;
    for (std::size_t i = 0; i < sol.times.size(); ++i) {
        const auto ref =
            gaussian::harmonic_closed_form(kP0, m, sol.times[i]).as_array();
        const auto& y = sol.states[i];
        for (int j = 0; j < 6; ++j) {
            max_dev = std::max(max_dev, std::abs(y[j] - ref[j]));
        }
    }

    // Linearizing invariants.  The pinned initial width a0 = 1/2 sits exactly
    // at the fixed point u = 0, so the -2 omega phase advance is measured on
    // a second, squeezed trajectory; modulus constancy is measured on both.
    double mod_drift = 0.0, phase_dev = 0.0;
    auto scan = [&](const GaussianParams& p0) {
        const OdeSolution traj = integrate_rk4(
            gaussian::make_harmonic_problem(p0, m), 2.0, 1e-4, 100);
        const gaussian::LinearizingVars lv0 = gaussian::to_linearizing(p0, m);
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            const double t = traj.times[i];
            const auto& y = traj.states[i];
            const GaussianParams pt{y[0], y[1], y[2], y[3], y[4], y[5]};
            const gaussian::LinearizingVars lv = gaussian::to_linearizing(pt, m);
            mod_drift = std::max(mod_drift,
                                 std::abs(std::abs(lv.z) - std::abs(lv0.z)));
            mod_drift = std::max(mod_drift,
                                 std::abs(std::abs(lv.u) - std::abs(lv0.u)));
            if (std::abs(lv0.z) > 1e-8) {
                const Complex w = lv.z * std::exp(Complex{0.0, m.omega * t}) / lv0.z;
                phase_dev = std::max(phase_dev, std::abs(std::arg(w)));
            }
            if (std::abs(lv0.u) > 1e-8) {
                const Complex w =
                    lv.u * std::exp(Complex{0.0, 2.0 * m.omega * t}) / lv0.u;
                phase_dev = std::max(phase_dev, std::abs(std::arg(w)));
            }
        }
    };
    scan(kP0);
    scan(GaussianParams{0.8, 0.1, 0.3, 0.2, 0.0, 0.0});

    scenario::Scenario s = base_scenario(res.name, "harmonic", "restricted");
    s.dt = 1e-4;
    s.t_end = 2.0;
    s.stride = 100;
    s.params = json{{"omega", 1.0}};
    scenario::run_scenario(s, out_dir);

    res.passed = max_dev <= 1e-7 && mod_drift <= 1e-10 && phase_dev <= 1e-6;
    res.detail = "closed-form deviation " + num(max_dev) +
                 " (tol 1e-7), |z|,|u| drift " + num(mod_drift) +
                 " (tol 1e-10), phase deviation " + num(phase_dev) +
                 " (tol 1e-6)";
    return res;
}

// ---------------------------------------------------------------------------
// 3. The harmonic closed form reaches the free one as omega -> 0.
// ---------------------------------------------------------------------------
CriterionResult c3_small_frequency_limit(const std::string& out_dir) {
    CriterionResult res{3, "small-frequency-limit", false, ""};
    const ModelParams m{1e-4, 0.0};
    const auto harm = gaussian::harmonic_closed_form(kP0, m, 1.0).as_array();
    const auto free_ = gaussian::free_closed_form(kP0, 1.0).as_array();
    double dev = 0.0;
    for (int j = 0; j < 6; ++j) dev = std::max(dev, std::abs(harm[j] - free_[j]));

    csv::Table table({"component", "harmonic_small_omega", "free"});
    const char* names[6] = {"a_R", "a_I", "b_R", "b_I", "c_R", "c_I"};
    for (int j = 0; j < 6; ++j) {
        table.add_row(std::vector<std::string>{
            names[j], csv::format_double(harm[j]), csv::format_double(free_[j])});
    }
    table.write(out_dir + "/" + res.name + ".csv");

    res.passed = dev <= 1e-6;
    res.detail = "max component gap " + num(dev) + " (tol 1e-6) at t = 1";
    return res;
}

// ---------------------------------------------------------------------------
// 4. Grid evolution stays on the Gaussian manifold.
// ---------------------------------------------------------------------------
CriterionResult c4_invariant_manifold(const std::string& out_dir) {
    CriterionResult res{4, "invariant-manifold-fidelity", false, ""};

    double min_fid = 1.0, worst_runtime = 0.0;
    for (const std::string model : {"free", "harmonic"}) {
        scenario::Scenario s = base_scenario(res.name + "-" + model, model,
                                             "compare");
        s.dt = 1e-3;
        s.t_end = 1.0;
        s.stride = 10;
        if (model == "harmonic") s.params = json{{"omega", 1.0}};
        const auto start = std::chrono::steady_clock::now();
        const scenario::RunOutputs outs = scenario::run_scenario(s, out_dir);
        worst_runtime = std::max(worst_runtime, seconds_since(start));
        const json report = read_report(outs.report_path);
        min_fid = std::min(
            min_fid, report.at("diagnostics").at("min_fidelity").get<double>());
    }

    res.passed = min_fid >= 1.0 - 1e-6 && worst_runtime < 30.0;
    res.detail = "min fidelity 1 - " + num(1.0 - min_fid) +
                 " (tol 1e-6), slowest model " + num(worst_runtime) +
                 " s (< 30 s)";
    return res;
}

// ---------------------------------------------------------------------------
// 5. The generic engine reproduces the closed-form Gaussian geometry.
// ---------------------------------------------------------------------------
CriterionResult c5_engine_agreement(const std::string& out_dir) {
    CriterionResult res{5, "engine-closed-form-agreement", false, ""};

    const grid::SpatialGrid g = engine_grid();
    const engine::Immersion im6 = engine::gaussian_grid_immersion(g);
    const engine::Immersion im4 = engine::gaussian_grid_immersion_ab(g);
    const ModelParams free_m{0.0, 0.0}, harm_m{1.0, 0.0}, anh_m{1.0, 0.1};
    const engine::HamiltonianAction h_free =
        engine::grid_hamiltonian(g, potential_for(free_m), "free");
    const engine::HamiltonianAction h_harm =
        engine::grid_hamiltonian(g, potential_for(harm_m), "harmonic");
    const engine::HamiltonianAction h_anh =
        engine::grid_hamiltonian(g, potential_for(anh_m), "anharmonic");

    std::mt19937 rng(20240815u);
    double dev_omega = 0.0, dev_free = 0.0, dev_harm = 0.0, dev_anh = 0.0;
    csv::Table table(
        {"trial", "two_form_dev", "free_dev", "harmonic_dev", "anharmonic_dev"});

    for (int trial = 0; trial < 50; ++trial) {
        const GaussianParams p = random_point(rng);
        const std::vector<double> x6{p.a_R, p.a_I, p.b_R, p.b_I, 0.0, 0.0};
        const std::vector<double> x4{p.a_R, p.a_I, p.b_R, p.b_I};

        // Two-form on the full manifold: the printed (a, b) block bordered by
        // zero rows/columns for the gauge pair.
        const engine::TwoForm tf = engine::lagrangian_two_form(im6, x6);
        Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(6, 6);
        expected.topLeftCorner<4, 4>() = analytic_two_form(p);
        const double d_omega = (tf.omega - expected).cwiseAbs().maxCoeff();
        dev_omega = std::max(dev_omega, d_omega);

        auto field_dev = [&](const engine::HamiltonianAction& ham,
                             const std::array<double, 6>& closed4) {
            const engine::ReducedField rf = engine::reduced_field(im4, ham, x4);
            double d = 0.0;
            for (int i = 0; i < 4; ++i) {
                d = std::max(d, std::abs(rf.gamma[i] - closed4[i]));
            }
            return d;
        };
        const double d_free = field_dev(h_free, gaussian::free_field(p));
        const double d_harm = field_dev(h_harm, gaussian::harmonic_field(p, harm_m));
        const auto anh4 = gaussian::anharmonic_field(p, anh_m);
        const double d_anh =
            field_dev(h_anh, {anh4[0], anh4[1], anh4[2], anh4[3], 0.0, 0.0});
        dev_free = std::max(dev_free, d_free);
        dev_harm = std::max(dev_harm, d_harm);
        dev_anh = std::max(dev_anh, d_anh);

        table.add_row(std::vector<double>{static_cast<double>(trial), d_omega,
                                          d_free, d_harm, d_anh});
    }
    table.write(out_dir + "/" + res.name + ".csv");

    const double worst =
        std::max(std::max(dev_omega, dev_free), std::max(dev_harm, dev_anh));
    res.passed = worst <= 1e-4;
    res.detail = "two-form deviation " + num(dev_omega) + ", reduced fields " +
                 num(dev_free) + " / " + num(dev_harm) + " / " + num(dev_anh) +
                 " (free/harmonic/anharmonic, tol 1e-4, 50 points)";
    return res;
}

// ---------------------------------------------------------------------------
// 6. The gauge kernel is two-dimensional along the (c_R, c_I) directions.
// ---------------------------------------------------------------------------
CriterionResult c6_gauge_kernel(const std::string& out_dir) {
    CriterionResult res{6, "gauge-kernel", false, ""};

    const grid::SpatialGrid g = engine_grid();
    const engine::Immersion im = engine::gaussian_grid_immersion(g);
    const engine::HamiltonianAction ham =
        engine::grid_hamiltonian(g, potential_for(ModelParams{}), "free");

    std::mt19937 rng(5150u);
    bool dims_ok = true;
    double worst_angle = 0.0;
    csv::Table table({"trial", "kernel_dim", "angle"});
    for (int trial = 0; trial < 8; ++trial) {
        const GaussianParams p = random_point(rng);
        const engine::ReducedGeometry geo = engine::reduced_geometry(
            im, ham, {p.a_R, p.a_I, p.b_R, p.b_I, 0.0, 0.0});
        dims_ok = dims_ok && geo.kernel.cols() == 2;
        const double angle = kernel_angle(geo.kernel, 4, 5);
        worst_angle = std::max(worst_angle, angle);
        table.add_row(std::vector<double>{static_cast<double>(trial),
                                          static_cast<double>(geo.kernel.cols()),
                                          angle});
    }
    table.write(out_dir + "/" + res.name + ".csv");

    res.passed = dims_ok && worst_angle < 1e-6;
    res.detail = std::string("kernel dimension 2 at all points: ") +
                 (dims_ok ? "yes" : "NO") + ", worst alignment angle " +
                 num(worst_angle) + " rad (tol 1e-6)";
    return res;
}

// ---------------------------------------------------------------------------
// 7. Darboux chart canonicity and complete integrability.
// ---------------------------------------------------------------------------
CriterionResult c7_darboux(const std::string& out_dir) {
    CriterionResult res{7, "darboux-integrability", false, ""};

    // (i) pushforward of the closed-form two-form is the canonical matrix.
    std::mt19937 rng(777u);
    Eigen::Matrix4d canonical = Eigen::Matrix4d::Zero();
    canonical(0, 1) = -1.0;
    canonical(1, 0) = 1.0;
    canonical(2, 3) = -1.0;
    canonical(3, 2) = 1.0;
    double dev_canonical = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const GaussianParams p = random_point(rng);
        const auto Jarr = gaussian::to_darboux_jacobian(p);
        Eigen::Matrix4d J;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) J(r, c) = Jarr[r][c];
        const Eigen::Matrix4d Jinv = J.inverse();
        const Eigen::Matrix4d pushed =
            Jinv.transpose() * analytic_two_form(p) * Jinv;
        dev_canonical =
            std::max(dev_canonical, (pushed - canonical).cwiseAbs().maxCoeff());
    }

    // (ii) conserved quantities under the implicit midpoint rule.
    const gaussian::DarbouxCoords d0 =
        gaussian::to_darboux(GaussianParams{0.5, 0.1, 0.3, 0.2, 0.0, 0.0});
    const double w = 1.0;

    const OdeSolution sol_f = integrate_implicit_midpoint(
        gaussian::make_darboux_free_problem(d0), 1.0, 1e-5, 1000);
    const OdeSolution sol_h = integrate_implicit_midpoint(
        gaussian::make_darboux_harmonic_problem(d0, w), 1.0, 1e-5, 1000);

    const double h2f0 = gaussian::darboux_free_h2(d0);
    const double h10 = gaussian::darboux_harmonic_h1(d0, w);
    const double h20 = gaussian::darboux_harmonic_h2(d0, w);
    double drift_p1 = 0.0, drift_h2f = 0.0, drift_h1 = 0.0, drift_h2h = 0.0;

    csv::Table table({"t", "p1_free", "h2_free", "h1_harmonic", "h2_harmonic"});
    for (std::size_t i = 0; i < sol_f.times.size(); ++i) {
        const gaussian::DarbouxCoords df{sol_f.states[i][0], sol_f.states[i][1],
                                         sol_f.states[i][2], sol_f.states[i][3]};
        const gaussian::DarbouxCoords dh{sol_h.states[i][0], sol_h.states[i][1],
                                         sol_h.states[i][2], sol_h.states[i][3]};
        drift_p1 = std::max(drift_p1, std::abs(df.p1 - d0.p1));
        drift_h2f =
            std::max(drift_h2f, std::abs(gaussian::darboux_free_h2(df) - h2f0));
        drift_h1 = std::max(
            drift_h1, std::abs(gaussian::darboux_harmonic_h1(dh, w) - h10));
        drift_h2h = std::max(
            drift_h2h, std::abs(gaussian::darboux_harmonic_h2(dh, w) - h20));
        table.add_row(std::vector<double>{
            sol_f.times[i], df.p1, gaussian::darboux_free_h2(df),
            gaussian::darboux_harmonic_h1(dh, w),
            gaussian::darboux_harmonic_h2(dh, w)});
    }
    table.write(out_dir + "/" + res.name + ".csv");

    const double worst_drift =
        std::max(std::max(drift_p1, drift_h2f), std::max(drift_h1, drift_h2h));
    res.passed = dev_canonical <= 1e-8 && worst_drift <= 1e-8;
    res.detail = "canonical-form deviation " + num(dev_canonical) +
                 " (tol 1e-8), worst invariant drift " + num(worst_drift) +
                 " per unit time (tol 1e-8)";
    return res;
}

// ---------------------------------------------------------------------------
// 8. Variational quartic dynamics.
// ---------------------------------------------------------------------------
CriterionResult c8_anharmonic(const std::string& out_dir) {
    CriterionResult res{8, "anharmonic-variational", false, ""};
    const GaussianParams p0{0.5, 0.0, 0.0, 0.0, 0.0, 0.0};
    const ModelParams m{1.0, 0.1};

    // (i) reduced energy conservation along the variational flow.
    const OdeSolution sol = integrate_rk4(
        gaussian::make_anharmonic_problem(p0, m), 1.0, 1e-4, 100);
    const double e0 = gaussian::anharmonic_energy(p0, m);
    double drift = 0.0;
    for (const auto& y : sol.states) {
        const GaussianParams pt{y[0], y[1], y[2], y[3], 0.0, 0.0};
        drift = std::max(drift,
                         std::abs(gaussian::anharmonic_energy(pt, m) - e0));
    }

    // (ii) the variational flow beats the frozen initial state at t = 0.5.
    const grid::SpatialGrid g{-20.0, 20.0, 2048};
    const grid::GridWavefunction psi0 = grid::sample_gaussian(g, p0).normalized();
    const grid::EvolveResult ev =
        grid::split_step_evolve(psi0, potential_for(m), 1e-3, 0.5, 500);
    const grid::GridWavefunction psi_half = ev.states.back().normalized();
    const OdeSolution red = integrate_rk4(
        gaussian::make_anharmonic_problem(p0, m), 0.5, 1e-4, 5000);
    const auto& yh = red.final_state();
    const GaussianParams p_half{yh[0], yh[1], yh[2], yh[3], 0.0, 0.0};
    const double fid_reduced = grid::fidelity(psi_half, p_half);
    const double fid_frozen = grid::fidelity(psi_half, p0);

    // (iii) stronger coupling: the evolved state leaves the manifold.
    const ModelParams m_strong{1.0, 0.5};
    const grid::EvolveResult ev2 =
        grid::split_step_evolve(psi0, potential_for(m_strong), 1e-3, 1.0, 1000);
    const double residual =
        fit::fit_gaussian(ev2.states.back().normalized()).residual;

    scenario::Scenario s = base_scenario(res.name, "anharmonic", "compare");
    s.dt = 1e-3;
    s.t_end = 1.0;
    s.stride = 10;
    s.params = json{{"omega", 1.0}, {"lambda", 0.1}, {"b_R", 0.0}, {"b_I", 0.0}};
    scenario::run_scenario(s, out_dir);

    res.passed =
        drift <= 1e-6 && fid_reduced > fid_frozen && residual > 1e-3;
    res.detail = "energy drift " + num(drift) +
                 " (tol 1e-6), fidelity reduced/frozen " + num(fid_reduced) +
                 " / " + num(fid_frozen) + " (must beat), strong-coupling fit residual " +
                 num(residual) + " (> 1e-3)";
    return res;
}

// ---------------------------------------------------------------------------
// 9. Coherent-state families: precession, mode-function rigidity, two-mode
//    entangled-family preservation.
// ---------------------------------------------------------------------------
CriterionResult c9_coherent_families(const std::string& out_dir) {
    CriterionResult res{9, "coherent-families", false, ""};

    // (a) closed-form precession against the dense matrix exponential.
    std::mt19937 rng(424242u);
    std::uniform_real_distribution<double> u1(-1.0, 1.0);
    auto random_disc = [&](double radius) {
        double x, y;
        do {
            x = u1(rng);
            y = u1(rng);
        } while (x * x + y * y > 1.0);
        return Complex{radius * x, radius * y};
    };

    double min_overlap = 1.0;
    for (int trial = 0; trial < 20; ++trial) {
        spin::SpinCoherentPoint p0;
        p0.z = random_disc(1.4);
        const double a = 2.0 * u1(rng), b = 2.0 * u1(rng);
        const double t = 1.5 * (u1(rng) + 1.0);

        const Eigen::Matrix2cd h = spin::radcliffe_hamiltonian(a, b);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
        Eigen::Vector2cd phases;
        for (int k = 0; k < 2; ++k) {
            phases(k) = std::exp(Complex{0.0, t * es.eigenvalues()(k)});
        }
        const Eigen::Matrix2cd u_t = es.eigenvectors() * phases.asDiagonal() *
                                     es.eigenvectors().adjoint();
        const Eigen::Vector2cd evolved = u_t * spin::radcliffe_state(p0);

        const spin::SpinFlowResult fl = spin::radcliffe_flow(p0, a, b, t);
        const Eigen::Vector2cd recon = spin::radcliffe_state(fl.point);
        min_overlap = std::min(min_overlap, std::norm(evolved.dot(recon)));
    }

    // (b) the coherent family is rigid exactly for the constant mode function.
    const double leak_const =
        fock::f_leakage(Complex{1.0, 0.0}, fock::unit_mode(), 1.0, 0.0, 0.1);
    const fock::ModeFunction sqrt_mode = [](int n) {
        return std::sqrt(static_cast<double>(n));
    };
    const double leak_def =
        fock::f_leakage(Complex{1.0, 0.0}, sqrt_mode, 1.0, 0.0, 0.1);

    // (c) entangled two-mode family: preserved iff the couplings match.
    const Complex z1{0.5, 0.0}, z2{0.5, 0.0};
    const fermi::TwoModeParams equal{0.7, 1.1, 0.4, 1.1};
    const fermi::TwoModeParams skew{0.7, 1.1, 0.4, 0.6};
    const double t_skew = kPi / 2.0;  // (B1 - B2) t = pi/4

    const fermi::TwoModeFlowResult r_eq =
        fermi::two_mode_flow(z1, z2, equal, 1.3, fermi::Fiducial::kEntangled);
    const double def_eq = fermi::entangled_family_deficit(z1, z2, equal, 1.3);
    const fermi::TwoModeFlowResult r_skew =
        fermi::two_mode_flow(z1, z2, skew, t_skew, fermi::Fiducial::kEntangled);
    const double def_skew =
        fermi::entangled_family_deficit(z1, z2, skew, t_skew);

    csv::Table table({"metric", "value"});
    table.add_row(std::vector<std::string>{"precession_min_overlap",
                                           csv::format_double(min_overlap)});
    table.add_row(std::vector<std::string>{"leakage_constant_mode",
                                           csv::format_double(leak_const)});
    table.add_row(std::vector<std::string>{"leakage_sqrt_mode",
                                           csv::format_double(leak_def)});
    table.add_row(std::vector<std::string>{"entangled_deficit_equal",
                                           csv::format_double(def_eq)});
    table.add_row(std::vector<std::string>{"entangled_deficit_skew",
                                           csv::format_double(def_skew)});
    table.write(out_dir + "/" + res.name + ".csv");

    res.passed = min_overlap >= 1.0 - 1e-10 && leak_const <= 1e-8 &&
                 leak_def > 1e-3 && r_eq.family_preserved &&
                 def_eq <= 1e-15 && !r_skew.family_preserved &&
                 def_skew > 1e-6;
    res.detail = "precession overlap 1 - " + num(1.0 - min_overlap) +
                 " (tol 1e-10), leakage const/deformed " + num(leak_const) +
                 " / " + num(leak_def) +
                 " (<= 1e-8 / > 1e-3), entangled deficit equal/skew " +
                 num(def_eq) + " / " + num(def_skew) + " (0 / > 1e-6)";
    return res;
}

// ---------------------------------------------------------------------------
// 10. Tomographic probability dynamics.
// ---------------------------------------------------------------------------
CriterionResult c10_tomographic(const std::string& out_dir) {
    CriterionResult res{10, "tomographic-probabilities", false, ""};

    std::mt19937 rng(31337u);
    std::uniform_real_distribution<double> u1(-1.0, 1.0);
    auto random_disc = [&](double radius) {
        double x, y;
        do {
            x = u1(rng);
            y = u1(rng);
        } while (x * x + y * y > 1.0);
        return Complex{radius * x, radius * y};
    };

    double max_dev = 0.0;
    bool p3_exact = true;
    csv::Table table({"trial", "ode_vs_extraction", "closed_vs_extraction"});
    for (int trial = 0; trial < 20; ++trial) {
        spin::SpinCoherentPoint p0;
        p0.z = random_disc(1.2);
        const double b = 3.0 * u1(rng);
        const double t = 2.0 * (u1(rng) + 1.0);

        const spin::ProbabilityVector pr0 = spin::extract_probabilities(p0);

        // Linear-ODE solution by RK4.
        OdeProblem prob;
        prob.dimension = 3;
        prob.rhs = [b](double, const std::vector<double>& y,
                       std::vector<double>& dydt) {
            dydt[0] = -b * y[1] + 0.5 * b;
            dydt[1] = b * y[0] - 0.5 * b;
            dydt[2] = 0.0;
        };
        prob.y0 = {pr0.p1, pr0.p2, pr0.p3};
        const OdeSolution sol = integrate_rk4(prob, t, 1e-4, 1000000);
        const auto& yf = sol.final_state();

        // Density-matrix extraction along the precessed family.
        const spin::SpinFlowResult fl = spin::radcliffe_flow(p0, 0.0, b, t);
        const spin::ProbabilityVector pr_rho =
            spin::extract_probabilities(fl.point);
        const spin::ProbabilityVector pr_closed =
            spin::tomographic_flow(pr0, b, t);

        const double dev_ode =
            std::max(std::abs(yf[0] - pr_rho.p1),
                     std::max(std::abs(yf[1] - pr_rho.p2),
                              std::abs(yf[2] - pr_rho.p3)));
        const double dev_closed =
            std::max(std::abs(pr_closed.p1 - pr_rho.p1),
                     std::max(std::abs(pr_closed.p2 - pr_rho.p2),
                              std::abs(pr_closed.p3 - pr_rho.p3)));
        max_dev = std::max(max_dev, std::max(dev_ode, dev_closed));
        p3_exact = p3_exact && yf[2] == pr0.p3 && pr_closed.p3 == pr0.p3;
        table.add_row(std::vector<double>{static_cast<double>(trial), dev_ode,
                                          dev_closed});
    }
    table.write(out_dir + "/" + res.name + ".csv");

    res.passed = max_dev <= 1e-8 && p3_exact;
    res.detail = "probability deviation " + num(max_dev) +
                 " (tol 1e-8, 20 trials), p3 bitwise constant: " +
                 (p3_exact ? "yes" : "NO");
    return res;
}

// ---------------------------------------------------------------------------
// 11. Grassmann algebra exactness.
// ---------------------------------------------------------------------------
CriterionResult c11_grassmann(const std::string& out_dir) {
    CriterionResult res{11, "grassmann-algebra", false, ""};
    using grassmann::GrassmannElement;

    bool nilpotent = true, anticommute = true;
    std::vector<GrassmannElement> gen;
    for (int i = 0; i < 4; ++i) gen.push_back(GrassmannElement::generator(4, i));
    for (int i = 0; i < 4; ++i) {
        nilpotent = nilpotent && (gen[i] * gen[i]).is_zero();
        for (int j = i + 1; j < 4; ++j) {
            anticommute =
                anticommute && (gen[i] * gen[j] + gen[j] * gen[i]).is_zero();
        }
    }

    const bool brackets = grassmann::super_bracket(1, 1) == 1.0 &&
                          grassmann::super_bracket(2, 2) == 1.0 &&
                          grassmann::super_bracket(1, 2) == 0.0;

    // Coherent expansion, compared coefficient for coefficient against
    // independently constructed products.
    const auto state = grassmann::super_coherent_state();
    const GrassmannElement top_expected = grassmann::eta() * grassmann::xi();
    const GrassmannElement bottom_expected =
        GrassmannElement::unit(4) -
        grassmann::super_radius_squared() * Complex{0.5, 0.0};
    auto exact_equal = [](const GrassmannElement& a, const GrassmannElement& b) {
        for (unsigned mask = 0; mask < 16u; ++mask) {
            if (a.coefficient(mask) != b.coefficient(mask)) return false;
        }
        return true;
    };
    const bool expansion = exact_equal(state.top, top_expected) &&
                           exact_equal(state.bottom, bottom_expected);

    csv::Table table({"metric", "value"});
    table.add_row(std::vector<std::string>{"nilpotency_exact",
                                           nilpotent ? "1" : "0"});
    table.add_row(std::vector<std::string>{"anticommutativity_exact",
                                           anticommute ? "1" : "0"});
    table.add_row(std::vector<std::string>{"brackets_1_1_0",
                                           brackets ? "1" : "0"});
    table.add_row(std::vector<std::string>{"coherent_expansion_exact",
                                           expansion ? "1" : "0"});
    table.write(out_dir + "/" + res.name + ".csv");

    res.passed = nilpotent && anticommute && brackets && expansion;
    res.detail = std::string("nilpotency ") + (nilpotent ? "exact" : "BROKEN") +
                 ", anticommutativity " + (anticommute ? "exact" : "BROKEN") +
                 ", brackets {1,1,0} " + (brackets ? "exact" : "BROKEN") +
                 ", coherent expansion " + (expansion ? "exact" : "BROKEN");
    return res;
}

// ---------------------------------------------------------------------------
// 12. Qubit relaxation channel.
// ---------------------------------------------------------------------------
CriterionResult c12_gkls(const std::string& out_dir) {
    CriterionResult res{12, "gkls-channel", false, ""};
    using gkls::BlochState;

    bool trace_exact = true;
    double min_eig = 1.0;
    for (int i = 0; i < 20; ++i) {
        const double u = (i + 0.5) / 20.0;
        const double theta = kPi * u;
        const double phi = 2.0 * kPi * std::fmod(3.7 * i + 0.21, 1.0);
        const double radius = (i % 4 == 0) ? 1.0 : u;
        const BlochState p{radius * std::sin(theta) * std::cos(phi),
                           radius * std::sin(theta) * std::sin(phi),
                           radius * std::cos(theta)};
        for (int k = 0; k < 20; ++k) {
            const double t = 0.2 * static_cast<double>(k);
            const Eigen::Matrix2cd rho =
                gkls::density_matrix(gkls::gkls_flow(p, 0.9, t));
            trace_exact =
                trace_exact && ((rho(0, 0) + rho(1, 1)) == Complex{1.0, 0.0});
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho);
            min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
        }
    }

    bool equatorial_exact = true;
    for (double t : {0.3, 1.7, 9.0}) {
        equatorial_exact =
            equatorial_exact &&
            gkls::gkls_flow(BlochState{0.6, -0.4, 0.0}, 1.3, t).z == 0.0;
    }

    const BlochState r0{0.31, -0.42, 0.55};
    const BlochState late = gkls::gkls_flow(r0, 1.0, 20.0);
    const double limit_gap = std::max(
        std::abs(late.x - 0.5 * r0.x),
        std::max(std::abs(late.y - 0.5 * r0.y), std::abs(late.z)));

    scenario::Scenario s = base_scenario(res.name, "gkls", "restricted");
    s.dt = 1e-2;
    s.t_end = 5.0;
    s.stride = 10;
    s.params = json{{"decay", 1.0}, {"x0", 0.6}, {"y0", -0.2}, {"z0", 0.0}};
    scenario::run_scenario(s, out_dir);

    res.passed = trace_exact && min_eig >= -1e-12 && equatorial_exact &&
                 limit_gap <= 1e-8;
    res.detail = std::string("trace exactly 1: ") +
                 (trace_exact ? "yes" : "NO") + ", min eigenvalue " +
                 num(min_eig) + " (>= -1e-12), equatorial invariance exact: " +
                 (equatorial_exact ? "yes" : "NO") + ", long-time gap " +
                 num(limit_gap) + " (tol 1e-8)";
    return res;
}

// ---------------------------------------------------------------------------
// 13. Determinism of the batch tooling.
// ---------------------------------------------------------------------------
CriterionResult c13_determinism(const std::string& out_dir) {
    CriterionResult res{13, "determinism", false, ""};

    auto run_pair = [&](const scenario::Scenario& s) {
        scenario::Scenario sa = s, sb = s;
        const scenario::RunOutputs a =
            scenario::run_scenario(sa, out_dir + "/determinism-a");
        const scenario::RunOutputs b =
            scenario::run_scenario(sb, out_dir + "/determinism-b");
        const std::string body_a = read_file(a.csv_path);
        const std::string body_b = read_file(b.csv_path);
        const bool same_csv = !body_a.empty() && body_a == body_b;
        const bool same_report =
            read_file(a.report_path) == read_file(b.report_path);
        return std::pair<bool, std::size_t>{same_csv && same_report,
                                            body_a.size()};
    };

    scenario::Scenario s1 = base_scenario("free-compare", "free", "compare");
    s1.dt = 1e-3;
    s1.t_end = 0.5;
    s1.stride = 10;

    scenario::Scenario s2 = base_scenario("gkls-equatorial", "gkls", "restricted");
    s2.dt = 1e-2;
    s2.t_end = 2.0;
    s2.stride = 10;
    s2.params = json{{"decay", 1.0}, {"x0", 0.5}, {"y0", 0.3}, {"z0", 0.0}};

    const auto [ok1, bytes1] = run_pair(s1);
    const auto [ok2, bytes2] = run_pair(s2);

    // The z column of the equatorial scenario must be identically zero.
    bool z_zero = true;
    {
        std::ifstream csv_in(out_dir + "/determinism-a/gkls-equatorial.csv");
        std::string line;
        std::getline(csv_in, line);  // header: t,x,y,z,min_eigenvalue
        while (std::getline(csv_in, line)) {
            std::size_t pos = 0;
            for (int comma = 0; comma < 3; ++comma) {
                pos = line.find(',', pos) + 1;
            }
            const std::size_t end = line.find(',', pos);
            z_zero = z_zero && line.substr(pos, end - pos) == "0";
        }
    }

    res.passed = ok1 && ok2 && z_zero;
    res.detail = std::string("repeated runs byte-identical: ") +
                 ((ok1 && ok2) ? "yes" : "NO") + " (" +
                 std::to_string(bytes1 + bytes2) +
                 " CSV bytes compared), equatorial z column literally \"0\": " +
                 (z_zero ? "yes" : "NO");
    return res;
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries{
        {1, "free-closed-form",
         "free Gaussian reduction against the closed-form solution",
         &c1_free_closed_form},
        {2, "harmonic-closed-form",
         "harmonic Gaussian reduction against closed forms and linearizing "
         "invariants",
         &c2_harmonic_closed_form},
        {3, "small-frequency-limit",
         "harmonic closed form degenerates to free motion as omega -> 0",
         &c3_small_frequency_limit},
        {4, "invariant-manifold-fidelity",
         "grid propagation stays on the Gaussian manifold (free and harmonic)",
         &c4_invariant_manifold},
        {5, "engine-closed-form-agreement",
         "numerical two-form and reduced fields match the closed-form "
         "Gaussian geometry",
         &c5_engine_agreement},
        {6, "gauge-kernel",
         "two-dimensional gauge kernel along the normalization and phase "
         "directions",
         &c6_gauge_kernel},
        {7, "darboux-integrability",
         "canonical Darboux chart and conserved quantities under the "
         "symplectic integrator",
         &c7_darboux},
        {8, "anharmonic-variational",
         "quartic dynamics: energy conservation, improvement over the frozen "
         "state, loss of invariance",
         &c8_anharmonic},
        {9, "coherent-families",
         "two-level precession, mode-function rigidity, entangled two-mode "
         "family preservation",
         &c9_coherent_families},
        {10, "tomographic-probabilities",
         "probability-vector ODE agrees with density-matrix extraction",
         &c10_tomographic},
        {11, "grassmann-algebra",
         "exterior-algebra identities, symmetric brackets, coherent expansion",
         &c11_grassmann},
        {12, "gkls-channel",
         "qubit relaxation: trace, positivity, equatorial invariance, "
         "long-time limit",
         &c12_gkls},
        {13, "determinism",
         "repeated scenario runs produce byte-identical CSV bodies",
         &c13_determinism},
    };
    return entries;
}

bool run_all(const std::string& out_dir, std::ostream& out) {
    const auto start = std::chrono::steady_clock::now();
    bool all_passed = true;
    for (const CatalogEntry& entry : catalog()) {
        CriterionResult r;
        try {
            r = entry.run(out_dir);
        } catch (const std::exception& e) {
            r = CriterionResult{entry.index, entry.name, false,
                                std::string("exception: ") + e.what()};
        }
        all_passed = all_passed && r.passed;
        char head[64];
        std::snprintf(head, sizeof(head), "criterion %2d: %s ", r.index,
                      r.passed ? "PASS" : "FAIL");
        out << head << "[" << r.name << "] " << r.detail << "\n";
    }
    char tail[128];
    std::snprintf(tail, sizeof(tail), "%s: 13 criteria in %.1f s\n",
                  all_passed ? "ALL PASSED" : "FAILURES PRESENT",
                  seconds_since(start));
    out << tail;
    return all_passed;
}

}  // namespace varq::acceptance
