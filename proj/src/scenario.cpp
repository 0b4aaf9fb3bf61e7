#include "varq/scenario.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "varq/common.hpp"
#include "varq/csv.hpp"
#include "varq/engine.hpp"
#include "varq/fermi.hpp"
#include "varq/fock.hpp"
#include "varq/gaussian.hpp"
#include "varq/gkls.hpp"
#include "varq/grassmann.hpp"
#include "varq/grid.hpp"
#include "varq/immersion.hpp"
#include "varq/ode.hpp"
#include "varq/spin.hpp"

namespace varq::scenario {

namespace {

using nlohmann::json;
using gaussian::GaussianParams;
using gaussian::ModelParams;

// ---------------------------------------------------------------------------
// Field extraction with defaults echoed into `resolved`.
// ---------------------------------------------------------------------------

[[noreturn]] void missing_field(const std::string& field, const std::string& model) {
    throw ConfigError("missing required field \"" + field + "\" for model \"" +
                      model + "\"");
}

double require_number(const json& p, const std::string& field,
                      const std::string& model, json& resolved) {
    if (!p.contains(field)) missing_field(field, model);
    if (!p.at(field).is_number()) {
        throw ConfigError("field \"" + field + "\" must be a number");
    }
    const double v = p.at(field).get<double>();
    resolved[field] = v;
    return v;
}

double number_or(const json& p, const std::string& field, double dflt,
                 json& resolved) {
    double v = dflt;
    if (p.contains(field)) {
        if (!p.at(field).is_number()) {
            throw ConfigError("field \"" + field + "\" must be a number");
        }
        v = p.at(field).get<double>();
    }
    resolved[field] = v;
    return v;
}

int int_or(const json& p, const std::string& field, int dflt, json& resolved) {
    int v = dflt;
    if (p.contains(field)) {
        if (!p.at(field).is_number_integer()) {
            throw ConfigError("field \"" + field + "\" must be an integer");
        }
        v = p.at(field).get<int>();
    }
    resolved[field] = v;
    return v;
}

std::string string_or(const json& p, const std::string& field,
                      const std::string& dflt, json& resolved) {
    std::string v = dflt;
    if (p.contains(field)) {
        if (!p.at(field).is_string()) {
            throw ConfigError("field \"" + field + "\" must be a string");
        }
        v = p.at(field).get<std::string>();
    }
    resolved[field] = v;
    return v;
}

// Every configured parameter must have been consumed (and echoed) by the
// model runner; anything else is a typo worth failing on.
void reject_unknown_params(const json& params, const json& resolved,
                           const std::string& model) {
    for (const auto& item : params.items()) {
        if (!resolved.contains(item.key())) {
            throw ConfigError("unknown parameter \"" + item.key() +
                              "\" for model \"" + model + "\"");
        }
    }
}

// ---------------------------------------------------------------------------
// Shared pieces.
// ---------------------------------------------------------------------------

struct ScenarioProduct {
    csv::Table table;
    json params = json::object();       // resolved, defaults included
    json diagnostics = json::object();
};

std::function<double(double)> potential_for(const ModelParams& m) {
    return [m](double x) {
        return 0.5 * m.omega * m.omega * x * x + 0.5 * m.lambda * x * x * x * x;
    };
}

// Sample instants 0, dt*stride, 2 dt*stride, ..., t_end (the same pattern the
// fixed-step integrators store).
std::vector<double> sample_times(double dt, double t_end, int stride) {
    const double interval = dt * static_cast<double>(stride);
    std::vector<double> ts{0.0};
    long long k = 1;
    double t = interval;
    while (t < t_end - 0.5 * dt) {
        ts.push_back(t);
        ++k;
        t = interval * static_cast<double>(k);
    }
    if (t_end > 0.0) ts.push_back(t_end);
    return ts;
}

GaussianParams initial_gaussian(const json& p, json& resolved) {
    GaussianParams g;
    g.a_R = number_or(p, "a_R", 0.5, resolved);
    g.a_I = number_or(p, "a_I", 0.0, resolved);
    g.b_R = number_or(p, "b_R", 0.3, resolved);
    g.b_I = number_or(p, "b_I", 0.2, resolved);
    g.c_R = number_or(p, "c_R", 0.0, resolved);
    g.c_I = number_or(p, "c_I", 0.0, resolved);
    gaussian::validate(g);
    return g;
}

grid::SpatialGrid grid_from(const json& p, json& resolved, double x_min_d,
                            double x_max_d, int points_d) {
    grid::SpatialGrid g;
    g.x_min = number_or(p, "x_min", x_min_d, resolved);
    g.x_max = number_or(p, "x_max", x_max_d, resolved);
    g.n_points = static_cast<std::size_t>(
        int_or(p, "grid_points", points_d, resolved));
    grid::validate(g);
    return g;
}

// ---------------------------------------------------------------------------
// Gaussian models (free / harmonic / anharmonic).
// ---------------------------------------------------------------------------

ScenarioProduct run_gaussian(const Scenario& s) {
    json resolved = json::object();
    const GaussianParams p0 = initial_gaussian(s.params, resolved);

    ModelParams m;
    if (s.model == "harmonic" || s.model == "anharmonic") {
        m.omega = require_number(s.params, "omega", s.model, resolved);
    }
    if (s.model == "anharmonic") {
        m.lambda = require_number(s.params, "lambda", s.model, resolved);
    }
    gaussian::validate(m);
    const bool has_c = (s.model != "anharmonic");

    auto energy_of = [&m](const std::vector<double>& y) {
        const GaussianParams g{y[0], y[1], y[2], y[3], 0.0, 0.0};
        return gaussian::anharmonic_energy(g, m);
    };

    auto make_problem = [&]() {
        if (s.model == "free") return gaussian::make_free_problem(p0);
        if (s.model == "harmonic") return gaussian::make_harmonic_problem(p0, m);
        return gaussian::make_anharmonic_problem(p0, m);
    };

    if (s.method == "restricted") {
        const OdeSolution sol = integrate_rk4(make_problem(), s.t_end, s.dt,
                                              static_cast<std::size_t>(s.stride));
        std::vector<std::string> cols{"t", "a_R", "a_I", "b_R", "b_I"};
        if (has_c) {
            cols.push_back("c_R");
            cols.push_back("c_I");
        }
        cols.push_back("energy");
        ScenarioProduct out{csv::Table{cols}, resolved};

        const double e0 = energy_of(sol.states.front());
        double drift = 0.0;
        for (std::size_t i = 0; i < sol.times.size(); ++i) {
            const auto& y = sol.states[i];
            const double e = energy_of(y);
            drift = std::max(drift, std::abs(e - e0));
            std::vector<double> row{sol.times[i], y[0], y[1], y[2], y[3]};
            if (has_c) {
                row.push_back(y[4]);
                row.push_back(y[5]);
            }
            row.push_back(e);
            out.table.add_row(row);
        }
        out.diagnostics["energy_drift"] = drift;
        out.diagnostics["samples"] = sol.times.size();
        return out;
    }

    if (s.method == "grid") {
        const grid::SpatialGrid g = grid_from(s.params, resolved, -20.0, 20.0, 2048);
        const grid::GridWavefunction psi0 =
            grid::sample_gaussian(g, p0).normalized();
        const grid::EvolveResult ev =
            grid::split_step_evolve(psi0, potential_for(m), s.dt, s.t_end,
                                    static_cast<std::size_t>(s.stride));
        ScenarioProduct out{csv::Table{{"t", "norm", "mean_x", "mean_x2"}}, resolved};
        for (std::size_t i = 0; i < ev.times.size(); ++i) {
            const auto& psi = ev.states[i];
            out.table.add_row({ev.times[i], std::sqrt(psi.norm_squared()),
                               grid::mean_x(psi), grid::mean_x2(psi)});
        }
        out.diagnostics["boundary_warnings"] = ev.warnings.size();
        out.diagnostics["final_norm"] =
            std::sqrt(ev.states.back().norm_squared());
        return out;
    }

    if (s.method == "compare") {
        const grid::SpatialGrid g = grid_from(s.params, resolved, -20.0, 20.0, 2048);
        const OdeSolution sol = integrate_rk4(make_problem(), s.t_end, s.dt,
                                              static_cast<std::size_t>(s.stride));
        const grid::GridWavefunction psi0 =
            grid::sample_gaussian(g, p0).normalized();
        const grid::EvolveResult ev =
            grid::split_step_evolve(psi0, potential_for(m), s.dt, s.t_end,
                                    static_cast<std::size_t>(s.stride));
        if (ev.times.size() != sol.times.size()) {
            throw std::runtime_error(
                "compare: grid and reduced trajectories sampled differently");
        }

        std::vector<std::string> cols{"t", "a_R", "a_I", "b_R", "b_I"};
        if (has_c) {
            cols.push_back("c_R");
            cols.push_back("c_I");
        }
        cols.push_back("fidelity");
        ScenarioProduct out{csv::Table{cols}, resolved};

        double min_f = 1.0;
        for (std::size_t i = 0; i < sol.times.size(); ++i) {
            if (std::abs(sol.times[i] - ev.times[i]) > 1e-9) {
                throw std::runtime_error("compare: sample times misaligned");
            }
            const auto& y = sol.states[i];
            const GaussianParams pt{y[0], y[1], y[2], y[3],
                                    has_c ? y[4] : 0.0, has_c ? y[5] : 0.0};
            const double f = grid::fidelity(ev.states[i].normalized(), pt);
            min_f = std::min(min_f, f);
            std::vector<double> row{sol.times[i], y[0], y[1], y[2], y[3]};
            if (has_c) {
                row.push_back(y[4]);
                row.push_back(y[5]);
            }
            row.push_back(f);
            out.table.add_row(row);
        }
        out.diagnostics["min_fidelity"] = min_f;
        const double frozen =
            grid::fidelity(ev.states.back().normalized(), p0);
        out.diagnostics["frozen_final_fidelity"] = frozen;
        out.diagnostics["boundary_warnings"] = ev.warnings.size();
        return out;
    }

    // lagrangian: drive the generic reduction engine on the (a, b) chart.
    const grid::SpatialGrid g = grid_from(s.params, resolved, -12.0, 12.0, 512);
    const engine::Immersion im = engine::gaussian_grid_immersion_ab(g);
    const engine::HamiltonianAction ham =
        engine::grid_hamiltonian(g, potential_for(m), s.model);
    const engine::ReducedTrajectory traj = engine::integrate_reduced(
        im, ham, {p0.a_R, p0.a_I, p0.b_R, p0.b_I}, s.dt, s.t_end, {},
        static_cast<std::size_t>(s.stride));

    ScenarioProduct out{
        csv::Table{{"t", "a_R", "a_I", "b_R", "b_I", "energy", "kernel_dim"}},
        resolved};
    double drift = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& y = traj.points[i];
        drift = std::max(drift, std::abs(traj.energies[i] - traj.energies[0]));
        out.table.add_row({traj.times[i], y[0], y[1], y[2], y[3],
                           traj.energies[i],
                           static_cast<double>(traj.kernel_dims[i])});
    }
    out.diagnostics["energy_drift"] = drift;
    out.diagnostics["max_solve_residual"] = traj.max_residual;
    return out;
}

// ---------------------------------------------------------------------------
// Two-level precession.
// ---------------------------------------------------------------------------

ScenarioProduct run_radcliffe(const Scenario& s) {
    json resolved = json::object();
    const double a = number_or(s.params, "coupling_a", 0.0, resolved);
    const double b = require_number(s.params, "coupling_b", s.model, resolved);
    spin::SpinCoherentPoint p0;
    p0.z = Complex{number_or(s.params, "z_R", 0.3, resolved),
                   number_or(s.params, "z_I", 0.0, resolved)};

    if (s.method == "restricted") {
        ScenarioProduct out{
            csv::Table{{"t", "theta", "phi", "p1", "p2", "p3", "phase"}}, resolved};
        for (double t : sample_times(s.dt, s.t_end, s.stride)) {
            const spin::SpinFlowResult r = spin::radcliffe_flow(p0, a, b, t);
            const spin::ProbabilityVector pr = spin::extract_probabilities(r.point);
            out.table.add_row({t, r.point.theta(), r.point.phi(), pr.p1, pr.p2,
                               pr.p3, r.phase});
        }
        out.diagnostics["radius"] = std::abs(p0.z);
        return out;
    }

    if (s.method == "compare") {
        const Eigen::Vector2cd psi0 = spin::radcliffe_state(p0);
        const double w_up = 0.5 * (a + b), w_dn = 0.5 * (a - b);
        ScenarioProduct out{csv::Table{{"t", "theta", "phi", "overlap"}}, resolved};
        double min_ov = 1.0;
        for (double t : sample_times(s.dt, s.t_end, s.stride)) {
            Eigen::Vector2cd evolved;  // exp(+i t H) psi0 with diagonal H
            evolved(0) = std::exp(Complex{0.0, t * w_up}) * psi0(0);
            evolved(1) = std::exp(Complex{0.0, t * w_dn}) * psi0(1);
            const spin::SpinFlowResult r = spin::radcliffe_flow(p0, a, b, t);
            const Eigen::Vector2cd recon = spin::radcliffe_state(r.point);
            const double ov = std::norm(evolved.dot(recon));
            min_ov = std::min(min_ov, ov);
            out.table.add_row({t, r.point.theta(), r.point.phi(), ov});
        }
        out.diagnostics["min_overlap"] = min_ov;
        return out;
    }

    // lagrangian: generic engine on the (theta, phi) chart of the sphere;
    // this chart carries e^{-i phi} on the excited component, so its phi is
    // the negative of the spin-label phase.  The probability columns are
    // chart-independent.
    const engine::Immersion im = engine::two_level_immersion();
    const engine::HamiltonianAction ham = engine::two_level_field_hamiltonian(b);
    const double theta0 = p0.theta();
    const double phi0 = -p0.phi();
    const engine::ReducedTrajectory traj = engine::integrate_reduced(
        im, ham, {theta0, phi0}, s.dt, s.t_end, {},
        static_cast<std::size_t>(s.stride));

    ScenarioProduct out{
        csv::Table{{"t", "theta", "phi", "p1", "p2", "p3", "energy"}}, resolved};
    double theta_drift = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double th = traj.points[i][0], ph = traj.points[i][1];
        theta_drift = std::max(theta_drift, std::abs(th - theta0));
        const ComplexVector v = im.evaluate({th, ph});
        Eigen::Matrix2cd rho;
        rho(0, 0) = std::norm(v[0]);
        rho(0, 1) = v[0] * std::conj(v[1]);
        rho(1, 0) = std::conj(rho(0, 1));
        rho(1, 1) = std::norm(v[1]);
        const spin::ProbabilityVector pr = spin::extract_probabilities(rho);
        out.table.add_row(
            {traj.times[i], th, ph, pr.p1, pr.p2, pr.p3, traj.energies[i]});
    }
    out.diagnostics["theta_drift"] = theta_drift;
    out.diagnostics["max_solve_residual"] = traj.max_residual;
    return out;
}

// ---------------------------------------------------------------------------
// Oscillator families on the truncated Fock space.
// ---------------------------------------------------------------------------

ScenarioProduct run_bosonic(const Scenario& s) {
    json resolved = json::object();
    const double a = require_number(s.params, "coupling_a", s.model, resolved);
    const double b = number_or(s.params, "coupling_b", 0.0, resolved);
    const Complex z0{number_or(s.params, "z_R", 1.0, resolved),
                     number_or(s.params, "z_I", 0.0, resolved)};
    const int cutoff = int_or(s.params, "cutoff", fock::kDefaultCutoff, resolved);

    if (s.method == "restricted") {
        ScenarioProduct out{csv::Table{{"t", "z_R", "z_I", "phase"}}, resolved};
        for (double t : sample_times(s.dt, s.t_end, s.stride)) {
            const fock::FlowResult r = fock::bosonic_flow(z0, a, b, t);
            out.table.add_row({t, r.z.real(), r.z.imag(), r.phase});
        }
        out.diagnostics["radius"] = std::abs(z0);
        return out;
    }

    // compare: diagonal evolution in the truncated Fock space against the
    // reconstructed coherent state of the transported label.
    const fock::FockState psi0 = fock::bosonic_coherent_state(z0, cutoff);
    const std::vector<double> energies =
        fock::f_oscillator_energies(fock::unit_mode(), a, b, cutoff);
    ScenarioProduct out{csv::Table{{"t", "z_R", "z_I", "overlap"}}, resolved};
    double min_ov = 1.0;
    for (double t : sample_times(s.dt, s.t_end, s.stride)) {
        const fock::FockState evolved = fock::evolve_diagonal(psi0, energies, t);
        const fock::FlowResult r = fock::bosonic_flow(z0, a, b, t);
        const fock::FockState recon = fock::bosonic_coherent_state(r.z, cutoff);
        const double ov = std::norm(fock::overlap(evolved, recon));
        min_ov = std::min(min_ov, ov);
        out.table.add_row({t, r.z.real(), r.z.imag(), ov});
    }
    out.diagnostics["min_overlap"] = min_ov;
    return out;
}

fock::ModeFunction mode_from(const json& p, json& resolved) {
    const double fl = number_or(p, "f_lambda", 0.0, resolved);
    const double fa = number_or(p, "f_alpha", 1.0, resolved);
    const double fg = number_or(p, "f_gamma", 0.0, resolved);
    const double fd = number_or(p, "f_delta", 1.0, resolved);
    const int cutoff = resolved.at("cutoff").get<int>();
    for (int n = 1; n <= cutoff; ++n) {
        const double num = fl * n + fa;
        const double den = fg * n + fd;
        if (!(num > 0.0) || !(den > 0.0)) {
            throw ConfigError(
                "fields f_lambda/f_alpha/f_gamma/f_delta must keep "
                "f(n) = sqrt((f_lambda n + f_alpha)/(f_gamma n + f_delta)) "
                "positive for n = 1.." +
                std::to_string(cutoff));
        }
    }
    return [fl, fa, fg, fd](int n) {
        return std::sqrt((fl * n + fa) / (fg * n + fd));
    };
}

ScenarioProduct run_f_oscillator(const Scenario& s) {
    json resolved = json::object();
    const double a = require_number(s.params, "coupling_a", s.model, resolved);
    const double b = number_or(s.params, "coupling_b", 0.0, resolved);
    const Complex z0{number_or(s.params, "z_R", 1.0, resolved),
                     number_or(s.params, "z_I", 0.0, resolved)};
    const int cutoff = int_or(s.params, "cutoff", fock::kDefaultCutoff, resolved);
    const fock::ModeFunction f = mode_from(s.params, resolved);

    if (s.method == "restricted") {
        ScenarioProduct out{csv::Table{{"t", "leakage"}}, resolved};
        double max_leak = 0.0;
        for (double t : sample_times(s.dt, s.t_end, s.stride)) {
            const double leak = fock::f_leakage(z0, f, a, b, t, cutoff);
            max_leak = std::max(max_leak, leak);
            out.table.add_row({t, leak});
        }
        out.diagnostics["max_leakage"] = max_leak;
        return out;
    }

    // compare: the constant mode function against the configured one.
    ScenarioProduct out{
        csv::Table{{"t", "leakage_constant", "leakage_deformed"}}, resolved};
    double max_const = 0.0, max_def = 0.0;
    for (double t : sample_times(s.dt, s.t_end, s.stride)) {
        const double lc = fock::f_leakage(z0, fock::unit_mode(), a, b, t, cutoff);
        const double ld = fock::f_leakage(z0, f, a, b, t, cutoff);
        max_const = std::max(max_const, lc);
        max_def = std::max(max_def, ld);
        out.table.add_row({t, lc, ld});
    }
    out.diagnostics["max_leakage_constant"] = max_const;
    out.diagnostics["max_leakage_deformed"] = max_def;
    return out;
}

ScenarioProduct run_cat(const Scenario& s) {
    json resolved = json::object();
    const double a = require_number(s.params, "coupling_a", s.model, resolved);
    const double b = number_or(s.params, "coupling_b", 0.0, resolved);
    const Complex z0{number_or(s.params, "z_R", 1.5, resolved),
                     number_or(s.params, "z_I", 0.0, resolved)};
    const int parity = int_or(s.params, "parity", 1, resolved);
    if (parity != 1 && parity != -1) {
        throw ConfigError("field \"parity\" must be +1 or -1");
    }
    const int cutoff = int_or(s.params, "cutoff", fock::kDefaultCutoff, resolved);

    const fock::FockState psi0 = fock::cat_state(z0, parity, cutoff);
    const std::vector<double> energies =
        fock::f_oscillator_energies(fock::unit_mode(), a, b, cutoff);
    ScenarioProduct out{csv::Table{{"t", "z_R", "z_I", "overlap"}}, resolved};
    double min_ov = 1.0;
    for (double t : sample_times(s.dt, s.t_end, s.stride)) {
        const fock::FockState evolved = fock::evolve_diagonal(psi0, energies, t);
        const fock::FlowResult r = fock::bosonic_flow(z0, a, b, t);
        const fock::FockState recon = fock::cat_state(r.z, parity, cutoff);
        const double ov = std::norm(fock::overlap(evolved, recon));
        min_ov = std::min(min_ov, ov);
        out.table.add_row({t, r.z.real(), r.z.imag(), ov});
    }
    out.diagnostics["min_overlap"] = min_ov;
    return out;
}

// ---------------------------------------------------------------------------
// Two-mode fermionic family.
// ---------------------------------------------------------------------------

ScenarioProduct run_fermi2(const Scenario& s) {
    json resolved = json::object();
    fermi::TwoModeParams tp;
    tp.a1 = require_number(s.params, "a1", s.model, resolved);
    tp.b1 = require_number(s.params, "b1", s.model, resolved);
    tp.a2 = require_number(s.params, "a2", s.model, resolved);
    tp.b2 = require_number(s.params, "b2", s.model, resolved);
    const Complex z10{number_or(s.params, "z1_R", 0.5, resolved),
                      number_or(s.params, "z1_I", 0.0, resolved)};
    const Complex z20{number_or(s.params, "z2_R", 0.5, resolved),
                      number_or(s.params, "z2_I", 0.0, resolved)};
    const std::string fid_name =
        string_or(s.params, "fiducial", "vacuum", resolved);
    fermi::Fiducial fid;
    if (fid_name == "vacuum") {
        fid = fermi::Fiducial::kVacuum;
    } else if (fid_name == "entangled") {
        fid = fermi::Fiducial::kEntangled;
    } else {
        throw ConfigError(
            "field \"fiducial\" must be \"vacuum\" or \"entangled\"");
    }

    if (s.method == "restricted") {
        ScenarioProduct out{csv::Table{{"t", "z1_R", "z1_I", "z2_R", "z2_I",
                                        "phase", "preserved"}},
                            resolved};
        bool preserved = true;
        for (double t : sample_times(s.dt, s.t_end, s.stride)) {
            const fermi::TwoModeFlowResult r =
                fermi::two_mode_flow(z10, z20, tp, t, fid);
            preserved = preserved && r.family_preserved;
            out.table.add_row({t, r.z1.real(), r.z1.imag(), r.z2.real(),
                               r.z2.imag(), r.phase,
                               r.family_preserved ? 1.0 : 0.0});
        }
        out.diagnostics["family_preserved"] = preserved;
        return out;
    }

    // compare: evolve with the (diagonal) Hamiltonian and measure how much of
    // the state escapes the reconstructed family member.
    const Eigen::Vector4cd psi0 = fermi::two_mode_state(z10, z20, fid);
    const Eigen::Matrix4cd h = fermi::two_mode_hamiltonian(tp);
    ScenarioProduct out{
        csv::Table{{"t", "z1_R", "z1_I", "z2_R", "z2_I", "deficit"}}, resolved};
    double max_def = 0.0;
    for (double t : sample_times(s.dt, s.t_end, s.stride)) {
        Eigen::Vector4cd evolved;  // exp(+i t H) with H diagonal
        for (int k = 0; k < 4; ++k) {
            evolved(k) = std::exp(Complex{0.0, t * h(k, k).real()}) * psi0(k);
        }
        const fermi::TwoModeFlowResult r =
            fermi::two_mode_flow(z10, z20, tp, t, fid);
        const Eigen::Vector4cd recon = fermi::two_mode_state(r.z1, r.z2, fid);
        const double deficit = 1.0 - std::norm(evolved.dot(recon));
        max_def = std::max(max_def, deficit);
        out.table.add_row(
            {t, r.z1.real(), r.z1.imag(), r.z2.real(), r.z2.imag(), deficit});
    }
    out.diagnostics["max_deficit"] = max_def;
    if (fid == fermi::Fiducial::kEntangled) {
        out.diagnostics["final_deficit_bound"] =
            fermi::entangled_family_deficit(z10, z20, tp, s.t_end);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Grassmann rotation and the qubit relaxation channel.
// ---------------------------------------------------------------------------

ScenarioProduct run_grassmann(const Scenario& s) {
    json resolved = json::object();
    const double a = require_number(s.params, "coupling_a", s.model, resolved);
    const double xi1 = number_or(s.params, "xi1", 0.7, resolved);
    const double xi2 = number_or(s.params, "xi2", -0.3, resolved);

    ScenarioProduct out{csv::Table{{"t", "xi1", "xi2", "radius"}}, resolved};
    const double r0 = std::hypot(xi1, xi2);
    double drift = 0.0;
    for (double t : sample_times(s.dt, s.t_end, s.stride)) {
        const auto r = grassmann::super_reduced_flow(xi1, xi2, a, t);
        const double rad = std::hypot(r.first, r.second);
        drift = std::max(drift, std::abs(rad - r0));
        out.table.add_row({t, r.first, r.second, rad});
    }
    out.diagnostics["radius_drift"] = drift;
    return out;
}

ScenarioProduct run_gkls(const Scenario& s) {
    json resolved = json::object();
    const double decay = require_number(s.params, "decay", s.model, resolved);
    gkls::BlochState r0;
    r0.x = number_or(s.params, "x0", 0.5, resolved);
    r0.y = number_or(s.params, "y0", 0.0, resolved);
    r0.z = number_or(s.params, "z0", 0.5, resolved);

    ScenarioProduct out{csv::Table{{"t", "x", "y", "z", "min_eigenvalue"}},
                        resolved};
    double min_eig = 1.0;
    bool trace_exact = true;
    for (double t : sample_times(s.dt, s.t_end, s.stride)) {
        const gkls::BlochState r = gkls::gkls_flow(r0, decay, t);
        const Eigen::Matrix2cd rho = gkls::density_matrix(r);
        trace_exact = trace_exact && ((rho(0, 0) + rho(1, 1)) == Complex{1.0, 0.0});
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(rho);
        const double lo = es.eigenvalues().minCoeff();
        min_eig = std::min(min_eig, lo);
        out.table.add_row({t, r.x, r.y, r.z, lo});
    }
    out.diagnostics["min_eigenvalue"] = min_eig;
    out.diagnostics["trace_exact"] = trace_exact;
    return out;
}

// ---------------------------------------------------------------------------
// Dispatch.
// ---------------------------------------------------------------------------

const std::map<std::string, std::vector<std::string>>& supported_methods() {
    static const std::map<std::string, std::vector<std::string>> table{
        {"free", {"restricted", "lagrangian", "grid", "compare"}},
        {"harmonic", {"restricted", "lagrangian", "grid", "compare"}},
        {"anharmonic", {"restricted", "lagrangian", "grid", "compare"}},
        {"radcliffe", {"restricted", "lagrangian", "compare"}},
        {"bosonic", {"restricted", "compare"}},
        {"f-oscillator", {"restricted", "compare"}},
        {"fermi2", {"restricted", "compare"}},
        {"cat", {"restricted"}},
        {"grassmann", {"restricted"}},
        {"gkls", {"restricted"}},
    };
    return table;
}

ScenarioProduct dispatch(const Scenario& s) {
    if (s.model == "free" || s.model == "harmonic" || s.model == "anharmonic") {
        return run_gaussian(s);
    }
    if (s.model == "radcliffe") return run_radcliffe(s);
    if (s.model == "bosonic") return run_bosonic(s);
    if (s.model == "f-oscillator") return run_f_oscillator(s);
    if (s.model == "cat") return run_cat(s);
    if (s.model == "fermi2") return run_fermi2(s);
    if (s.model == "grassmann") return run_grassmann(s);
    return run_gkls(s);
}

}  // namespace

Scenario parse_scenario(const json& config) {
    if (!config.is_object()) {
        throw ConfigError("config root must be a JSON object");
    }
    static const std::set<std::string> known_keys{
        "name", "model", "method", "params", "dt", "t_end", "stride"};
    for (const auto& item : config.items()) {
        if (!known_keys.count(item.key())) {
            throw ConfigError("unknown field \"" + item.key() + "\"");
        }
    }

    Scenario s;
    if (!config.contains("model")) {
        throw ConfigError("missing required field \"model\"");
    }
    if (!config.at("model").is_string()) {
        throw ConfigError("field \"model\" must be a string");
    }
    s.model = config.at("model").get<std::string>();
    const auto& methods = supported_methods();
    const auto it = methods.find(s.model);
    if (it == methods.end()) {
        throw ConfigError("unknown model \"" + s.model + "\"");
    }

    if (!config.contains("method")) {
        throw ConfigError("missing required field \"method\"");
    }
    if (!config.at("method").is_string()) {
        throw ConfigError("field \"method\" must be a string");
    }
    s.method = config.at("method").get<std::string>();
    static const std::set<std::string> all_methods{"restricted", "lagrangian",
                                                   "grid", "compare"};
    if (!all_methods.count(s.method)) {
        throw ConfigError("unknown method \"" + s.method + "\"");
    }
    if (std::find(it->second.begin(), it->second.end(), s.method) ==
        it->second.end()) {
        std::string supported;
        for (const auto& m : it->second) {
            if (!supported.empty()) supported += ", ";
            supported += m;
        }
        throw ConfigError("model \"" + s.model + "\" does not support method \"" +
                          s.method + "\"; supported: " + supported);
    }

    if (config.contains("params")) {
        if (!config.at("params").is_object()) {
            throw ConfigError("field \"params\" must be an object");
        }
        s.params = config.at("params");
    }

    if (config.contains("dt")) {
        if (!config.at("dt").is_number()) {
            throw ConfigError("field \"dt\" must be a number");
        }
        s.dt = config.at("dt").get<double>();
    }
    if (!(s.dt > 0.0)) throw ConfigError("field \"dt\" must be > 0");

    if (config.contains("t_end")) {
        if (!config.at("t_end").is_number()) {
            throw ConfigError("field \"t_end\" must be a number");
        }
        s.t_end = config.at("t_end").get<double>();
    }
    if (!(s.t_end >= 0.0)) throw ConfigError("field \"t_end\" must be >= 0");

    if (config.contains("stride")) {
        if (!config.at("stride").is_number_integer()) {
            throw ConfigError("field \"stride\" must be an integer");
        }
        s.stride = config.at("stride").get<int>();
    }
    if (s.stride < 1) throw ConfigError("field \"stride\" must be >= 1");

    if (config.contains("name")) {
        if (!config.at("name").is_string()) {
            throw ConfigError("field \"name\" must be a string");
        }
        s.name = config.at("name").get<std::string>();
    } else {
        s.name = s.model + "-" + s.method;
    }
    if (s.name.empty() ||
        s.name.find_first_not_of("abcdefghijklmnopqrstuvwxyz"
                                 "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
                                 "0123456789_-") != std::string::npos) {
        throw ConfigError(
            "field \"name\" must be nonempty and use [A-Za-z0-9_-] only");
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream file(path);
    if (!file) {
        throw ConfigError("cannot open config file " + path);
    }
    json config;
    try {
        file >> config;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return parse_scenario(config);
}

RunOutputs run_scenario(const Scenario& s, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    ScenarioProduct prod = dispatch(s);
    reject_unknown_params(s.params, prod.params, s.model);

    const std::filesystem::path dir(out_dir);
    RunOutputs outputs;
    outputs.csv_path = (dir / (s.name + ".csv")).string();
    outputs.report_path = (dir / (s.name + ".report.json")).string();

    prod.table.write(outputs.csv_path);

    const json report{
        {"scenario",
         {{"name", s.name},
          {"model", s.model},
          {"method", s.method},
          {"dt", s.dt},
          {"t_end", s.t_end},
          {"stride", s.stride},
          {"params", prod.params}}},
        {"diagnostics", prod.diagnostics},
        {"metadata",
         {{"tool", "varqdyn"},
          {"units", "hbar = m = 1"},
          {"csv", "RFC-4180 quoting, LF line endings, shortest round-trip doubles"},
          {"rows", prod.table.row_count()}}}};
    std::ofstream rf(outputs.report_path, std::ios::binary);
    if (!rf) {
        throw std::runtime_error("cannot open " + outputs.report_path);
    }
    rf << report.dump(2) << "\n";
    return outputs;
}

}  // namespace varq::scenario
