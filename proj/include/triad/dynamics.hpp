#pragma once
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "triad/jrd.hpp"
#include "triad/masses.hpp"
#include "triad/p_chart.hpp"
#include "triad/secular.hpp"
#include "triad/state.hpp"

namespace triad {

// Flattened phase-space vector: (y1, y2, x1, x2), three components each.
using State12 = std::array<double, 12>;

inline State12 pack_state(const CartesianState& s) {
    return {s.y1.x, s.y1.y, s.y1.z, s.y2.x, s.y2.y, s.y2.z,
            s.x1.x, s.x1.y, s.x1.z, s.x2.x, s.x2.y, s.x2.z};
}

inline CartesianState unpack_state(const State12& v) {
    CartesianState s;
    s.y1 = {v[0], v[1], v[2]};
    s.y2 = {v[3], v[4], v[5]};
    s.x1 = {v[6], v[7], v[8]};
    s.x2 = {v[9], v[10], v[11]};
    return s;
}

// Hamiltonian vector field of the heliocentric three-body problem:
//   xdot_1 = y1/mbar1 + mu y2/m0,   ydot_1 = -mbar1 M1 x1/|x1|^3 - mu mbar1 mbar2 (x1-x2)/|x1-x2|^3
//   xdot_2 = y2/mbar2 + mu y1/m0,   ydot_2 = -mbar2 M2 x2/|x2|^3 + mu mbar1 mbar2 (x1-x2)/|x1-x2|^3
struct EquationsOfMotion {
    MassConfig mc;

    void operator()(const State12& v, State12& dv, double /*t*/) const {
        const double mb1 = mc.mbar(1), mb2 = mc.mbar(2);
        const double mu = mc.mu, m0 = mc.m0;
        Vec3 y1{v[0], v[1], v[2]}, y2{v[3], v[4], v[5]};
        Vec3 x1{v[6], v[7], v[8]}, x2{v[9], v[10], v[11]};
        double r1 = norm(x1), r2 = norm(x2);
        Vec3 d = x1 - x2;
        double r12 = norm(d);
        double k1 = mb1 * mc.M(1) / (r1 * r1 * r1);
        double k2 = mb2 * mc.M(2) / (r2 * r2 * r2);
        double k12 = mu * mb1 * mb2 / (r12 * r12 * r12);
        Vec3 dy1 = x1 * (-k1) - d * k12;
        Vec3 dy2 = x2 * (-k2) + d * k12;
        Vec3 dx1 = y1 * (1.0 / mb1) + y2 * (mu / m0);
        Vec3 dx2 = y2 * (1.0 / mb2) + y1 * (mu / m0);
        dv = {dy1.x, dy1.y, dy1.z, dy2.x, dy2.y, dy2.z,
              dx1.x, dx1.y, dx1.z, dx2.x, dx2.y, dx2.z};
    }
};

struct Trajectory {
    std::vector<double> t;
    std::vector<CartesianState> states;
    bool truncated = false;        // stopped at a close planet-planet encounter
    double energy_drift = 0;       // max |H(t) - H(0)| / |H(0)|
    double momentum_drift = 0;     // max |C(t) - C(0)| / |C(0)|
    double min_separation = 0;     // min |x1 - x2| along the recorded samples
    double encounter_radius = 0;   // truncation threshold used
};

struct IntegrationOptions {
    double abs_tol = 1e-13;
    double rel_tol = 1e-13;
    // Stop (and flag) when |x1 - x2| drops below encounter_factor * a1(0).
    double encounter_factor = 1e-3;
    // Upper bound on the internal step, as a fraction of the shorter initial
    // orbital period; also the initial trial step.
    double max_step_fraction = 1.0 / 200.0;
};

inline double orbital_period(const Vec3& x, const Vec3& y, int body, const MassConfig& mc) {
    BodyElements el = body_elements(x, y, body, mc);
    double mb = mc.mbar(body), M = mc.M(body);
    double n = mb * mb * mb * M * M / (el.Lambda * el.Lambda * el.Lambda);
    return 2 * M_PI / n;
}

namespace detail_dyn {
struct EncounterStop {};
}  // namespace detail_dyn

// Integrate the full equations of motion with an adaptive embedded
// Runge-Kutta-Fehlberg 7(8) scheme, recording every record_dt time units.
inline Trajectory integrate(const CartesianState& s0, const MassConfig& mc, double t_end,
                            double record_dt, IntegrationOptions opt = {}) {
    namespace ode = boost::numeric::odeint;
    if (!(t_end != 0) || !(record_dt > 0)) throw std::domain_error("integrate: need t_end != 0, record_dt > 0");

    if (t_end < 0) {
        // the Hamiltonian is even in the momenta, so running time backwards is
        // the same as flipping all momenta, running forwards, and flipping back
        auto flip = [](CartesianState s) {
            s.y1 = s.y1 * -1.0;
            s.y2 = s.y2 * -1.0;
            return s;
        };
        Trajectory tr = integrate(flip(s0), mc, -t_end, record_dt, opt);
        for (CartesianState& s : tr.states) s = flip(s);
        for (double& t : tr.t) t = -t;
        return tr;
    }

    EquationsOfMotion rhs{mc};
    Trajectory traj;
    double a1 = body_elements(s0.x1, s0.y1, 1, mc).a;
    traj.encounter_radius = opt.encounter_factor * a1;
    traj.min_separation = norm(s0.x1 - s0.x2);

    double E0 = hamiltonian(s0, mc);
    Vec3 C0 = total_angular_momentum(s0);
    double C0n = norm(C0);

    double T1 = orbital_period(s0.x1, s0.y1, 1, mc);
    double T2 = orbital_period(s0.x2, s0.y2, 2, mc);
    double hmax = opt.max_step_fraction * std::min(T1, T2);

    auto observer = [&](const State12& v, double t) {
        CartesianState s = unpack_state(v);
        traj.t.push_back(t);
        traj.states.push_back(s);
        double sep = norm(s.x1 - s.x2);
        traj.min_separation = std::min(traj.min_separation, sep);
        traj.energy_drift = std::max(traj.energy_drift,
                                     std::fabs(hamiltonian(s, mc) - E0) / std::fabs(E0));
        traj.momentum_drift =
            std::max(traj.momentum_drift, norm(total_angular_momentum(s) - C0) / C0n);
        if (sep < traj.encounter_radius) throw detail_dyn::EncounterStop{};
    };

    State12 v = pack_state(s0);
    auto stepper = ode::make_controlled(opt.abs_tol, opt.rel_tol, hmax,
                                        ode::runge_kutta_fehlberg78<State12>());
    try {
        ode::integrate_const(stepper, rhs, v, 0.0, t_end, record_dt, observer);
    } catch (const detail_dyn::EncounterStop&) {
        traj.truncated = true;
    }
    return traj;
}

// Pull the trajectory back through the action-angle charts and check that the
// conserved quantities read off in each chart stay flat.  Samples inside a
// chart's singular set are skipped and counted, so the check is segment-wise.
struct CyclicReport {
    double g_drift_jrd = 0, z_drift_jrd = 0;
    double g_drift_p = 0, z_drift_p = 0;
    int skipped_jrd = 0, skipped_p = 0;
    int used_jrd = 0, used_p = 0;
};

inline CyclicReport cyclic_validation(const Trajectory& traj, const MassConfig& mc) {
    CyclicReport rep;
    double G0j = 0, Z0j = 0, G0p = 0, Z0p = 0;
    for (const CartesianState& s : traj.states) {
        try {
            JrdCoords c = cartesian_to_jrd(s, mc);
            if (rep.used_jrd == 0) { G0j = c.G; Z0j = c.Z; }
            rep.g_drift_jrd = std::max(rep.g_drift_jrd, std::fabs(c.G - G0j) / std::fabs(G0j));
            rep.z_drift_jrd = std::max(rep.z_drift_jrd, std::fabs(c.Z - Z0j) / std::fabs(G0j));
            ++rep.used_jrd;
        } catch (const std::domain_error&) {
            ++rep.skipped_jrd;
        }
        try {
            PCoords c = cartesian_to_p(s, mc);
            if (rep.used_p == 0) { G0p = c.G; Z0p = c.Z; }
            rep.g_drift_p = std::max(rep.g_drift_p, std::fabs(c.G - G0p) / std::fabs(G0p));
            rep.z_drift_p = std::max(rep.z_drift_p, std::fabs(c.Z - Z0p) / std::fabs(G0p));
            ++rep.used_p;
        } catch (const std::domain_error&) {
            ++rep.skipped_p;
        }
    }
    return rep;
}

// Equivariance of the flow under the reflection that negates the second
// coordinate of every position and momentum: integrate the reflected initial
// condition and compare against the reflected trajectory.
inline double reflection_equivariance(const CartesianState& s0, const MassConfig& mc,
                                      double t_end, double record_dt,
                                      IntegrationOptions opt = {}) {
    Trajectory a = integrate(s0, mc, t_end, record_dt, opt);
    Trajectory b = integrate(reflect_R2minus(s0), mc, t_end, record_dt, opt);
    size_t n = std::min(a.states.size(), b.states.size());
    double worst = 0, scale = 0;
    for (size_t i = 0; i < n; ++i) {
        State12 u = pack_state(reflect_R2minus(a.states[i]));
        State12 v = pack_state(b.states[i]);
        for (int k = 0; k < 12; ++k) {
            worst = std::max(worst, std::fabs(u[k] - v[k]));
            scale = std::max(scale, std::fabs(u[k]));
        }
    }
    return worst / scale;
}

// Reduced secular coordinates (Theta, theta) read off along the trajectory,
// skipping samples inside the chart's singular set.
struct SecularSample {
    double t, Theta, theta;
};

inline std::vector<SecularSample> secular_track(const Trajectory& traj, const MassConfig& mc) {
    std::vector<SecularSample> out;
    out.reserve(traj.states.size());
    for (size_t i = 0; i < traj.states.size(); ++i) {
        try {
            PCoords c = cartesian_to_p(traj.states[i], mc);
            double th = c.theta > M_PI ? c.theta - 2 * M_PI : c.theta;  // center at 0
            out.push_back({traj.t[i], c.Theta, th});
        } catch (const std::domain_error&) {
        }
    }
    return out;
}

// Fit of the exponential departure rate from the planar outer-retrograde
// equilibrium, in the metric that makes the linearization isotropic, compared
// against the predicted linearized exponent.
struct DepartureFit {
    double measured_rate = 0;
    double predicted_rate = 0;
    double rel_error = 0;
    int n_used = 0;
};

inline DepartureFit hyperbolic_departure(const Trajectory& traj, const SecularPoint& sp,
                                         double mu, double d_min = 0, double d_max = 1e300) {
    auto rep = equilibrium_analysis(sp.Lambda1, sp.Lambda2, sp.G2, sp.G);
    if (rep.classification != EquilibriumClass::Hyperbolic)
        throw std::domain_error("hyperbolic_departure: equilibrium is not hyperbolic");
    DepartureFit fit;
    fit.predicted_rate = whisker_exponent(sp, mu);
    double w = rep.omega;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const SecularSample& s : secular_track(traj, sp.masses)) {
        double d = std::hypot(s.Theta / std::sqrt(w), s.theta * std::sqrt(w));
        if (!(d > d_min && d < d_max)) continue;
        double x = s.t, y = std::log(d);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++fit.n_used;
    }
    if (fit.n_used < 2) throw std::runtime_error("hyperbolic_departure: too few usable samples");
    double n = fit.n_used;
    fit.measured_rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.rel_error = std::fabs(fit.measured_rate - fit.predicted_rate) / fit.predicted_rate;
    return fit;
}

// Full-precision CSV export: time, momenta, positions, energy, angular momentum.
inline void write_trajectory_csv(const Trajectory& traj, const MassConfig& mc,
                                 std::ostream& os) {
    os << "t,y1x,y1y,y1z,y2x,y2y,y2z,x1x,x1y,x1z,x2x,x2y,x2z,E,C1,C2,C3\n";
    char buf[32];
    auto put = [&](double v, char sep) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf << sep;
    };
    for (size_t i = 0; i < traj.states.size(); ++i) {
        const CartesianState& s = traj.states[i];
        put(traj.t[i], ',');
        State12 v = pack_state(s);
        for (int k = 0; k < 12; ++k) put(v[k], ',');
        put(hamiltonian(s, mc), ',');
        Vec3 C = total_angular_momentum(s);
        put(C.x, ',');
        put(C.y, ',');
        put(C.z, '\n');
    }
}

}  // namespace triad
