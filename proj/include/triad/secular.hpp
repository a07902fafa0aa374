#pragma once
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "triad/canonicity.hpp"
#include "triad/masses.hpp"
#include "triad/state.hpp"

namespace triad {

inline double semimajor_axis(double Lambda, int body, const MassConfig& mc) {
    double mb = mc.mbar(body);
    return Lambda * Lambda / (mb * mb * mc.M(body));
}

inline double alpha_ratio(double Lambda1, double Lambda2, const MassConfig& mc) {
    return semimajor_axis(Lambda1, 1, mc) / semimajor_axis(Lambda2, 2, mc);
}

inline double kepler_part(double Lambda1, double Lambda2, const MassConfig& mc) {
    double h = 0;
    const double L[2] = {Lambda1, Lambda2};
    for (int j = 1; j <= 2; ++j) {
        double mb = mc.mbar(j), M = mc.M(j);
        h -= mb * mb * mb * M * M / (2 * L[j - 1] * L[j - 1]);
    }
    return h;
}

// Average an observable over the (ell1, ell2) torus; chart point given in the
// canonical 12-vector layout of ChartHandle (fast angles at slots 1 and 3).
inline double torus_average(const ChartHandle& chart, const Vec12& point,
                            const std::function<double(const CartesianState&)>& obs, int N) {
    double sum = 0;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            Vec12 v = point;
            v[1] = TWO_PI * i / N;
            v[3] = TWO_PI * j / N;
            try {
                sum += obs(unflatten(chart.map(v)));
            } catch (const std::exception& e) {
                throw std::domain_error("torus_average: singular sample at (ell1, ell2) = (" +
                                        std::to_string(v[1]) + ", " + std::to_string(v[3]) +
                                        "): " + e.what());
            }
        }
    return sum / (N * N);
}

// Torus average of the size-mu part of the Hamiltonian, with automatic
// refinement until two successive node doublings agree.
inline double secular_average(const ChartHandle& chart, const Vec12& point, const MassConfig& mc,
                              int N = 64, double tol = 1e-10, int max_N = 1024) {
    auto obs = [&](const CartesianState& s) { return perturbation_value(s, mc).total; };
    double prev = torus_average(chart, point, obs, N);
    for (int n = 2 * N; n <= max_N; n *= 2) {
        double cur = torus_average(chart, point, obs, n);
        if (std::fabs(cur - prev) < tol) return cur;
        prev = cur;
    }
    return prev;
}

struct MultipoleAverages {
    double f0, f1, f2;  // normalized by -mbar1 mbar2 / a2
};

// Averages of the first Legendre terms of the direct interaction.
inline MultipoleAverages multipole_average(const ChartHandle& chart, const Vec12& point,
                                           const MassConfig& mc, int N = 128) {
    double L1 = point[0], L2 = point[2];
    double a1 = semimajor_axis(L1, 1, mc), a2 = semimajor_axis(L2, 2, mc);
    if (!(a1 < a2)) throw std::domain_error("multipole_average: requires a1 < a2");
    MultipoleAverages m{};
    m.f0 = a2 * torus_average(chart, point, [](const CartesianState& s) { return 1.0 / norm(s.x2); }, N);
    m.f1 = a2 * torus_average(chart, point, [](const CartesianState& s) {
        double r1 = norm(s.x1), r2 = norm(s.x2);
        double c = dot(s.x1, s.x2) / (r1 * r2);
        return r1 / (r2 * r2) * c;
    }, N);
    m.f2 = a2 * torus_average(chart, point, [](const CartesianState& s) {
        double r1 = norm(s.x1), r2 = norm(s.x2);
        double c = dot(s.x1, s.x2) / (r1 * r2);
        return r1 * r1 / (r2 * r2 * r2) * 0.5 * (3 * c * c - 1);
    }, N);
    return m;
}

// Quadrupole coefficient of the averaged interaction from the invariant vectors.
inline double quadrupole_closed_form(const Vec3& C1, const Vec3& C2, const Vec3& P1,
                                     double Lambda1, double Lambda2, double alpha) {
    double G2 = norm(C2);
    if (!(G2 > 0)) throw std::domain_error("quadrupole_closed_form: |C2| = 0");
    double PC = dot(P1, C2);
    double mixed = dot(cross(C1, C2), P1);
    double G1sq = dot(C1, C1);
    double bracket = 5 * (3 * PC * PC - G2 * G2) * Lambda1 * Lambda1 -
                     3 * (4 * PC * PC - G2 * G2) * G1sq + 3 * mixed * mixed;
    return -(alpha * alpha / 8.0) * std::pow(Lambda2, 3) /
           (Lambda1 * Lambda1 * std::pow(G2, 5)) * bracket;
}

struct SecularPoint {
    double Lambda1, Lambda2, G2, Theta, theta, g2;
    double G;  // parameter of the reduction
    MassConfig masses;
};

struct QuadrupoleSplit {
    double P0, P1;
};

// Planar part and fluctuation of the quadrupole coefficient in the perihelion chart.
inline QuadrupoleSplit quadrupole_p(const SecularPoint& sp) {
    double L1 = sp.Lambda1, L2 = sp.Lambda2, G2 = sp.G2, G = sp.G, Th = sp.Theta, th = sp.theta;
    if (!(G2 > 0)) throw std::domain_error("quadrupole_p: G2 = 0");
    double pref3 = -0.125 * std::pow(L2, 3) / (L1 * L1 * std::pow(G2, 3));
    double pref5 = -0.125 * std::pow(L2, 3) / (L1 * L1 * std::pow(G2, 5));
    double P0 = pref3 * (-5 * L1 * L1 + 3 * (G + G2) * (G + G2));
    double X = G * G + G2 * G2 - 2 * Th * Th +
               2 * std::sqrt((G2 * G2 - Th * Th) * (G * G - Th * Th)) * std::cos(th);
    double s2 = std::sin(th) * std::sin(th);
    double P1 = pref5 * (15 * L1 * L1 * Th * Th - 3 * (4 * Th * Th - G2 * G2) * X -
                         3 * G2 * G2 * (G + G2) * (G + G2) +
                         3 * (G2 * G2 - Th * Th) * (G * G - Th * Th) * s2);
    return {P0, P1};
}

// Analytic partial derivatives of the fluctuation part.
inline std::array<double, 2> quadrupole_p1_partials(const SecularPoint& sp) {
    double L1 = sp.Lambda1, L2 = sp.Lambda2, G2 = sp.G2, G = sp.G, Th = sp.Theta, th = sp.theta;
    double pref5 = -0.125 * std::pow(L2, 3) / (L1 * L1 * std::pow(G2, 5));
    double A = std::sqrt(G2 * G2 - Th * Th), B = std::sqrt(G * G - Th * Th);
    double X = G * G + G2 * G2 - 2 * Th * Th + 2 * A * B * std::cos(th);
    double dX_dTh = -4 * Th - 2 * Th * std::cos(th) * (B / A + A / B);
    double dX_dth = -2 * A * B * std::sin(th);
    double s = std::sin(th), c = std::cos(th);
    double dP1_dTh = pref5 * (30 * L1 * L1 * Th - 24 * Th * X - 3 * (4 * Th * Th - G2 * G2) * dX_dTh -
                              6 * Th * (G * G - Th * Th) * s * s - 6 * Th * (G2 * G2 - Th * Th) * s * s);
    double dP1_dth = pref5 * (-3 * (4 * Th * Th - G2 * G2) * dX_dth +
                              6 * (G2 * G2 - Th * Th) * (G * G - Th * Th) * s * c);
    return {dP1_dTh, dP1_dth};
}

enum class EquilibriumClass { Hyperbolic, Elliptic, Degenerate };

struct EquilibriumReport {
    double a_coeff, b_coeff;       // planar outer-retrograde expansion coefficients
    double ahat_coeff, bhat_coeff; // aligned-plane expansion coefficients
    EquilibriumClass classification;
    EquilibriumClass aligned_classification;
    double Omega = 0, omega = 0;   // defined when hyperbolic
    double Gstar = 0;
    double Gu_minus = 0, Gu_plus = 0;
    bool Gu_empty = true;
};

// Unique positive root of G2 -> 5 L1^2 G - (G + G2)^2 (4 G + G2).
inline double gstar_root(double Lambda1, double G) {
    auto f = [&](double G2) {
        return 5 * Lambda1 * Lambda1 * G - (G + G2) * (G + G2) * (4 * G + G2);
    };
    double lo = 0, hi = std::max(Lambda1, G) + 1;
    if (!(f(lo) > 0)) throw std::domain_error("gstar_root: cubic not positive at G2 = 0");
    while (f(hi) > 0) hi *= 2;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (f(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline EquilibriumReport equilibrium_analysis(double Lambda1, double Lambda2, double G2, double G,
                                              double c = 0.5, double alpha_plus = 0.2,
                                              double tol = 1e-12) {
    EquilibriumReport r{};
    r.a_coeff = 5 * Lambda1 * Lambda1 * G - (G + G2) * (G + G2) * (4 * G + G2);
    r.b_coeff = G - G2;
    r.ahat_coeff = 5 * Lambda1 * Lambda1 * G - (G - G2) * (G - G2) * (4 * G - G2);
    r.bhat_coeff = G + G2;
    double scale = Lambda1 * Lambda1 * G;
    if (std::fabs(r.a_coeff) < tol * scale || std::fabs(r.b_coeff) < tol * G)
        r.classification = EquilibriumClass::Degenerate;
    else if (r.a_coeff > 0 && r.b_coeff < 0)
        r.classification = EquilibriumClass::Hyperbolic;
    else if (r.a_coeff * r.b_coeff > 0)
        r.classification = EquilibriumClass::Elliptic;
    else
        r.classification = EquilibriumClass::Elliptic;  // a<0, b>0: stable in both planes
    r.aligned_classification = (r.ahat_coeff > 0 && r.bhat_coeff > 0)
                                   ? EquilibriumClass::Elliptic
                                   : EquilibriumClass::Degenerate;
    if (5 * Lambda1 * Lambda1 > 4 * G * G) {  // the cubic has a positive root
        r.Gstar = gstar_root(Lambda1, G);
        r.Gu_minus = std::max((2.0 / c) * std::sqrt(alpha_plus) * Lambda2, G);
        r.Gu_plus = std::min(Lambda2, r.Gstar);
        // the window is empty whenever Lambda1 < 2G (then Gstar < G)
        r.Gu_empty = !(r.Gu_minus < r.Gu_plus) || Lambda1 < 2 * G;
    }
    if (r.classification == EquilibriumClass::Hyperbolic) {
        r.Omega = -0.75 * std::pow(Lambda2, 3) / (Lambda1 * Lambda1 * std::pow(G2, 4)) *
                  std::sqrt(r.a_coeff * (G2 - G));
        r.omega = G * G2 * std::sqrt((G2 - G) / r.a_coeff);
    }
    return r;
}

// 1-DOF truncated secular Hamiltonian value.
inline double heff_value(const SecularPoint& sp, double mu) {
    const MassConfig& mc = sp.masses;
    double a2 = semimajor_axis(sp.Lambda2, 2, mc);
    double alpha = alpha_ratio(sp.Lambda1, sp.Lambda2, mc);
    auto qs = quadrupole_p(sp);
    return kepler_part(sp.Lambda1, sp.Lambda2, mc) -
           mu * mc.mbar(1) * mc.mbar(2) / a2 * (1 + alpha * alpha * (qs.P0 + qs.P1));
}

struct HeffTrajectory {
    std::vector<double> t, Theta, theta;
    bool truncated = false;  // left the (Theta, theta) box
    double heff_drift = 0;   // max |h_eff(t) - h_eff(0)|
};

// Flow of the truncated secular Hamiltonian in the (Theta, theta) plane.
inline HeffTrajectory heff_flow(const SecularPoint& sp0, double mu, double t_end, int n_steps = 2000) {
    namespace odeint = boost::numeric::odeint;
    const MassConfig& mc = sp0.masses;
    double a2 = semimajor_axis(sp0.Lambda2, 2, mc);
    double alpha = alpha_ratio(sp0.Lambda1, sp0.Lambda2, mc);
    double K = mu * mc.mbar(1) * mc.mbar(2) / a2 * alpha * alpha;
    using State = std::array<double, 2>;
    auto rhs = [&](const State& s, State& dsdt, double) {
        SecularPoint sp = sp0;
        sp.Theta = s[0];
        sp.theta = s[1];
        auto d = quadrupole_p1_partials(sp);
        dsdt[0] = K * d[1];   // Theta' = -dH/dtheta = +K dP1/dtheta
        dsdt[1] = -K * d[0];  // theta' = +dH/dTheta = -K dP1/dTheta
    };
    odeint::runge_kutta_fehlberg78<State> stepper;
    State s{sp0.Theta, sp0.theta};
    double dt = t_end / n_steps;
    HeffTrajectory traj;
    SecularPoint sp = sp0;
    double h0 = heff_value(sp0, mu);
    for (int i = 0; i <= n_steps; ++i) {
        double t = i * dt;
        traj.t.push_back(t);
        traj.Theta.push_back(s[0]);
        traj.theta.push_back(s[1]);
        sp.Theta = s[0];
        sp.theta = s[1];
        traj.heff_drift = std::max(traj.heff_drift, std::fabs(heff_value(sp, mu) - h0));
        if (std::fabs(s[0]) > 0.5 * std::min(sp0.G, sp0.G2) || std::fabs(s[1]) > 0.5 * M_PI) {
            traj.truncated = true;
            break;
        }
        if (i < n_steps) stepper.do_step(rhs, s, t, dt);
    }
    return traj;
}

// Frequencies of the invariant torus: gradient of h_eff in (Lambda1, Lambda2, G2).
inline std::array<double, 3> heff_frequencies(const SecularPoint& sp, double mu) {
    std::array<double, 3> w{};
    auto deriv = [&](auto setter) {
        double h = 1e-6;
        SecularPoint p = sp, m = sp;
        setter(p, h);
        setter(m, -h);
        return (heff_value(p, mu) - heff_value(m, mu)) / (2 * h);
    };
    w[0] = deriv([](SecularPoint& s, double h) { s.Lambda1 += h; });
    w[1] = deriv([](SecularPoint& s, double h) { s.Lambda2 += h; });
    w[2] = deriv([](SecularPoint& s, double h) { s.G2 += h; });
    return w;
}

// Linearized exponent of the planar outer-retrograde equilibrium of h_eff.
inline double whisker_exponent(const SecularPoint& sp, double mu) {
    const MassConfig& mc = sp.masses;
    double a2 = semimajor_axis(sp.Lambda2, 2, mc);
    double alpha = alpha_ratio(sp.Lambda1, sp.Lambda2, mc);
    double K = mu * mc.mbar(1) * mc.mbar(2) / a2 * alpha * alpha;
    auto rep = equilibrium_analysis(sp.Lambda1, sp.Lambda2, sp.G2, sp.G);
    if (rep.classification != EquilibriumClass::Hyperbolic)
        throw std::domain_error("whisker_exponent: equilibrium is not hyperbolic");
    return K * std::fabs(rep.Omega);
}

struct WhiskerSample {
    double p0, q0;
    double fitted_rate;    // exponential decay rate of the distance to the torus
    bool monotone = true;  // distance decays monotonically along the whisker
};

struct WhiskerReport {
    double exponent;  // linearized rate
    double omega;     // aspect ratio of the separatrix directions
    std::vector<WhiskerSample> stable, unstable;
};

// Sample the local stable/unstable manifolds of the truncated system and
// verify exponential approach to the invariant torus.
inline WhiskerReport whisker_local(const SecularPoint& sp0, double mu, double eps, int n_samples = 4) {
    auto rep = equilibrium_analysis(sp0.Lambda1, sp0.Lambda2, sp0.G2, sp0.G);
    if (rep.classification != EquilibriumClass::Hyperbolic)
        throw std::domain_error("whisker_local: equilibrium is not hyperbolic");
    WhiskerReport out;
    out.exponent = whisker_exponent(sp0, mu);
    out.omega = rep.omega;
    double w = rep.omega;
    auto run = [&](double p0, double q0, bool forward) {
        WhiskerSample ws{p0, q0, 0, true};
        SecularPoint sp = sp0;
        sp.Theta = std::sqrt(w / 2) * (p0 + q0);
        sp.theta = (q0 - p0) / std::sqrt(2 * w);
        double T = 3.0 / out.exponent;
        HeffTrajectory tr = heff_flow(sp, mu, forward ? T : -T, 3000);
        // linear fit of log distance vs time
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        double prev = 1e300;
        for (size_t i = 0; i < tr.t.size(); ++i) {
            double d = std::hypot(tr.Theta[i] / std::sqrt(w), tr.theta[i] * std::sqrt(w));
            if (d <= 0) break;
            if (d > prev * (1 + 1e-9)) ws.monotone = false;
            prev = d;
            double x = std::fabs(tr.t[i]), y = std::log(d);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++n;
        }
        ws.fitted_rate = n >= 2 ? -(n * sxy - sx * sy) / (n * sxx - sx * sx) : 0;
        return ws;
    };
    for (int k = 1; k <= n_samples; ++k) {
        double amp = eps * k / n_samples;
        out.stable.push_back(run(amp, 0.0, true));
        out.stable.push_back(run(-amp, 0.0, true));
        out.unstable.push_back(run(0.0, amp, false));
        out.unstable.push_back(run(0.0, -amp, false));
    }
    return out;
}

}  // namespace triad
