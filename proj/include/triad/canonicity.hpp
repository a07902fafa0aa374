#pragma once
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "triad/jrd.hpp"
#include "triad/p_chart.hpp"
#include "triad/rps_pi.hpp"
#include "triad/state.hpp"

namespace triad {

using Vec12 = std::array<double, 12>;
using Mat12 = std::array<std::array<double, 12>, 12>;

// Cartesian state flattened into canonical (momentum, position) pairs.
inline Vec12 flatten(const CartesianState& s) {
    return {s.y1.x, s.x1.x, s.y1.y, s.x1.y, s.y1.z, s.x1.z,
            s.y2.x, s.x2.x, s.y2.y, s.x2.y, s.y2.z, s.x2.z};
}

inline CartesianState unflatten(const Vec12& v) {
    return {{v[0], v[2], v[4]}, {v[6], v[8], v[10]}, {v[1], v[3], v[5]}, {v[7], v[9], v[11]}};
}

// A chart packaged as a map from canonically ordered (action, angle) pairs to
// the flattened Cartesian state.
struct ChartHandle {
    std::string name;
    std::function<Vec12(const Vec12&)> map;
};

inline ChartHandle jrd_handle(const MassConfig& mc) {
    return {"jrd", [mc](const Vec12& v) {
                JrdCoords c{v[0], v[2], v[4], v[6], v[8], v[10], v[1], v[3], v[5], v[7], v[9], v[11]};
                return flatten(jrd_to_cartesian(c, mc));
            }};
}

inline ChartHandle rps_pi_handle(const MassConfig& mc) {
    return {"rps_pi", [mc](const Vec12& v) {
                RpsPiCoords c{v[0], v[2], v[1], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11]};
                return flatten(rpspi_to_cartesian(c, mc));
            }};
}

inline ChartHandle p_handle(const MassConfig& mc) {
    return {"p", [mc](const Vec12& v) {
                PCoords c{v[0], v[2], v[4], v[6], v[8], v[10], v[1], v[3], v[5], v[7], v[9], v[11]};
                return flatten(p_to_cartesian(c, mc));
            }};
}

// Central-difference Jacobian with one Richardson extrapolation step.
inline Mat12 jacobian12(const std::function<Vec12(const Vec12&)>& f, const Vec12& x) {
    Mat12 J{};
    for (int k = 0; k < 12; ++k) {
        double h = 1e-5 * (1.0 + std::fabs(x[k]));
        auto column = [&](double hh) {
            Vec12 xp = x, xm = x;
            xp[k] += hh;
            xm[k] -= hh;
            Vec12 fp = f(xp), fm = f(xm);
            std::array<double, 12> col;
            for (int i = 0; i < 12; ++i) col[i] = (fp[i] - fm[i]) / (2 * hh);
            return col;
        };
        auto c1 = column(h), c2 = column(h / 2);
        for (int i = 0; i < 12; ++i) J[i][k] = (4 * c2[i] - c1[i]) / 3.0;
    }
    return J;
}

// Standard symplectic matrix for (action, angle)-ordered pairs.
inline Mat12 symplectic_unit() {
    Mat12 S{};
    for (int k = 0; k < 6; ++k) {
        S[2 * k][2 * k + 1] = 1.0;
        S[2 * k + 1][2 * k] = -1.0;
    }
    return S;
}

// max |J^T S J - S|: zero for an exactly canonical chart.
inline double symplectic_defect(const ChartHandle& chart, const Vec12& point) {
    Mat12 J = jacobian12(chart.map, point);
    Mat12 S = symplectic_unit();
    double worst = 0;
    for (int a = 0; a < 12; ++a)
        for (int b = 0; b < 12; ++b) {
            double v = 0;
            for (int i = 0; i < 12; ++i)
                for (int j = 0; j < 12; ++j) v += J[i][a] * S[i][j] * J[j][b];
            worst = std::max(worst, std::fabs(v - S[a][b]));
        }
    return worst;
}

// Same defect computed with a plain central-difference Jacobian at step
// h = h_scale * (1 + |x_k|); the result converges to zero at second order in
// h_scale, which gives an independent consistency check on the chart maps.
inline double symplectic_defect_h(const ChartHandle& chart, const Vec12& point, double h_scale) {
    Mat12 J{};
    for (int k = 0; k < 12; ++k) {
        double h = h_scale * (1.0 + std::fabs(point[k]));
        Vec12 xp = point, xm = point;
        xp[k] += h;
        xm[k] -= h;
        Vec12 fp = chart.map(xp), fm = chart.map(xm);
        for (int i = 0; i < 12; ++i) J[i][k] = (fp[i] - fm[i]) / (2 * h);
    }
    Mat12 S = symplectic_unit();
    double worst = 0;
    for (int a = 0; a < 12; ++a)
        for (int b = 0; b < 12; ++b) {
            double v = 0;
            for (int i = 0; i < 12; ++i)
                for (int j = 0; j < 12; ++j) v += J[i][a] * S[i][j] * J[j][b];
            worst = std::max(worst, std::fabs(v - S[a][b]));
        }
    return worst;
}

// Compare the loop integrals of y.dx and sum(action d angle) along the closed
// curve point_k + amp_k sin(t + k); equal for a chart preserving the one-form
// up to an exact differential.
inline double oneform_defect(const ChartHandle& chart, const Vec12& point, const Vec12& amp,
                             int N = 256) {
    double cart_integral = 0, chart_integral = 0;
    for (int n = 0; n < N; ++n) {
        double t = TWO_PI * n / N;
        Vec12 c, cdot;
        for (int k = 0; k < 12; ++k) {
            c[k] = point[k] + amp[k] * std::sin(t + k);
            cdot[k] = amp[k] * std::cos(t + k);
        }
        // directional derivative of the map along the loop velocity
        double h = 1e-6;
        auto dir = [&](double hh) {
            Vec12 cp = c, cm = c;
            for (int k = 0; k < 12; ++k) { cp[k] += hh * cdot[k]; cm[k] -= hh * cdot[k]; }
            Vec12 fp = chart.map(cp), fm = chart.map(cm);
            std::array<double, 12> d;
            for (int i = 0; i < 12; ++i) d[i] = (fp[i] - fm[i]) / (2 * hh);
            return d;
        };
        auto d1 = dir(h), d2 = dir(h / 2);
        Vec12 fc = chart.map(c);
        for (int k = 0; k < 6; ++k) {
            double xdot = (4 * d2[2 * k + 1] - d1[2 * k + 1]) / 3.0;
            cart_integral += fc[2 * k] * xdot;
            chart_integral += c[2 * k] * cdot[2 * k + 1];
        }
    }
    return std::fabs(cart_integral - chart_integral) * TWO_PI / N;
}

// Poisson bracket of two observables of the Cartesian state, with momenta y
// conjugate to positions x: {f,g} = sum_i f_x g_y - f_y g_x.
inline double poisson_bracket(const std::function<double(const CartesianState&)>& f,
                              const std::function<double(const CartesianState&)>& g,
                              const CartesianState& s) {
    Vec12 v = flatten(s);
    auto grad = [&](const std::function<double(const CartesianState&)>& fn) {
        Vec12 gr;
        for (int k = 0; k < 12; ++k) {
            double h = 1e-6 * (1.0 + std::fabs(v[k]));
            Vec12 vp = v, vm = v;
            vp[k] += h;
            vm[k] -= h;
            gr[k] = (fn(unflatten(vp)) - fn(unflatten(vm))) / (2 * h);
        }
        return gr;
    };
    Vec12 df = grad(f), dg = grad(g);
    double b = 0;
    for (int k = 0; k < 6; ++k)
        b += df[2 * k + 1] * dg[2 * k] - df[2 * k] * dg[2 * k + 1];
    return b;
}

// Forward/inverse composition defects (actions absolute, angles wrapped).
inline double jrd_roundtrip_defect(const JrdCoords& c, const MassConfig& mc) {
    JrdCoords b = cartesian_to_jrd(jrd_to_cartesian(c, mc), mc);
    double d = 0;
    d = std::max(d, std::fabs(b.Lambda1 - c.Lambda1));
    d = std::max(d, std::fabs(b.Lambda2 - c.Lambda2));
    d = std::max(d, std::fabs(b.G1 - c.G1));
    d = std::max(d, std::fabs(b.G2 - c.G2));
    d = std::max(d, std::fabs(b.G - c.G));
    d = std::max(d, std::fabs(b.Z - c.Z));
    d = std::max(d, std::fabs(angle_diff(b.ell1, c.ell1)));
    d = std::max(d, std::fabs(angle_diff(b.ell2, c.ell2)));
    d = std::max(d, std::fabs(angle_diff(b.gamma1, c.gamma1)));
    d = std::max(d, std::fabs(angle_diff(b.gamma2, c.gamma2)));
    d = std::max(d, std::fabs(angle_diff(b.gamma, c.gamma)));
    d = std::max(d, std::fabs(angle_diff(b.zeta, c.zeta)));
    return d;
}

inline double p_roundtrip_defect(const PCoords& c, const MassConfig& mc) {
    PCoords b = cartesian_to_p(p_to_cartesian(c, mc), mc);
    double d = 0;
    d = std::max(d, std::fabs(b.Lambda1 - c.Lambda1));
    d = std::max(d, std::fabs(b.Lambda2 - c.Lambda2));
    d = std::max(d, std::fabs(b.G2 - c.G2));
    d = std::max(d, std::fabs(b.Theta - c.Theta));
    d = std::max(d, std::fabs(b.G - c.G));
    d = std::max(d, std::fabs(b.Z - c.Z));
    d = std::max(d, std::fabs(angle_diff(b.ell1, c.ell1)));
    d = std::max(d, std::fabs(angle_diff(b.ell2, c.ell2)));
    d = std::max(d, std::fabs(angle_diff(b.g2, c.g2)));
    d = std::max(d, std::fabs(angle_diff(b.theta, c.theta)));
    d = std::max(d, std::fabs(angle_diff(b.g, c.g)));
    d = std::max(d, std::fabs(angle_diff(b.zeta, c.zeta)));
    return d;
}

}  // namespace triad
