#pragma once
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "triad/linalg.hpp"
#include "triad/masses.hpp"

namespace triad {

// Two-body action-angle elements: Lambda (semi-major-axis action),
// G (angular momentum magnitude), ell (mean anomaly).
struct TwoBodyElements {
    double Lambda = 1.0;
    double G = 1.0;
    double ell = 0.0;
};

inline double eccentricity(double Lambda, double G) {
    if (!(G > 0) || !(G <= Lambda))
        throw std::domain_error("eccentricity: require 0 < G <= Lambda");
    double r = G / Lambda;
    double e2 = (1.0 - r) * (1.0 + r);
    return e2 <= 0 ? 0.0 : std::sqrt(e2);
}

// Solve zeta - e*sin(zeta) = ell for the eccentric anomaly zeta.
// Newton iteration seeded at ell + e*sin(ell), bisection fallback when a
// Newton step leaves the bracket [ell - e, ell + e].
inline double solve_kepler(double e, double ell) {
    if (!(e >= 0) || !(e < 1))
        throw std::domain_error("solve_kepler: eccentricity must lie in [0,1)");
    if (e == 0) return ell;

    // reduce to [0, 2*pi) and restore the offset at the end for continuity
    double base = ell - mod2pi(ell);
    double l = mod2pi(ell);

    double lo = l - e, hi = l + e;
    double z = l + e * std::sin(l);
    for (int it = 0; it < 100; ++it) {
        double f = z - e * std::sin(z) - l;
        if (std::fabs(f) < 1e-14) break;
        double fp = 1.0 - e * std::cos(z);
        double step = f / fp;
        double zn = z - step;
        if (zn < lo || zn > hi) {
            // bisection fallback
            if (f > 0) hi = z; else lo = z;
            zn = 0.5 * (lo + hi);
        } else {
            if (f > 0) hi = z; else lo = z;
        }
        if (zn == z) break;
        z = zn;
    }
    return z + base;
}

// Orbital-plane position/momentum of body j at the given elements:
//   x_orb = a (cos z - e, sqrt(1-e^2) sin z, 0),      a = Lambda^2/(mbar^2 M)
//   y_orb = (mbar^2 M / Lambda) (1 - e cos z)^{-1} (-sin z, sqrt(1-e^2) cos z, 0)
inline std::pair<Vec3, Vec3> orbital_state(const TwoBodyElements& el, int body_index, const MassConfig& mc) {
    double e = eccentricity(el.Lambda, el.G);
    double z = solve_kepler(e, el.ell);
    double mb = mc.mbar(body_index);
    double M = mc.M(body_index);
    double a = el.Lambda * el.Lambda / (mb * mb * M);
    double se = std::sqrt((1.0 - e) * (1.0 + e));
    double cz = std::cos(z), sz = std::sin(z);
    Vec3 x{a * (cz - e), a * se * sz, 0.0};
    double yscale = mb * mb * M / el.Lambda / (1.0 - e * cz);
    Vec3 y{-yscale * sz, yscale * se * cz, 0.0};
    return {x, y};
}

// Mutual/individual inclinations from the momentum magnitudes:
//   cos i  = Z/G
//   cos i1 = (G1^2 + G^2 - G2^2) / (2 G G1)
//   cos i2 = (G2^2 + G^2 - G1^2) / (2 G G2)
// all required to lie strictly inside (-1, 1).
struct InclinationTriple {
    double i, i1, i2;
};

inline InclinationTriple inclination_triple(double Z, double G, double G1, double G2) {
    if (!(G > 0) || !(G1 > 0) || !(G2 > 0))
        throw std::domain_error("inclination_triple: G, G1, G2 must be positive");
    double ci = Z / G;
    if (!(ci > -1 && ci < 1))
        throw std::domain_error("inclination_triple: |Z| < G violated (node nu1 vanishes)");
    double c1 = (G1 * G1 + G * G - G2 * G2) / (2 * G * G1);
    if (!(c1 > -1 && c1 < 1))
        throw std::domain_error("inclination_triple: |G1 - G2| < G < G1 + G2 violated at i1 (node nu vanishes)");
    double c2 = (G2 * G2 + G * G - G1 * G1) / (2 * G * G2);
    if (!(c2 > -1 && c2 < 1))
        throw std::domain_error("inclination_triple: |G1 - G2| < G < G1 + G2 violated at i2 (node nu vanishes)");
    return {std::acos(ci), std::acos(c1), std::acos(c2)};
}

}  // namespace triad
