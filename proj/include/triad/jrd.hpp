#pragma once
#include <cmath>
#include <stdexcept>
#include <string>

#include "triad/kepler.hpp"
#include "triad/linalg.hpp"
#include "triad/masses.hpp"
#include "triad/state.hpp"

namespace triad {

// Jacobi-Radau-Deprit action-angle coordinates.
struct JrdCoords {
    double Lambda1, Lambda2, G1, G2, G, Z;
    double ell1, ell2, gamma1, gamma2, gamma, zeta;
};

// Reference frame for chart inverses (defaults to the standard basis).
struct Frame {
    Vec3 k1{1, 0, 0}, k2{0, 1, 0}, k3{0, 0, 1};
    Vec3 to_world(const Vec3& v) const { return k1 * v.x + k2 * v.y + k3 * v.z; }
    Vec3 from_world(const Vec3& v) const { return {dot(v, k1), dot(v, k2), dot(v, k3)}; }
};

struct ChartSingularity : std::domain_error {
    explicit ChartSingularity(const std::string& what) : std::domain_error(what) {}
};

// Reject points within a relative tolerance of the chart's singular set:
// e_j = 0, node collapse (G = G1 + G2 or G = |G1 - G2|), Z = +-G, vanishing momenta.
inline void validate_jrd(const JrdCoords& c, double tol = 1e-6) {
    if (!(c.G > 0 && c.G1 > 0 && c.G2 > 0))
        throw ChartSingularity("jrd: G, G1, G2 must be positive");
    if (!(c.Lambda1 > 0 && c.Lambda2 > 0))
        throw std::domain_error("jrd: Lambda1, Lambda2 must be positive");
    if (c.Lambda1 - c.G1 <= tol * c.Lambda1)
        throw ChartSingularity("jrd singularity: G1 = Lambda1 (e1 = 0)");
    if (c.Lambda2 - c.G2 <= tol * c.Lambda2)
        throw ChartSingularity("jrd singularity: G2 = Lambda2 (e2 = 0)");
    if (c.G1 > c.Lambda1 || c.G2 > c.Lambda2)
        throw std::domain_error("jrd: G_j > Lambda_j (imaginary eccentricity)");
    if (c.G1 + c.G2 - c.G <= tol * c.G)
        throw ChartSingularity("jrd singularity: G = G1 + G2 (nodes collapse, i1 = i2 = 0)");
    if (std::fabs(c.G - (c.G1 - c.G2)) <= tol * c.G)
        throw ChartSingularity("jrd singularity: G = G1 - G2");
    if (std::fabs(c.G - (c.G2 - c.G1)) <= tol * c.G)
        throw ChartSingularity("jrd singularity: G = G2 - G1");
    if (c.G - c.Z <= tol * c.G)
        throw ChartSingularity("jrd singularity: Z = G (node nu1 vanishes)");
    if (c.G + c.Z <= tol * c.G)
        throw ChartSingularity("jrd singularity: Z = -G (node nu1 vanishes)");
}

inline CartesianState jrd_to_cartesian(const JrdCoords& c, const MassConfig& mc, const Frame& frame = {}) {
    validate_jrd(c);
    auto inc = inclination_triple(c.Z, c.G, c.G1, c.G2);
    const double s[2] = {1.0, -1.0};
    const double ij[2] = {inc.i1, inc.i2};
    const double gj[2] = {c.gamma1, c.gamma2};
    const double Lj[2] = {c.Lambda1, c.Lambda2};
    const double Gj[2] = {c.G1, c.G2};
    const double lj[2] = {c.ell1, c.ell2};

    CartesianState st;
    Mat3 base = rotation(3, c.zeta) * rotation(1, inc.i) * rotation(3, c.gamma);
    for (int j = 0; j < 2; ++j) {
        Mat3 R = base * rotation(1, s[j] * ij[j]) * rotation(3, gj[j]);
        auto [xo, yo] = orbital_state({Lj[j], Gj[j], lj[j]}, j + 1, mc);
        Vec3 x = frame.to_world(R * xo);
        Vec3 y = frame.to_world(R * yo);
        if (j == 0) { st.x1 = x; st.y1 = y; } else { st.x2 = x; st.y2 = y; }
    }
    return st;
}

// Orbital elements of one body extracted from its Cartesian pair.
struct BodyElements {
    double a, Lambda, G, e, ell;
    Vec3 C;       // angular momentum
    Vec3 P;       // unit perihelion direction
};

inline BodyElements body_elements(const Vec3& x, const Vec3& y, int j, const MassConfig& mc) {
    double mb = mc.mbar(j), M = mc.M(j);
    double r = norm(x);
    if (!(r > 0)) throw std::domain_error("body_elements: collision with the star");
    double E = dot(y, y) / (2 * mb) - mb * M / r;
    if (!(E < 0)) throw std::domain_error("body_elements: orbit is not elliptic");
    BodyElements be;
    be.a = -mb * M / (2 * E);
    be.Lambda = mb * std::sqrt(M * be.a);
    be.C = cross(x, y);
    be.G = norm(be.C);
    // Laplace-Runge-Lenz vector; e = |A| / (mbar^2 M)
    Vec3 A = cross(y, be.C) - (mb * mb * M / r) * x;
    be.e = norm(A) / (mb * mb * M);
    if (!(be.e > 0 && be.e < 1))
        throw std::domain_error("body_elements: eccentricity outside (0,1)");
    be.P = A / norm(A);
    // eccentric anomaly from r = a(1 - e cos z), x.y = Lambda e sin z
    double cz = (1.0 - r / be.a) / be.e;
    double sz = dot(x, y) / (be.Lambda * be.e);
    double z = std::atan2(sz, cz);
    be.ell = mod2pi(z - be.e * std::sin(z));
    return be;
}

inline JrdCoords cartesian_to_jrd(const CartesianState& s_world, const MassConfig& mc, const Frame& frame = {}) {
    CartesianState s{frame.from_world(s_world.y1), frame.from_world(s_world.y2),
                     frame.from_world(s_world.x1), frame.from_world(s_world.x2)};
    BodyElements b1 = body_elements(s.x1, s.y1, 1, mc);
    BodyElements b2 = body_elements(s.x2, s.y2, 2, mc);
    Vec3 C = b1.C + b2.C;
    double G = norm(C);
    Vec3 k1{1, 0, 0}, k3{0, 0, 1};
    Vec3 nu1 = cross(k3, C);
    Vec3 nu = cross(C, b1.C);
    if (norm(nu1) <= 1e-12 * G)
        throw ChartSingularity("cartesian_to_jrd: node nu1 = k3 x C vanishes (C parallel to k3)");
    if (norm(nu) <= 1e-12 * G * b1.G)
        throw ChartSingularity("cartesian_to_jrd: node nu = C x C1 vanishes (coplanar orbits)");

    JrdCoords c;
    c.Lambda1 = b1.Lambda; c.Lambda2 = b2.Lambda;
    c.G1 = b1.G; c.G2 = b2.G; c.G = G;
    c.Z = dot(C, k3);
    c.zeta = angle_about(k3, k1, nu1);
    c.gamma = angle_about(C, nu1, nu);
    c.gamma1 = angle_about(b1.C, nu, b1.P);
    c.gamma2 = angle_about(b2.C, nu, b2.P);
    c.ell1 = b1.ell; c.ell2 = b2.ell;
    return c;
}

}  // namespace triad
