#pragma once
#include <cmath>
#include <stdexcept>

#include "triad/jrd.hpp"
#include "triad/kepler.hpp"
#include "triad/linalg.hpp"
#include "triad/masses.hpp"
#include "triad/rps_pi.hpp"
#include "triad/state.hpp"

namespace triad {

// Perihelion-reduction coordinates: the inner perihelion direction replaces the
// individual orbital planes as the reference for the outer body.
struct PCoords {
    double Lambda1, Lambda2, G2, Theta, G, Z;
    double ell1, ell2, g2, theta, g, zeta;
};

// Norm of the inner angular momentum as a function of the action-like variables.
inline double g1_of_p(double G, double G2, double Theta, double theta) {
    if (!(G > 0 && G2 > 0)) throw std::domain_error("g1_of_p: G, G2 must be positive");
    if (!(std::fabs(Theta) < G && std::fabs(Theta) < G2))
        throw std::domain_error("g1_of_p: |Theta| < min(G, G2) violated");
    double rad = G * G + G2 * G2 - 2 * Theta * Theta +
                 2 * std::sqrt(G * G - Theta * Theta) * std::sqrt(G2 * G2 - Theta * Theta) *
                     std::cos(theta);
    return std::sqrt(std::max(rad, 0.0));
}

inline void validate_p(const PCoords& c, const MassConfig& mc, double tol = 1e-6) {
    if (!(c.Lambda1 > 0 && c.Lambda2 > 0))
        throw std::domain_error("p chart: Lambda1, Lambda2 must be positive");
    if (!(c.G > 0 && c.G2 > 0)) throw ChartSingularity("p chart singularity: G or G2 vanishes");
    if (c.G - std::fabs(c.Z) <= tol * c.G)
        throw ChartSingularity("p chart singularity: Z = +-G (node k3 x C vanishes)");
    if (c.G - std::fabs(c.Theta) <= tol * c.G)
        throw ChartSingularity("p chart singularity: Theta = +-G (node C x P1 vanishes)");
    if (c.G2 - std::fabs(c.Theta) <= tol * c.G2)
        throw ChartSingularity("p chart singularity: Theta = +-G2 (node P1 x C2 vanishes)");
    if (c.Lambda2 - c.G2 <= tol * c.Lambda2)
        throw ChartSingularity("p chart singularity: G2 = Lambda2 (e2 = 0)");
    double G1 = g1_of_p(c.G, c.G2, c.Theta, c.theta);
    if (G1 <= tol * c.G)
        throw ChartSingularity("p chart singularity: G1 = 0 (G2 = G and theta = pi)");
    if (c.Lambda1 - G1 <= tol * c.Lambda1)
        throw ChartSingularity("p chart singularity: G1 = Lambda1 (e1 = 0)");
    if (G1 > c.Lambda1) throw std::domain_error("p chart: G1 > Lambda1 (imaginary eccentricity)");
    (void)mc;
}

inline CartesianState p_to_cartesian(const PCoords& c, const MassConfig& mc, const Frame& frame = {}) {
    validate_p(c, mc);
    double i = std::acos(c.Z / c.G);
    double iota1 = std::acos(c.Theta / c.G);
    double iota2 = std::acos(c.Theta / c.G2);

    Mat3 Mbase = rotation(3, c.zeta) * rotation(1, i);
    Mat3 M1 = Mbase * rotation(3, c.g) * rotation(1, iota1);
    Mat3 M2 = M1 * rotation(3, c.theta) * rotation(1, iota2);
    Vec3 e1v{1, 0, 0}, e3v{0, 0, 1};

    Vec3 C = c.G * (Mbase * e3v);
    Vec3 P1 = M1 * e3v;
    Vec3 C2 = c.G2 * (M2 * e3v);
    Vec3 P2 = M2 * (rotation(3, c.g2 - 0.5 * M_PI) * e1v);
    Vec3 Q2 = M2 * (rotation(3, c.g2) * e1v);

    Vec3 C1 = C - C2;
    double G1 = norm(C1);
    Vec3 Q1 = cross(C1 / G1, P1);

    CartesianState st;
    const double Lj[2] = {c.Lambda1, c.Lambda2};
    const double Gj[2] = {G1, c.G2};
    const double lj[2] = {c.ell1, c.ell2};
    const Vec3 Pj[2] = {P1, P2};
    const Vec3 Qj[2] = {Q1, Q2};
    for (int j = 0; j < 2; ++j) {
        double mb = mc.mbar(j + 1), M = mc.M(j + 1);
        double e = eccentricity(Lj[j], Gj[j]);
        double a = Lj[j] * Lj[j] / (mb * mb * M);
        double z = solve_kepler(e, lj[j]);
        double se = std::sqrt(1 - e * e);
        Vec3 x = a * ((std::cos(z) - e) * Pj[j] + se * std::sin(z) * Qj[j]);
        Vec3 y = (mb * mb * M / Lj[j]) / (1 - e * std::cos(z)) *
                 (-std::sin(z) * Pj[j] + se * std::cos(z) * Qj[j]);
        x = frame.to_world(x);
        y = frame.to_world(y);
        if (j == 0) { st.x1 = x; st.y1 = y; } else { st.x2 = x; st.y2 = y; }
    }
    return st;
}

inline PCoords cartesian_to_p(const CartesianState& s_world, const MassConfig& mc, const Frame& frame = {}) {
    CartesianState s{frame.from_world(s_world.y1), frame.from_world(s_world.y2),
                     frame.from_world(s_world.x1), frame.from_world(s_world.x2)};
    BodyElements b1 = body_elements(s.x1, s.y1, 1, mc);
    BodyElements b2 = body_elements(s.x2, s.y2, 2, mc);
    Vec3 C = b1.C + b2.C;
    Vec3 k1{1, 0, 0}, k3{0, 0, 1};
    double G = norm(C);

    Vec3 nu1 = cross(k3, C);
    Vec3 fn1 = cross(C, b1.P);
    Vec3 nu2 = cross(b1.P, b2.C);
    Vec3 fn2 = cross(b2.C, b2.P);
    if (norm(nu1) <= 1e-12 * G)
        throw ChartSingularity("cartesian_to_p: node k3 x C vanishes");
    if (norm(fn1) <= 1e-12 * G)
        throw ChartSingularity("cartesian_to_p: node C x P1 vanishes");
    if (norm(nu2) <= 1e-12 * b2.G)
        throw ChartSingularity("cartesian_to_p: node P1 x C2 vanishes");
    if (norm(fn2) <= 1e-12 * b2.G)
        throw ChartSingularity("cartesian_to_p: node C2 x P2 vanishes");

    PCoords c;
    c.Lambda1 = b1.Lambda;
    c.Lambda2 = b2.Lambda;
    c.G2 = b2.G;
    c.Theta = dot(C, b1.P);
    c.G = G;
    c.Z = dot(C, k3);
    c.ell1 = b1.ell;
    c.ell2 = b2.ell;
    c.zeta = angle_about(k3, k1, nu1);
    c.g = angle_about(C, nu1, fn1);
    c.theta = angle_about(b1.P, fn1, nu2);
    c.g2 = angle_about(b2.C, nu2, fn2);
    return c;
}

// Reflection through the (k1, k3) plane expressed in chart variables.
inline PCoords reflect_R2minus(const PCoords& c) {
    PCoords o = c;
    o.Theta = -c.Theta;
    o.Z = -c.Z;
    o.theta = mod2pi(-c.theta);
    o.zeta = mod2pi(-c.zeta);
    return o;
}

// Cartesian counterpart of reflect_R2minus.
inline CartesianState reflect_R2minus(const CartesianState& s) {
    CartesianState o = s;
    o.x1.y = -o.x1.y; o.x2.y = -o.x2.y;
    o.y1.y = -o.y1.y; o.y2.y = -o.y2.y;
    return o;
}

enum class PlanarManifold { UpUp, DownUp, UpDown, None };

// Planar invariant manifolds of the averaged flow, identified by (Theta, theta).
inline PlanarManifold classify_manifold(const PCoords& c, double tol = 1e-9) {
    if (std::fabs(c.Theta) < tol) {
        if (std::fabs(angle_diff(c.theta, 0.0)) < tol) return PlanarManifold::UpDown;
        if (std::fabs(angle_diff(c.theta, M_PI)) < tol)
            return c.G > c.G2 ? PlanarManifold::UpUp : PlanarManifold::DownUp;
    }
    return PlanarManifold::None;
}

// Regularity domain around the planar outer-retrograde manifold.
struct PDomainReport {
    bool in_L = false;        // Lambda window, including Lambda1 > G + G_-
    bool in_G_window = false; // G2 in (G_-, G_+)
    bool in_B = false;        // (Theta, theta) box
    double G_minus = 0, G_plus = 0;
    bool ok() const { return in_L && in_G_window && in_B; }
};

inline PDomainReport p_domain_check(const PCoords& c, const DomainParams& dp, const MassConfig& mc) {
    PDomainReport r;
    r.G_minus = (2.0 / dp.c) * std::sqrt(dp.alpha_plus) * c.Lambda2;
    r.G_plus = std::min(c.Lambda1 - c.G, c.Lambda2);
    r.in_L = dp.in_L(c.Lambda1, c.Lambda2, mc) && c.Lambda1 > c.G + r.G_minus;
    r.in_G_window = c.G2 > r.G_minus && c.G2 < r.G_plus;
    double th = angle_diff(c.theta, 0.0);
    r.in_B = std::fabs(c.Theta) < 0.5 * std::min(c.G, c.G2) && std::fabs(th) < 0.5 * M_PI;
    return r;
}

}  // namespace triad
