#pragma once
#include <cmath>
#include <complex>
#include <stdexcept>

#include "triad/jrd.hpp"
#include "triad/kepler.hpp"
#include "triad/linalg.hpp"
#include "triad/masses.hpp"
#include "triad/state.hpp"

namespace triad {

using cplx = std::complex<double>;

// Real regularized chart adapted to the outer-retrograde configuration.
struct RpsPiCoords {
    double Lambda1, Lambda2;
    double lambda1, lambda2;
    double eta1, xi1, eta2, xi2, p, q, P, Q;
};

// Complexified version: t-variables and starred partners.
struct RpsPiComplex {
    double Lambda1, Lambda2;
    double lambda1, lambda2;
    cplx t1, t2, t3, T;
    cplx t1s, t2s, t3s, Ts;
};

// Analyticity-domain parameters.
struct DomainParams {
    double chi = 2.0;
    double alpha_minus = 0.05, alpha_plus = 0.2;
    double Lambda_minus = 0.5, Lambda_plus = 2.0;
    double eps0 = 0.0;  // 0 -> default 0.25*sqrt(Lambda_minus*(chi-1))
    double c = 0.5;     // aperture constant of the perihelia domain

    double eps0_value() const {
        return eps0 > 0 ? eps0 : 0.25 * std::sqrt(Lambda_minus * (chi - 1.0));
    }
    void validate(const MassConfig& mc) const {
        if (!(chi > 1)) throw std::domain_error("DomainParams: chi > 1 violated");
        if (!(alpha_minus > 0 && alpha_minus < alpha_plus && alpha_plus < 1))
            throw std::domain_error("DomainParams: 0 < alpha_- < alpha_+ < 1 violated");
        if (!(Lambda_minus > 0 && Lambda_minus < Lambda_plus))
            throw std::domain_error("DomainParams: 0 < Lambda_- < Lambda_+ violated");
        if (!(mc.m2 < std::sqrt(alpha_minus) / (2 * chi) * mc.m1))
            throw std::domain_error("DomainParams: mass bound m2 < sqrt(alpha_-)/(2 chi) m1 violated");
        if (mc.m1 > 4 * mc.m2 && !(mc.mu < 3 * mc.m0 / (mc.m1 - 4 * mc.m2)))
            throw std::domain_error("DomainParams: mu bound violated");
        if (!(c > 0 && c < 1)) throw std::domain_error("DomainParams: c in (0,1) violated");
    }
    double k_factor(const MassConfig& mc, double alpha) const {
        return mc.m1 / mc.m2 * std::sqrt((mc.m0 + mc.mu * mc.m2) / (mc.m0 + mc.mu * mc.m1) * alpha);
    }
    double k_minus(const MassConfig& mc) const { return k_factor(mc, alpha_minus); }
    double k_plus(const MassConfig& mc) const { return k_factor(mc, alpha_plus); }
    bool in_L(double Lambda1, double Lambda2, const MassConfig& mc) const {
        return Lambda_minus < Lambda2 && Lambda2 < Lambda_plus &&
               k_minus(mc) * Lambda2 < Lambda1 && Lambda1 < k_plus(mc) * Lambda2;
    }
};

// ---------- complexification ----------

inline RpsPiComplex complexify(const RpsPiCoords& r) {
    const cplx I(0, 1);
    const double s2 = std::sqrt(2.0);
    RpsPiComplex c;
    c.Lambda1 = r.Lambda1; c.Lambda2 = r.Lambda2;
    c.lambda1 = r.lambda1; c.lambda2 = r.lambda2;
    c.t1 = (r.eta1 - I * r.xi1) / s2;
    c.t2 = (I * r.eta2 - r.xi2) / s2;
    c.t3 = (I * r.p - r.q) / s2;
    c.T = (r.P - I * r.Q) / s2;
    c.t1s = (r.eta1 + I * r.xi1) / (s2 * I);
    c.t2s = (I * r.eta2 + r.xi2) / (s2 * I);
    c.t3s = (I * r.p + r.q) / (s2 * I);
    c.Ts = (r.P + I * r.Q) / (s2 * I);
    return c;
}

inline RpsPiCoords decomplexify(const RpsPiComplex& c) {
    const cplx I(0, 1);
    const double s2 = std::sqrt(2.0);
    RpsPiCoords r;
    r.Lambda1 = c.Lambda1; r.Lambda2 = c.Lambda2;
    r.lambda1 = c.lambda1; r.lambda2 = c.lambda2;
    // pair type a: t = (eta - i xi)/sqrt2, t* = (eta + i xi)/(sqrt2 i)
    r.eta1 = ((c.t1 + I * c.t1s) / s2).real();
    r.xi1 = ((c.t1s + I * c.t1) / s2).real();
    // pair type b: t = (i eta - xi)/sqrt2, t* = (i eta + xi)/(sqrt2 i)
    r.eta2 = ((c.t2s - I * c.t2) / s2).real();
    r.xi2 = ((I * c.t2s - c.t2) / s2).real();
    r.p = ((c.t3s - I * c.t3) / s2).real();
    r.q = ((I * c.t3s - c.t3) / s2).real();
    // T pair has type a
    r.P = ((c.T + I * c.Ts) / s2).real();
    r.Q = ((c.Ts + I * c.T) / s2).real();
    return r;
}

// ---------- jrd <-> complex chart ----------

inline RpsPiComplex rpspi_from_jrd(const JrdCoords& j) {
    auto sq = [](double v, const char* what) {
        if (v < -1e-14) throw std::domain_error(std::string("rpspi_from_jrd: negative radicand: ") + what);
        return std::sqrt(std::max(v, 0.0));
    };
    const cplx I(0, 1);
    RpsPiComplex c;
    c.Lambda1 = j.Lambda1; c.Lambda2 = j.Lambda2;
    double a1 = j.gamma1 + j.gamma + j.zeta;
    double a2 = -j.gamma2 + j.gamma + j.zeta;
    double a3 = j.gamma + j.zeta;
    c.t1 = sq(j.Lambda1 - j.G1, "Lambda1 - G1") * std::exp(I * a1);
    c.t2 = -I * sq(j.Lambda2 - j.G2, "Lambda2 - G2") * std::exp(I * a2);
    c.t3 = -I * sq(j.G - j.G1 + j.G2, "G - G1 + G2") * std::exp(I * a3);
    c.T = sq(j.G - j.Z, "G - Z") * std::exp(I * j.zeta);
    c.t1s = -I * sq(j.Lambda1 - j.G1, "Lambda1 - G1") * std::exp(-I * a1);
    c.t2s = -sq(j.Lambda2 - j.G2, "Lambda2 - G2") * std::exp(-I * a2);
    c.t3s = -sq(j.G - j.G1 + j.G2, "G - G1 + G2") * std::exp(-I * a3);
    c.Ts = -I * sq(j.G - j.Z, "G - Z") * std::exp(-I * j.zeta);
    c.lambda1 = mod2pi(j.ell1 + a1);
    c.lambda2 = mod2pi(j.ell2 + j.gamma2 - j.gamma - j.zeta);
    return c;
}

// G as conserved by the rps_pi chart
inline double rpspi_G(const RpsPiCoords& r) {
    double u1 = 0.5 * (r.eta1 * r.eta1 + r.xi1 * r.xi1);
    double u2 = 0.5 * (r.eta2 * r.eta2 + r.xi2 * r.xi2);
    return r.Lambda1 - r.Lambda2 - u1 + u2 + 0.5 * (r.p * r.p + r.q * r.q);
}

// Inverse of the defining relations on real points; requires all radial
// variables nonzero (a jrd-regular point). Used as the second evaluation path.
inline JrdCoords jrd_from_rpspi(const RpsPiCoords& r) {
    double u1 = 0.5 * (r.eta1 * r.eta1 + r.xi1 * r.xi1);
    double u2 = 0.5 * (r.eta2 * r.eta2 + r.xi2 * r.xi2);
    JrdCoords j;
    j.Lambda1 = r.Lambda1; j.Lambda2 = r.Lambda2;
    j.G1 = r.Lambda1 - u1;
    j.G2 = r.Lambda2 - u2;
    j.G = rpspi_G(r);
    j.Z = j.G - 0.5 * (r.P * r.P + r.Q * r.Q);
    double gz = std::atan2(-r.q, -r.p);          // gamma + zeta = arg(i t3)
    j.zeta = mod2pi(std::atan2(-r.Q, r.P));      // zeta = arg(T)
    j.gamma = mod2pi(gz - j.zeta);
    double g1tot = std::atan2(-r.xi1, r.eta1);   // gamma1 + gamma + zeta = arg(t1)
    j.gamma1 = mod2pi(g1tot - gz);
    double a2 = std::atan2(-r.xi2, -r.eta2);     // gamma + zeta - gamma2 = arg(i t2)
    j.gamma2 = mod2pi(gz - a2);
    j.ell1 = mod2pi(r.lambda1 - g1tot);
    j.ell2 = mod2pi(r.lambda2 + a2);
    return j;
}

// ---------- involution and symmetries (complex side) ----------

inline RpsPiComplex phi2_minus(const RpsPiComplex& c) {
    RpsPiComplex o = c;
    o.Lambda2 = -c.Lambda2;
    o.lambda2 = -c.lambda2;
    return o;
}

enum class SymmetryKind { Rg, R3minus, Rswap };

inline RpsPiComplex symmetry_transform(SymmetryKind kind, const RpsPiComplex& c, double g = 0.0) {
    const cplx I(0, 1);
    RpsPiComplex o = c;
    switch (kind) {
        case SymmetryKind::Rg: {
            cplx e = std::exp(I * g), em = std::exp(-I * g);
            o.lambda1 = c.lambda1 + g;
            o.lambda2 = c.lambda2 - g;
            o.t1 = c.t1 * e; o.t2 = c.t2 * e; o.t3 = c.t3 * e;
            o.t1s = c.t1s * em; o.t2s = c.t2s * em; o.t3s = c.t3s * em;
            o.T = c.T * e; o.Ts = c.Ts * em;
            break;
        }
        case SymmetryKind::R3minus:
            o.t3 = -c.t3; o.t3s = -c.t3s;
            o.T = -c.T; o.Ts = -c.Ts;
            break;
        case SymmetryKind::Rswap:
            o.lambda1 = 0.5 * M_PI - c.lambda1;
            o.lambda2 = -0.5 * M_PI - c.lambda2;
            o.t1 = -c.t1s; o.t2 = -c.t2s; o.t3 = c.t3;
            o.t1s = -c.t1; o.t2s = -c.t2; o.t3s = c.t3s;
            break;
    }
    return o;
}

// ---------- real chart to Cartesian (explicit regularized map) ----------

namespace detail {
// standard planar Poincare map (third components zero)
inline void planar_poincare(double Lambda, double lambda, double eta, double xi,
                            int body, const MassConfig& mc, Vec3& x, Vec3& y) {
    double u = 0.5 * (eta * eta + xi * xi);
    double G = Lambda - u;
    if (!(G > 0)) throw std::domain_error("rpspi_to_cartesian: secular variables too large (G_j <= 0)");
    // the reversed outer body carries the opposite in-plane angle convention
    double g = (eta == 0 && xi == 0) ? 0.0
                                     : (body == 1 ? std::atan2(-xi, eta) : std::atan2(xi, -eta));
    auto [xo, yo] = orbital_state({Lambda, G, lambda - g}, body, mc);
    Mat3 R = rotation(3, g);
    x = R * xo;
    y = R * yo;
}
}  // namespace detail

inline CartesianState rpspi_to_cartesian(const RpsPiCoords& r, const MassConfig& mc,
                                         double denominator_floor = 1e-10) {
    double u1sq = r.eta1 * r.eta1 + r.xi1 * r.xi1;
    double u2sq = r.eta2 * r.eta2 + r.xi2 * r.xi2;
    double pq = r.p * r.p + r.q * r.q;
    double PQ = r.P * r.P + r.Q * r.Q;

    double den = 2 * (r.Lambda1 - r.Lambda2) - u1sq + u2sq + pq;  // = 2G
    double den1 = 2 * r.Lambda1 - u1sq;                            // = 2G1
    double den2 = 2 * r.Lambda2 - u2sq;                            // = 2G2
    if (den <= denominator_floor || den1 <= denominator_floor || den2 <= denominator_floor)
        throw std::domain_error("rpspi_to_cartesian: denominator too close to zero (outside domain)");

    double c2s = 1.0 / den;
    double c1s = (2 * r.Lambda2 - u2sq - 0.5 * pq) / (den * den1);
    double c2 = (2 * r.Lambda1 - u1sq + 0.5 * pq) / (den * den2);

    auto sqr = [](double v) {
        if (v < -1e-13) throw std::domain_error("rpspi_to_cartesian: negative radicand (outside domain)");
        return std::sqrt(std::max(v, 0.0));
    };
    double s1s = sqr(c1s * (2 - pq * c1s));
    double s2s = sqr(c2s * (2 - PQ * c2s));
    double s2v = sqr(c2 * (2 - pq * c2));

    Mat3 R0, R1, R2;
    R0.a = {1 - r.Q * r.Q * c2s, -r.P * r.Q * c2s, -r.Q * s2s,
            -r.P * r.Q * c2s, 1 - r.P * r.P * c2s, -r.P * s2s,
            r.Q * s2s, r.P * s2s, 1 - PQ * c2s};
    R1.a = {1 - r.q * r.q * c1s, r.p * r.q * c1s, -r.q * s1s,
            r.p * r.q * c1s, 1 - r.p * r.p * c1s, r.p * s1s,
            r.q * s1s, -r.p * s1s, 1 - pq * c1s};
    R2.a = {1 - r.q * r.q * c2, r.p * r.q * c2, -r.q * s2v,
            r.p * r.q * c2, 1 - r.p * r.p * c2, r.p * s2v,
            r.q * s2v, -r.p * s2v, 1 - pq * c2};

    Vec3 xpl1, ypl1, xpl2, ypl2;
    detail::planar_poincare(r.Lambda1, r.lambda1, r.eta1, r.xi1, 1, mc, xpl1, ypl1);
    detail::planar_poincare(r.Lambda2, r.lambda2, r.eta2, r.xi2, 2, mc, xpl2, ypl2);
    // 2-reversed: reflect the second body's planar coordinates
    xpl2.y = -xpl2.y;
    ypl2.y = -ypl2.y;

    CartesianState s;
    Mat3 M1 = R0 * R1, M2 = R0 * R2;
    s.x1 = M1 * xpl1; s.y1 = M1 * ypl1;
    s.x2 = M2 * xpl2; s.y2 = M2 * ypl2;
    return s;
}

// Real chart from jrd values (inverse of the real-to-jrd relations).
inline RpsPiCoords rpspi_real_from_jrd(const JrdCoords& j) {
    return decomplexify(rpspi_from_jrd(j));
}

}  // namespace triad
