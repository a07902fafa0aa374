#pragma once
#include <stdexcept>

#include "triad/linalg.hpp"
#include "triad/masses.hpp"

namespace triad {

// Heliocentric phase-space point: momenta y(j), positions x(j) of the two planets.
struct CartesianState {
    Vec3 y1, y2, x1, x2;
};

struct PerturbationValue {
    double direct;    // -mbar1*mbar2 / |x1 - x2|
    double indirect;  // y1 . y2 / m0
    double total;
};

inline PerturbationValue perturbation_value(const CartesianState& s, const MassConfig& mc) {
    double d12 = norm(s.x1 - s.x2);
    if (!(d12 > 0)) throw std::domain_error("perturbation_value: collision x1 == x2");
    PerturbationValue p;
    p.direct = -mc.mbar(1) * mc.mbar(2) / d12;
    p.indirect = dot(s.y1, s.y2) / mc.m0;
    p.total = p.direct + p.indirect;
    return p;
}

// Two-body part: sum_j |y_j|^2/(2 mbar_j) - mbar_j M_j / |x_j|
inline double kepler_energy(const CartesianState& s, const MassConfig& mc) {
    double r1 = norm(s.x1), r2 = norm(s.x2);
    if (!(r1 > 0 && r2 > 0)) throw std::domain_error("kepler_energy: collision with the star");
    return dot(s.y1, s.y1) / (2 * mc.mbar(1)) - mc.mbar(1) * mc.M(1) / r1 +
           dot(s.y2, s.y2) / (2 * mc.mbar(2)) - mc.mbar(2) * mc.M(2) / r2;
}

// Full Hamiltonian of the planetary problem: kepler part + mu * perturbation.
inline double hamiltonian(const CartesianState& s, const MassConfig& mc) {
    return kepler_energy(s, mc) + mc.mu * perturbation_value(s, mc).total;
}

inline Vec3 angular_momentum(const CartesianState& s, int j) {
    return j == 1 ? cross(s.x1, s.y1) : cross(s.x2, s.y2);
}

inline Vec3 total_angular_momentum(const CartesianState& s) {
    return cross(s.x1, s.y1) + cross(s.x2, s.y2);
}

}  // namespace triad
