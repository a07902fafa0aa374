#pragma once
#include <stdexcept>

namespace triad {

// Mass parameters of the heliocentric three-body Hamiltonian.
// Planet j has mass mu*m_j; the gravitational constant is absorbed into the masses.
struct MassConfig {
    double m0 = 1.0;   // star
    double m1 = 1.0;   // inner planet (times mu)
    double m2 = 0.05;  // outer planet (times mu)
    double mu = 1e-3;  // perturbation parameter

    MassConfig() = default;
    MassConfig(double m0_, double m1_, double m2_, double mu_) : m0(m0_), m1(m1_), m2(m2_), mu(mu_) {
        if (m0 <= 0 || m1 <= 0 || m2 <= 0 || mu <= 0)
            throw std::domain_error("MassConfig: all of m0, m1, m2, mu must be positive");
    }

    // reduced mass of planet j
    double mbar(int j) const { return m0 * m(j) / (m0 + mu * m(j)); }
    // effective central mass seen by planet j
    double M(int j) const { return m0 + mu * m(j); }

    double m(int j) const {
        if (j == 1) return m1;
        if (j == 2) return m2;
        throw std::invalid_argument("MassConfig: body index must be 1 or 2");
    }
};

}  // namespace triad
