#pragma once
#include <cmath>
#include <random>

#include "triad/canonicity.hpp"

namespace triad {

// Random chart points drawn from well-conditioned regions of each chart's
// domain, for Monte-Carlo verification of canonicity and round trips.

inline Vec12 sample_jrd_vec(std::mt19937& rng) {
    std::uniform_real_distribution<double> uu(0, 1);
    double L1 = 4.0 + 2.0 * uu(rng), L2 = 0.8 + 0.4 * uu(rng);
    double G1 = L1 * (0.5 + 0.4 * uu(rng)), G2 = L2 * (0.4 + 0.4 * uu(rng));
    double lo = std::fabs(G1 - G2), hi = G1 + G2;
    double G = lo + (0.2 + 0.6 * uu(rng)) * (hi - lo);
    double Z = G * (-0.7 + 1.4 * uu(rng));
    return {L1, TWO_PI * uu(rng), L2, TWO_PI * uu(rng), G1, TWO_PI * uu(rng),
            G2, TWO_PI * uu(rng), G,  TWO_PI * uu(rng), Z,  TWO_PI * uu(rng)};
}

inline Vec12 sample_rps_vec(std::mt19937& rng) {
    std::uniform_real_distribution<double> uu(0, 1);
    double L2 = 0.8 + 0.4 * uu(rng), L1 = L2 * (5.0 + 3.0 * uu(rng));
    auto pr = [&](double& a, double& b) {
        double r = 0.08 + 0.07 * uu(rng), ph = TWO_PI * uu(rng);
        a = r * std::cos(ph);
        b = r * std::sin(ph);
    };
    Vec12 v{L1, TWO_PI * uu(rng), L2, TWO_PI * uu(rng), 0, 0, 0, 0, 0, 0, 0, 0};
    pr(v[4], v[5]);
    pr(v[6], v[7]);
    pr(v[8], v[9]);
    pr(v[10], v[11]);
    return v;
}

inline Vec12 sample_p_vec(std::mt19937& rng) {
    std::uniform_real_distribution<double> uu(0, 1);
    for (;;) {
        double L2 = 0.8 + 0.4 * uu(rng), L1 = L2 * (5.0 + 3.0 * uu(rng));
        double G2 = L2 * (0.3 + 0.5 * uu(rng));
        double G = 1.0 + (0.7 * L1 - 1.0) * uu(rng);
        double m = std::min(G, G2);
        double Th = m * (-0.7 + 1.4 * uu(rng));
        double Z = G * (-0.7 + 1.4 * uu(rng));
        double th = TWO_PI * uu(rng);
        double G1 = g1_of_p(G, G2, Th, th);
        if (G1 < 0.1 * L1 || G1 > 0.95 * L1) continue;
        return {L1, TWO_PI * uu(rng), L2, TWO_PI * uu(rng), G2, TWO_PI * uu(rng),
                Th, th, G, TWO_PI * uu(rng), Z, TWO_PI * uu(rng)};
    }
}

inline Vec12 sample_chart_vec(const std::string& chart, std::mt19937& rng) {
    if (chart == "jrd") return sample_jrd_vec(rng);
    if (chart == "rps_pi") return sample_rps_vec(rng);
    if (chart == "p") return sample_p_vec(rng);
    throw std::domain_error("sample_chart_vec: unknown chart " + chart);
}

}  // namespace triad
