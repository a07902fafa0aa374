#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "triad/canonicity.hpp"

using namespace triad;

namespace {

std::mt19937 rng(2024);
std::uniform_real_distribution<double> uu(0, 1);

Vec12 random_jrd_vec() {
    double L1 = 4.0 + 2.0 * uu(rng), L2 = 0.8 + 0.4 * uu(rng);
    double G1 = L1 * (0.5 + 0.4 * uu(rng)), G2 = L2 * (0.4 + 0.4 * uu(rng));
    double lo = std::fabs(G1 - G2), hi = G1 + G2;
    double G = lo + (0.2 + 0.6 * uu(rng)) * (hi - lo);
    double Z = G * (-0.7 + 1.4 * uu(rng));
    return {L1, TWO_PI * uu(rng), L2, TWO_PI * uu(rng), G1, TWO_PI * uu(rng),
            G2, TWO_PI * uu(rng), G,  TWO_PI * uu(rng), Z,  TWO_PI * uu(rng)};
}

Vec12 random_rps_vec() {
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

Vec12 random_p_vec() {
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

}  // namespace

TEST_CASE("symplectic defect vanishes for all three charts") {
    MassConfig mc(1.0, 1.0, 0.05, 1e-3);
    auto jh = jrd_handle(mc);
    auto rh = rps_pi_handle(mc);
    auto ph = p_handle(mc);
    for (int i = 0; i < 10; ++i) {
        CHECK(symplectic_defect(jh, random_jrd_vec()) < 1e-6);
        CHECK(symplectic_defect(rh, random_rps_vec()) < 1e-6);
        CHECK(symplectic_defect(ph, random_p_vec()) < 1e-6);
    }
}

TEST_CASE("symplectic defect detects a mis-paired ordering") {
    MassConfig mc(1.0, 1.0, 0.05, 1e-3);
    auto jh = jrd_handle(mc);
    // exchange the two members of the (G, gamma) pair: anti-canonical in that plane
    ChartHandle bad{"jrd-swapped", [jh](const Vec12& v) {
                        Vec12 w = v;
                        std::swap(w[8], w[9]);
                        return jh.map(w);
                    }};
    Vec12 pt = random_jrd_vec();
    std::swap(pt[8], pt[9]);
    CHECK(symplectic_defect(bad, pt) > 0.1);
}

TEST_CASE("loop integrals of the canonical one-form agree") {
    MassConfig mc(1.0, 1.0, 0.05, 1e-3);
    auto jh = jrd_handle(mc);
    auto rh = rps_pi_handle(mc);
    auto ph = p_handle(mc);

    Vec12 jp = random_jrd_vec();
    Vec12 jamp = {0.03, 0.2, 0.02, 0.2, 0.01, 0.2, 0.01, 0.2, 0.01, 0.2, 0.01, 0.2};
    CHECK(oneform_defect(jh, jp, jamp) < 1e-7);

    Vec12 rp = random_rps_vec();
    Vec12 ramp = {0.03, 0.2, 0.02, 0.2, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01};
    CHECK(oneform_defect(rh, rp, ramp) < 1e-7);

    Vec12 pp = random_p_vec();
    Vec12 pamp = {0.03, 0.2, 0.02, 0.2, 0.01, 0.2, 0.01, 0.1, 0.01, 0.2, 0.01, 0.2};
    CHECK(oneform_defect(ph, pp, pamp) < 1e-7);
}

TEST_CASE("poisson brackets of angular momentum components close under so(3)") {
    MassConfig mc(1.0, 1.0, 0.05, 1e-3);
    CartesianState s = jrd_to_cartesian(
        JrdCoords{5.0, 1.0, 3.8, 0.6, 3.5, 0.4, 0.9, 1.4, 0.8, 2.2, 2.9, 0.7}, mc);
    auto Cx = [](const CartesianState& st) { return total_angular_momentum(st).x; };
    auto Cy = [](const CartesianState& st) { return total_angular_momentum(st).y; };
    auto Cz = [](const CartesianState& st) { return total_angular_momentum(st).z; };
    Vec3 C = total_angular_momentum(s);
    CHECK(std::fabs(poisson_bracket(Cx, Cy, s) - C.z) < 1e-6);
    CHECK(std::fabs(poisson_bracket(Cy, Cz, s) - C.x) < 1e-6);
    CHECK(std::fabs(poisson_bracket(Cz, Cx, s) - C.y) < 1e-6);
}

TEST_CASE("poisson bracket of conserved quantities with the energy vanishes") {
    MassConfig mc(1.0, 1.0, 0.05, 1e-3);
    CartesianState s = jrd_to_cartesian(
        JrdCoords{5.0, 1.0, 3.8, 0.6, 3.5, 0.4, 0.9, 1.4, 0.8, 2.2, 2.9, 0.7}, mc);
    auto H = [mc](const CartesianState& st) { return hamiltonian(st, mc); };
    auto Cz = [](const CartesianState& st) { return total_angular_momentum(st).z; };
    auto C2 = [](const CartesianState& st) {
        Vec3 C = total_angular_momentum(st);
        return dot(C, C);
    };
    CHECK(std::fabs(poisson_bracket(H, Cz, s)) < 1e-6);
    CHECK(std::fabs(poisson_bracket(H, C2, s)) < 1e-5);
    CHECK(std::fabs(poisson_bracket(H, H, s)) < 1e-6);
}

TEST_CASE("roundtrip defects stay below 1e-9") {
    MassConfig mc(1.0, 1.0, 0.05, 1e-3);
    for (int i = 0; i < 50; ++i) {
        Vec12 v = random_jrd_vec();
        JrdCoords jc{v[0], v[2], v[4], v[6], v[8], v[10], v[1], v[3], v[5], v[7], v[9], v[11]};
        CHECK(jrd_roundtrip_defect(jc, mc) < 1e-9);
        Vec12 w = random_p_vec();
        PCoords pc{w[0], w[2], w[4], w[6], w[8], w[10], w[1], w[3], w[5], w[7], w[9], w[11]};
        CHECK(p_roundtrip_defect(pc, mc) < 1e-9);
    }
}
