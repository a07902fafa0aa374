#pragma once
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "triad/linalg.hpp"

namespace triad {

struct LaplaceQuery {
    double s;     // positive half-integer order
    int k;        // Fourier index
    double alpha; // semi-axis ratio, in (0,1)
};

// Laplace coefficient b_s^{(k)}(alpha) = (1/2pi) \int_0^{2pi} cos(k t) (1 - 2 a cos t + a^2)^{-s} dt.
// Periodic trapezoidal quadrature, node count doubled until two refinements agree to 1e-13.
inline double laplace_coeff(const LaplaceQuery& q) {
    if (!(q.alpha > 0 && q.alpha < 1)) throw std::domain_error("laplace_coeff: alpha must lie in (0,1)");
    if (!(q.s > 0)) throw std::domain_error("laplace_coeff: order s must be positive");
    int k = std::abs(q.k);
    auto quad = [&](int N) {
        double sum = 0;
        for (int i = 0; i < N; ++i) {
            double t = TWO_PI * i / N;
            double den = 1.0 - 2.0 * q.alpha * std::cos(t) + q.alpha * q.alpha;
            sum += std::cos(k * t) * std::pow(den, -q.s);
        }
        return sum / N;
    };
    int N = 32;
    double prev = quad(N);
    for (; N <= (1 << 22); ) {
        N *= 2;
        double cur = quad(N);
        if (std::fabs(cur - prev) < 1e-13) return cur;
        prev = cur;
    }
    return prev;
}

inline double laplace_coeff(double s, int k, double alpha) { return laplace_coeff(LaplaceQuery{s, k, alpha}); }

// d = x/(sqrt(1+x^2)+1) with x = (sqrt(L1 L2)/|L1-L2|) * b(alpha), b = 4 b_{3/2}^{(2)} / b_{3/2}^{(1)}.
inline double d_value(double Lambda1, double Lambda2, double alpha) {
    if (Lambda1 == Lambda2) throw std::domain_error("d_value: Lambda1 == Lambda2 (singular denominator)");
    double b1 = laplace_coeff(1.5, 1, alpha);
    double b2 = laplace_coeff(1.5, 2, alpha);
    double b = 4.0 * b2 / b1;
    double x = std::sqrt(Lambda1 * Lambda2) / std::fabs(Lambda1 - Lambda2) * b;
    return x / (std::sqrt(1.0 + x * x) + 1.0);
}

// Leading-order (alpha^2) values of the torsion building-block functions.
// Entries that are O(alpha^3) or smaller at this order are reported as 0.
struct ExpansionTable {
    double r1_12, r1_21;  // r1(a1,a2), r1(a2,a1)
    double r2;            // r2(a1,a2) = r2(a2,a1)
    double r3;            // O(alpha^3)
    double r4;            // O(alpha^4)
    double C1;
    double r1_star;
    double s1_12, s1_21;
    double s1_star_12, s1_star_21;
    double s2;            // O(alpha^3)
    double s2_star;       // O(alpha^3)
};

inline ExpansionTable expansion_table(double a1, double a2) {
    if (!(a1 > 0 && a1 < a2)) throw std::domain_error("expansion_table: require 0 < a1 < a2");
    double al = a1 / a2;
    double al2 = al * al;
    ExpansionTable t{};
    t.r1_12 = 3.0 / (16.0 * a2) * al2;
    t.r1_21 = -3.0 / (4.0 * a2) * al2;
    t.r2 = -9.0 / (16.0 * a2) * al2;
    t.r3 = 0.0;
    t.r4 = 0.0;
    t.C1 = -3.0 / (4.0 * a2) * al2;
    t.r1_star = -3.0 / (16.0 * a2) * al2;
    t.s1_12 = 3.0 / a2 * al2;
    t.s1_21 = 9.0 / (8.0 * a2) * al2;
    t.s1_star_12 = -3.0 / (4.0 * a2) * al2;
    t.s1_star_21 = 9.0 / (8.0 * a2) * al2;
    t.s2 = 0.0;
    t.s2_star = 0.0;
    return t;
}

}  // namespace triad
