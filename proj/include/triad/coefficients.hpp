#pragma once
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "triad/birkhoff.hpp"
#include "triad/laplace.hpp"
#include "triad/masses.hpp"
#include "triad/rps_pi.hpp"
#include "triad/state.hpp"

namespace triad {

namespace detail {

// compensated (Kahan) accumulator; the coefficient checks below resolve
// cancellations many orders below the raw function values
struct Kahan {
    double s = 0, c = 0;
    void add(double v) {
        double y = v - c, t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

inline std::complex<double> ipow(int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

}  // namespace detail

// Fast-angle average of the perturbation at fixed secular variables.
inline double averaged_perturbation(const RpsPiCoords& base, const MassConfig& mc, int n_lambda) {
    detail::Kahan acc;
    RpsPiCoords r = base;
    for (int i = 0; i < n_lambda; ++i) {
        r.lambda1 = TWO_PI * i / n_lambda;
        for (int j = 0; j < n_lambda; ++j) {
            r.lambda2 = TWO_PI * j / n_lambda;
            acc.add(perturbation_value(rpspi_to_cartesian(r, mc), mc).total);
        }
    }
    return acc.s / (double(n_lambda) * n_lambda);
}

// One Taylor coefficient of the averaged perturbation in the complex
// oscillator variables (t_1, t_2, t_3) and their starred partners.
struct TaylorCoefficient {
    std::array<int, 3> a{}, as{};
    std::complex<double> c{};
    int degree = 0;
    bool allowed = false;  // passes both selection rules below
};

// selection rule 1: equal total degree in plain and starred variables
inline bool rule_s1(const std::array<int, 3>& h) { return h[0] + h[1] + h[2] == 0; }
// selection rule 2: even in the vertical pair and in the planar pairs jointly
inline bool rule_s2(const std::array<int, 3>& h) {
    return h[2] % 2 == 0 && (h[0] + h[1]) % 2 == 0;
}

struct CoefficientTable {
    std::vector<TaylorCoefficient> entries;
    double Lambda1 = 0, Lambda2 = 0, rho = 0;
    int order = 0;

    const TaylorCoefficient* find(const std::array<int, 3>& a, const std::array<int, 3>& as) const {
        for (const auto& e : entries)
            if (e.a == a && e.as == as) return &e;
        return nullptr;
    }
    std::complex<double> at(const std::array<int, 3>& a, const std::array<int, 3>& as) const {
        const TaylorCoefficient* e = find(a, as);
        if (!e) throw std::out_of_range("CoefficientTable::at: slot not extracted");
        return e->c;
    }
};

// Extract all Taylor coefficients of total degree <= order by angular Fourier
// analysis on real tori |t_k| = rho * scale combined with a radial least-squares
// fit.  Works entirely on real sample points: each t_k is swept through
// r_k e^{i phi_k}, which pins the starred partner to (-+ i) conj(t_k).
inline CoefficientTable extract_coefficients(const MassConfig& mc, double Lambda1, double Lambda2,
                                             int order = 4, double rho = 0.06, int n_lambda = 16,
                                             double Pfix = 0.3, double Qfix = 0.3) {
    if (order < 2 || order % 2 != 0)
        throw std::domain_error("extract_coefficients: order must be even and >= 2");
    CoefficientTable tab;
    tab.Lambda1 = Lambda1;
    tab.Lambda2 = Lambda2;
    tab.rho = rho;
    tab.order = order;

    const int n_ang = 2 * order + 1;
    const std::array<double, 3> scales{1.0, 0.75, 0.5};
    const int n_comb = 27;
    const double s2 = std::sqrt(2.0);

    // sample the averaged perturbation on all tori
    std::vector<std::vector<double>> fval(n_comb, std::vector<double>(n_ang * n_ang * n_ang));
    RpsPiCoords r{};
    r.Lambda1 = Lambda1;
    r.Lambda2 = Lambda2;
    r.P = Pfix;
    r.Q = Qfix;
    std::vector<double> cphi(n_ang), sphi(n_ang);
    for (int i = 0; i < n_ang; ++i) {
        cphi[i] = std::cos(TWO_PI * i / n_ang);
        sphi[i] = std::sin(TWO_PI * i / n_ang);
    }
    for (int comb = 0; comb < n_comb; ++comb) {
        double r1 = rho * scales[comb % 3];
        double r2 = rho * scales[(comb / 3) % 3];
        double r3 = rho * scales[comb / 9];
        for (int i1 = 0; i1 < n_ang; ++i1)
            for (int i2 = 0; i2 < n_ang; ++i2)
                for (int i3 = 0; i3 < n_ang; ++i3) {
                    // t1 = r1 e^{i phi1}, t2 = r2 e^{i phi2}, t3 = r3 e^{i phi3}
                    r.eta1 = s2 * r1 * cphi[i1];
                    r.xi1 = -s2 * r1 * sphi[i1];
                    r.eta2 = s2 * r2 * sphi[i2];
                    r.xi2 = -s2 * r2 * cphi[i2];
                    r.p = s2 * r3 * sphi[i3];
                    r.q = -s2 * r3 * cphi[i3];
                    fval[comb][(i1 * n_ang + i2) * n_ang + i3] =
                        averaged_perturbation(r, mc, n_lambda);
                }
    }

    const std::complex<double> I(0, 1);
    // angular DFT bin for harmonic h on a given torus
    auto dft_bin = [&](int comb, const std::array<int, 3>& h) {
        detail::Kahan re, im;
        for (int i1 = 0; i1 < n_ang; ++i1)
            for (int i2 = 0; i2 < n_ang; ++i2)
                for (int i3 = 0; i3 < n_ang; ++i3) {
                    double ph = -TWO_PI *
                                (double(h[0] * i1 + h[1] * i2 + h[2] * i3)) / n_ang;
                    double f = fval[comb][(i1 * n_ang + i2) * n_ang + i3];
                    re.add(f * std::cos(ph));
                    im.add(f * std::sin(ph));
                }
        return std::complex<double>(re.s, im.s) / double(n_ang * n_ang * n_ang);
    };

    for (int h1 = -order; h1 <= order; ++h1)
        for (int h2 = -order; h2 <= order; ++h2)
            for (int h3 = -order; h3 <= order; ++h3) {
                std::array<int, 3> h{h1, h2, h3};
                int habs = std::abs(h1) + std::abs(h2) + std::abs(h3);
                if (habs > order) continue;
                // admissible degree vectors: d_k >= |h_k|, d_k = h_k mod 2
                std::vector<std::array<int, 3>> ds;
                for (int d1 = std::abs(h1); d1 <= order; d1 += 2)
                    for (int d2 = std::abs(h2); d1 + d2 <= order; d2 += 2)
                        for (int d3 = std::abs(h3); d1 + d2 + d3 <= order; d3 += 2)
                            ds.push_back({d1, d2, d3});
                int m = int(ds.size());
                // least squares over the 27 tori for F_h(r) = sum_d y_d r^d,
                // with the rho^|d| magnitude factored out of the columns
                std::vector<std::vector<double>> A(n_comb, std::vector<double>(m));
                std::vector<std::complex<double>> b(n_comb);
                for (int comb = 0; comb < n_comb; ++comb) {
                    double s1 = scales[comb % 3], s2c = scales[(comb / 3) % 3],
                           s3 = scales[comb / 9];
                    for (int u = 0; u < m; ++u)
                        A[comb][u] = std::pow(s1, ds[u][0]) * std::pow(s2c, ds[u][1]) *
                                     std::pow(s3, ds[u][2]);
                    b[comb] = dft_bin(comb, h);
                }
                // normal equations
                std::vector<std::vector<double>> N(m, std::vector<double>(m, 0.0));
                std::vector<std::complex<double>> rhs(m, 0.0);
                for (int u = 0; u < m; ++u) {
                    for (int v = 0; v < m; ++v)
                        for (int e = 0; e < n_comb; ++e) N[u][v] += A[e][u] * A[e][v];
                    for (int e = 0; e < n_comb; ++e) rhs[u] += A[e][u] * b[e];
                }
                // Gaussian elimination with partial pivoting
                for (int col = 0; col < m; ++col) {
                    int piv = col;
                    for (int rr = col + 1; rr < m; ++rr)
                        if (std::fabs(N[rr][col]) > std::fabs(N[piv][col])) piv = rr;
                    std::swap(N[col], N[piv]);
                    std::swap(rhs[col], rhs[piv]);
                    for (int rr = col + 1; rr < m; ++rr) {
                        double fct = N[rr][col] / N[col][col];
                        for (int cc = col; cc < m; ++cc) N[rr][cc] -= fct * N[col][cc];
                        rhs[rr] -= fct * rhs[col];
                    }
                }
                std::vector<std::complex<double>> y(m);
                for (int rr = m - 1; rr >= 0; --rr) {
                    std::complex<double> acc = rhs[rr];
                    for (int cc = rr + 1; cc < m; ++cc) acc -= N[rr][cc] * y[cc];
                    y[rr] = acc / N[rr][rr];
                }
                for (int u = 0; u < m; ++u) {
                    const auto& d = ds[u];
                    TaylorCoefficient tc;
                    tc.a = {(d[0] + h[0]) / 2, (d[1] + h[1]) / 2, (d[2] + h[2]) / 2};
                    tc.as = {(d[0] - h[0]) / 2, (d[1] - h[1]) / 2, (d[2] - h[2]) / 2};
                    tc.degree = d[0] + d[1] + d[2];
                    // remove the magnitude scaling and the fixed phases picked
                    // up by the starred variables on the real slice
                    std::complex<double> phase =
                        detail::ipow(-tc.as[0]) * detail::ipow(tc.as[1] + tc.as[2]);
                    double mag = std::pow(rho, tc.degree);
                    tc.c = y[u] / (mag * phase);
                    tc.allowed = rule_s1(h) && rule_s2(h);
                    tab.entries.push_back(tc);
                }
            }
    return tab;
}

// Verification report for the selection-rule structure of the averaged
// perturbation expansion.
struct SelectionRuleReport {
    CoefficientTable table;
    double max_allowed = 0;   // largest coefficient magnitude among allowed slots
    double worst_s1 = 0;      // largest magnitude violating rule 1
    double worst_s2 = 0;      // largest magnitude violating rule 2 (rule 1 satisfied)
    double worst_s3 = 0;      // worst defect of the planar index swap relation
    double worst_s4 = 0;      // worst defect of the signed transposition relation
    double forbidden_ratio() const {
        return std::max(worst_s1, worst_s2) / max_allowed;
    }
};

inline SelectionRuleReport dalembert_verify(const MassConfig& mc, double Lambda1, double Lambda2,
                                            int order = 4, double rho = 0.06, int n_lambda = 16) {
    SelectionRuleReport rep;
    rep.table = extract_coefficients(mc, Lambda1, Lambda2, order, rho, n_lambda);
    for (const auto& e : rep.table.entries) {
        std::array<int, 3> h{e.a[0] - e.as[0], e.a[1] - e.as[1], e.a[2] - e.as[2]};
        if (e.allowed)
            rep.max_allowed = std::max(rep.max_allowed, std::abs(e.c));
        else if (!rule_s1(h))
            rep.worst_s1 = std::max(rep.worst_s1, std::abs(e.c));
        else
            rep.worst_s2 = std::max(rep.worst_s2, std::abs(e.c));
        if (e.allowed) {
            if (const TaylorCoefficient* p = rep.table.find(e.as, e.a)) {
                // plain transposition between plain and starred slots
                rep.worst_s3 = std::max(rep.worst_s3, std::abs(e.c - p->c));
                // signed conjugate transposition from the reality relations
                int tot = e.degree / 2;
                int par = e.a[1] + e.as[1] + e.a[2] + e.as[2];
                double sign = ((tot + par) % 2 == 0) ? 1.0 : -1.0;
                rep.worst_s4 = std::max(rep.worst_s4, std::abs(p->c - sign * std::conj(e.c)));
            }
        }
    }
    return rep;
}

// Cross-check of the closed-form quadratic normal form against coefficients
// extracted from the numerically averaged perturbation.
struct SigmaCrosscheck {
    SigmaData closed;
    std::complex<double> c0, sigma11, sigma22, sigma12, sigma21, varsigma;
    double err_c0 = 0, err_sigma11 = 0, err_sigma22 = 0, err_sigma12 = 0, err_varsigma = 0;
};

inline SigmaCrosscheck sigma_crosscheck(const MassConfig& mc, double Lambda1, double Lambda2,
                                        double rho = 0.02, int n_lambda = 16) {
    SigmaCrosscheck sc;
    sc.closed = sigma_matrix(Lambda1, Lambda2, mc);
    CoefficientTable tab = extract_coefficients(mc, Lambda1, Lambda2, 4, rho, n_lambda);
    const std::complex<double> I(0, 1);
    sc.c0 = tab.at({0, 0, 0}, {0, 0, 0});
    // quadratic part of the expansion is i t.sigma.t* + i varsigma t3 t3*
    sc.sigma11 = -I * tab.at({1, 0, 0}, {1, 0, 0});
    sc.sigma22 = -I * tab.at({0, 1, 0}, {0, 1, 0});
    sc.sigma12 = -I * tab.at({1, 0, 0}, {0, 1, 0});
    sc.sigma21 = -I * tab.at({0, 1, 0}, {1, 0, 0});
    sc.varsigma = -I * tab.at({0, 0, 1}, {0, 0, 1});
    // reference for the constant term: both orbits circular and antiparallel
    double c0_ref = -mc.mbar(1) * mc.mbar(2) * laplace_coeff(0.5, 0, sc.closed.alpha) /
                    sc.closed.a2;
    sc.err_c0 = std::abs(sc.c0 - c0_ref) / std::fabs(c0_ref);
    sc.err_sigma11 = std::abs(sc.sigma11 - sc.closed.sigma[0][0]) / std::abs(sc.closed.sigma[0][0]);
    sc.err_sigma22 = std::abs(sc.sigma22 - sc.closed.sigma[1][1]) / std::abs(sc.closed.sigma[1][1]);
    sc.err_sigma12 = std::abs(sc.sigma12 - sc.closed.sigma[0][1]) / std::abs(sc.closed.sigma[0][1]);
    sc.err_varsigma = std::abs(sc.varsigma - sc.closed.varsigma) / std::fabs(sc.closed.varsigma);
    return sc;
}

}  // namespace triad
