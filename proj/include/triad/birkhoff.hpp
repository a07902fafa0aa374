#pragma once
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "triad/laplace.hpp"
#include "triad/masses.hpp"
#include "triad/secular.hpp"

namespace triad {

using Cplx = std::complex<double>;
using Mat2c = std::array<std::array<Cplx, 2>, 2>;
using Mat4 = std::array<std::array<double, 4>, 4>;

// First-order normal-form data of the partially reduced retrograde problem.
struct SigmaData {
    double Lambda1 = 0, Lambda2 = 0;
    Mat2c sigma{};            // [[s/L1, -i st/sqrt(L1 L2)], [same, -s/L2]]
    double varsigma = 0;      // -(1/L1 - 1/L2) s
    double eigen1 = 0, eigen2 = 0;
    double discriminant = 0;  // (tr)^2 - 4 det, positive on the domain
    double x = 0;             // hyperbolic angle of the diagonalizer
    double s_val = 0, stilde_val = 0;
    double alpha = 0, a2 = 0;
};

inline SigmaData sigma_matrix(double Lambda1, double Lambda2, const MassConfig& mc) {
    SigmaData sd;
    sd.Lambda1 = Lambda1;
    sd.Lambda2 = Lambda2;
    sd.a2 = semimajor_axis(Lambda2, 2, mc);
    double a1 = semimajor_axis(Lambda1, 1, mc);
    if (!(a1 > 0 && a1 < sd.a2))
        throw std::domain_error("sigma_matrix: requires 0 < a1 < a2");
    if (Lambda1 == Lambda2)
        throw std::domain_error("sigma_matrix: Lambda1 == Lambda2 is outside the domain");
    sd.alpha = a1 / sd.a2;
    double mm = mc.mbar(1) * mc.mbar(2);
    double b1 = laplace_coeff(1.5, 1, sd.alpha);
    double b2 = laplace_coeff(1.5, 2, sd.alpha);
    sd.s_val = -mm * sd.alpha / (2 * sd.a2) * b1;
    // sign fixed by the coefficient extraction cross-check (see sigma_crosscheck)
    sd.stilde_val = -mm * sd.alpha / (2 * sd.a2) * b2;
    const Cplx I(0, 1);
    double off = sd.stilde_val / std::sqrt(Lambda1 * Lambda2);
    sd.sigma[0][0] = sd.s_val / Lambda1;
    sd.sigma[1][1] = -sd.s_val / Lambda2;
    sd.sigma[0][1] = sd.sigma[1][0] = -I * off;
    sd.varsigma = -(1.0 / Lambda1 - 1.0 / Lambda2) * sd.s_val;
    double tr = sd.s_val * (1.0 / Lambda1 - 1.0 / Lambda2);
    double sum = sd.s_val * (1.0 / Lambda1 + 1.0 / Lambda2);
    sd.discriminant = sum * sum - 4 * off * off;
    if (!(sd.discriminant > 0))
        throw std::domain_error("sigma_matrix: non-positive discriminant");
    // eigen1 continues sigma_11 (the Lambda1 mode), eigen2 continues sigma_22
    sd.eigen1 = tr / 2 - std::sqrt(sd.discriminant) / 2;
    sd.eigen2 = tr / 2 + std::sqrt(sd.discriminant) / 2;
    // off-diagonal of U^t sigma U vanishes iff tanh(2x) = -2 off / sum
    sd.x = 0.5 * std::atanh(-2 * off / sum);
    return sd;
}

struct DiagonalizerData {
    Mat2c U{};          // hyperbolic-rotation form, U^t = U^-1, det U = 1
    Mat4 V{};           // diag(W(x), W(-x)), real and symplectic
    double diag1 = 0, diag2 = 0;  // entries of U^-1 sigma U
    double dx_dL1 = 0, dx_dL2 = 0;  // gradient of x, coefficient of the angle shift
};

inline Mat2c hyperbolic_U(double x) {
    const Cplx I(0, 1);
    Mat2c U{};
    U[0][0] = U[1][1] = std::cosh(x);
    U[0][1] = -I * std::sinh(x);
    U[1][0] = I * std::sinh(x);
    return U;
}

inline DiagonalizerData diagonalizer(const SigmaData& sd, const MassConfig& mc) {
    if (!(sd.discriminant > 0))
        throw std::domain_error("diagonalizer: non-positive discriminant");
    DiagonalizerData d;
    d.U = hyperbolic_U(sd.x);
    double ch = std::cosh(sd.x), sh = std::sinh(sd.x);
    // V = diag(W(x), W(-x)), W = [[cosh, sinh],[sinh, cosh]]
    d.V[0][0] = d.V[1][1] = ch;
    d.V[0][1] = d.V[1][0] = sh;
    d.V[2][2] = d.V[3][3] = ch;
    d.V[2][3] = d.V[3][2] = -sh;
    // U^t sigma U (exact diagonal entries)
    const Cplx I(0, 1);
    Mat2c Ut{};
    Ut[0][0] = ch; Ut[0][1] = I * sh;
    Ut[1][0] = -I * sh; Ut[1][1] = ch;
    Cplx D00 = 0, D11 = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            D00 += Ut[0][i] * sd.sigma[i][j] * d.U[j][0];
            D11 += Ut[1][i] * sd.sigma[i][j] * d.U[j][1];
        }
    d.diag1 = D00.real();
    d.diag2 = D11.real();
    double h1 = 1e-5 * (1 + sd.Lambda1), h2 = 1e-5 * (1 + sd.Lambda2);
    d.dx_dL1 = (sigma_matrix(sd.Lambda1 + h1, sd.Lambda2, mc).x -
                sigma_matrix(sd.Lambda1 - h1, sd.Lambda2, mc).x) / (2 * h1);
    d.dx_dL2 = (sigma_matrix(sd.Lambda1, sd.Lambda2 + h2, mc).x -
                sigma_matrix(sd.Lambda1, sd.Lambda2 - h2, mc).x) / (2 * h2);
    return d;
}

// Quartic factor of the leading-order torsion determinant.
inline double torsion_quartic(double t) {
    return 12 - 90 * t + 8 * t * t + 9 * t * t * t + 17 * t * t * t * t;
}

struct TorsionData {
    std::array<std::array<double, 3>, 3> T_check{};
    std::array<std::array<double, 2>, 2> T_hat{}, T_dot{};
    double det_T_dot = 0;
    double t_ratio = 0;
    double poly_value = 0;  // 12 - 90t + 8t^2 + 9t^3 + 17t^4
    double prefactor = 0;   // mbar1 mbar2 alpha^2 / (a2 Lambda2^2)
    double eps2_bound = 0;  // magnitude of the unmodeled O(eps2^2) correction
};

inline TorsionData torsion_matrices(double Lambda1, double Lambda2, const MassConfig& mc,
                                    double G, double eps2 = 0.0) {
    if (!(Lambda1 > Lambda2))
        throw std::domain_error("torsion_matrices: requires Lambda1 > Lambda2");
    if (!(G < Lambda1 - Lambda2))
        throw std::domain_error("torsion_matrices: requires G < Lambda1 - Lambda2");
    TorsionData td;
    td.t_ratio = Lambda2 / Lambda1;
    double t = td.t_ratio;
    double a2 = semimajor_axis(Lambda2, 2, mc);
    double a1 = semimajor_axis(Lambda1, 1, mc);
    double alpha = a1 / a2;
    td.prefactor = mc.mbar(1) * mc.mbar(2) * alpha * alpha / (a2 * Lambda2 * Lambda2);
    td.eps2_bound = eps2 * eps2;

    td.T_check = {{{0.75 * t * t, -2.25 * t, 3 * t * t - 2.25 * t},
                   {-2.25 * t, -3.0, 2.25 * t + 3.0},
                   {3 * t * t - 2.25 * t, 2.25 * t + 3.0, -0.75 * (1 + t) * (1 + t) - 0.75 * t}}};
    for (auto& row : td.T_check)
        for (auto& v : row) v *= td.prefactor;

    // index reduction to the constant-G submatrix
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            td.T_hat[i][j] = td.T_check[i][j] - td.T_check[i][2] - td.T_check[2][j] + td.T_check[2][2];

    double c = -0.75 * td.prefactor;
    td.T_dot = {{{c * (1 + 3 * t + 8 * t * t), c * (-5 + 6 * t - 5 * t * t)},
                 {c * (-5 + 6 * t - 5 * t * t), c * (13 - 9 * t + t * t)}}};
    td.det_T_dot = td.T_dot[0][0] * td.T_dot[1][1] - td.T_dot[0][1] * td.T_dot[1][0];
    td.poly_value = torsion_quartic(t);
    return td;
}

// Bracket the unique root of the quartic factor in (0, 1).
inline std::pair<double, double> torsion_quartic_root(double tol = 1e-13) {
    int sign_changes = 0;
    double lo = 0, hi = 0;
    const int N = 10000;
    double prev = torsion_quartic(0.0);
    for (int i = 1; i <= N; ++i) {
        double t = double(i) / N;
        double cur = torsion_quartic(t);
        if (prev * cur <= 0 && prev != cur) {
            ++sign_changes;
            lo = double(i - 1) / N;
            hi = t;
        }
        prev = cur;
    }
    if (sign_changes != 1)
        throw std::runtime_error("torsion_quartic_root: expected exactly one sign change in (0,1)");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (torsion_quartic(lo) * torsion_quartic(mid) <= 0 ? hi : lo) = mid;
    }
    return {lo, hi};
}

struct TorsionCell {
    double Lambda1, Lambda2, t, det, poly;
    bool in_domain;
    bool degenerate;  // straddles the quartic root
};

struct TorsionScan {
    std::vector<TorsionCell> cells;
    double root_lo = 0, root_hi = 0;      // bracket of the quartic root in (0,1)
    double certified_t_max = 0;           // largest scanned t strictly below the root
    double certified_min_abs_det = 0;     // min |det| over certified cells
    int n_certified = 0, n_degenerate = 0;
};

inline TorsionScan torsion_scan(const MassConfig& mc, double G, const std::vector<double>& L1s,
                                const std::vector<double>& ts) {
    TorsionScan scan;
    auto [rlo, rhi] = torsion_quartic_root();
    scan.root_lo = rlo;
    scan.root_hi = rhi;
    scan.certified_min_abs_det = 1e300;
    for (size_t j = 0; j < ts.size(); ++j) {
        double half_lo = j > 0 ? 0.5 * (ts[j] - ts[j - 1]) : 0.0;
        double half_hi = j + 1 < ts.size() ? 0.5 * (ts[j + 1] - ts[j]) : 0.0;
        for (double L1 : L1s) {
            TorsionCell c{};
            c.Lambda1 = L1;
            c.t = ts[j];
            c.Lambda2 = ts[j] * L1;
            c.poly = torsion_quartic(c.t);
            c.degenerate = (c.t - half_lo <= rhi && c.t + half_hi >= rlo);
            c.in_domain = (c.Lambda1 > c.Lambda2) && (G < c.Lambda1 - c.Lambda2);
            if (c.in_domain) {
                c.det = torsion_matrices(c.Lambda1, c.Lambda2, mc, G).det_T_dot;
                if (!c.degenerate && c.t + half_hi < rlo) {
                    scan.certified_min_abs_det = std::min(scan.certified_min_abs_det, std::fabs(c.det));
                    scan.certified_t_max = std::max(scan.certified_t_max, c.t);
                    ++scan.n_certified;
                }
            }
            if (c.degenerate) ++scan.n_degenerate;
            scan.cells.push_back(c);
        }
    }
    if (scan.n_certified == 0) scan.certified_min_abs_det = 0;
    return scan;
}

struct ResonanceReport {
    double margin = 0;
    std::array<int, 3> k_min{};
    double herman_sum = 0;  // Omega . (1,1,1), the excluded direction
};

// Smallest |Omega . k| over integer k with 0 < |k|_1 <= 2s, excluding multiples of (1,1,1).
inline ResonanceReport resonance_margin(const std::array<double, 3>& Omega, int s) {
    if (s < 2) throw std::domain_error("resonance_margin: requires s >= 2");
    ResonanceReport r;
    r.margin = 1e300;
    r.herman_sum = Omega[0] + Omega[1] + Omega[2];
    int K = 2 * s;
    for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2)
            for (int k3 = -K; k3 <= K; ++k3) {
                int n1 = std::abs(k1) + std::abs(k2) + std::abs(k3);
                if (n1 == 0 || n1 > K) continue;
                if (k1 == k2 && k2 == k3) continue;  // multiples of (1,1,1)
                double v = std::fabs(Omega[0] * k1 + Omega[1] * k2 + Omega[2] * k3);
                if (v < r.margin) {
                    r.margin = v;
                    r.k_min = {k1, k2, k3};
                }
            }
    return r;
}

// First-order invariants (eigenvalues and the third frequency) as a 3-vector.
inline std::array<double, 3> first_order_invariants(const SigmaData& sd) {
    return {sd.eigen1, sd.eigen2, sd.varsigma};
}

// Small-ratio asymptotics of the first-order invariants.
inline std::array<double, 3> first_order_asymptotics(double Lambda1, double Lambda2,
                                                     const MassConfig& mc) {
    double a1 = semimajor_axis(Lambda1, 1, mc), a2 = semimajor_axis(Lambda2, 2, mc);
    double c = 0.75 * mc.mbar(1) * mc.mbar(2) * a1 * a1 / (a2 * a2 * a2);
    return {-c / Lambda1, c / Lambda2, c * (1.0 / Lambda1 - 1.0 / Lambda2)};
}

}  // namespace triad
