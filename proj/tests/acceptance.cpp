// Acceptance gate: one line per criterion, exit 0 iff every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "triad/birkhoff.hpp"
#include "triad/canonicity.hpp"
#include "triad/coefficients.hpp"
#include "triad/dynamics.hpp"
#include "triad/sampling.hpp"
#include "triad/secular.hpp"

using namespace triad;

namespace {

int failures = 0;

void report(int n, bool ok, const char* what) {
    std::printf("criterion %d: %s - %s\n", n, ok ? "PASS" : "FAIL", what);
    std::fflush(stdout);
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

JrdCoords jrd_of(const Vec12& v) {
    return {v[0], v[2], v[4], v[6], v[8], v[10], v[1], v[3], v[5], v[7], v[9], v[11]};
}

PCoords p_of(const Vec12& v) {
    return {v[0], v[2], v[4], v[6], v[8], v[10], v[1], v[3], v[5], v[7], v[9], v[11]};
}

RpsPiCoords rps_of(const Vec12& v) {
    return {v[0], v[2], v[1], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11]};
}

// -------------------------------------------------------------- criterion 1

void criterion_symplectic() {
    auto t0 = std::chrono::steady_clock::now();
    MassConfig mc(1.0, 1.0, 0.05, 1e-3);
    std::mt19937 rng(11);
    bool ok = true;
    for (const ChartHandle& ch : {jrd_handle(mc), rps_pi_handle(mc), p_handle(mc)}) {
        double worst = 0;
        for (int i = 0; i < 1000; ++i)
            worst = std::max(worst, symplectic_defect(ch, sample_chart_vec(ch.name, rng)));
        ok = ok && worst < 1e-6;
        // plain finite differences must converge at second order
        Vec12 pt = sample_chart_vec(ch.name, rng);
        double d1 = symplectic_defect_h(ch, pt, 4e-4);
        double d2 = symplectic_defect_h(ch, pt, 2e-4);
        double d3 = symplectic_defect_h(ch, pt, 1e-4);
        double s1 = std::log2(d1 / d2), s2 = std::log2(d2 / d3);
        ok = ok && std::fabs(s1 - 2.0) < 0.3 && std::fabs(s2 - 2.0) < 0.3;
    }
    double dt = seconds_since(t0);
    ok = ok && dt < 120.0;
    std::printf("  (symplectic scan took %.1f s)\n", dt);
    report(1, ok, "symplectic defect < 1e-6 on 1000 points per chart, O(h^2) convergence, < 2 min");
}

// -------------------------------------------------------------- criterion 2

void criterion_roundtrips() {
    MassConfig mc(1.0, 1.0, 0.05, 1e-3);
    std::mt19937 rng(12);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        worst = std::max(worst, jrd_roundtrip_defect(jrd_of(sample_jrd_vec(rng)), mc));
        worst = std::max(worst, p_roundtrip_defect(p_of(sample_p_vec(rng)), mc));
        // third chart: out through the state and back via the jrd relations
        RpsPiCoords r = rps_of(sample_rps_vec(rng));
        RpsPiCoords b = rpspi_real_from_jrd(cartesian_to_jrd(rpspi_to_cartesian(r, mc), mc));
        worst = std::max(worst, std::fabs(b.Lambda1 - r.Lambda1));
        worst = std::max(worst, std::fabs(b.Lambda2 - r.Lambda2));
        worst = std::max(worst, std::fabs(angle_diff(b.lambda1, r.lambda1)));
        worst = std::max(worst, std::fabs(angle_diff(b.lambda2, r.lambda2)));
        for (auto pick : {&RpsPiCoords::eta1, &RpsPiCoords::xi1, &RpsPiCoords::eta2,
                          &RpsPiCoords::xi2, &RpsPiCoords::p, &RpsPiCoords::q,
                          &RpsPiCoords::P, &RpsPiCoords::Q})
            worst = std::max(worst, std::fabs(b.*pick - r.*pick));
    }
    report(2, worst < 1e-9, "chart round-trips exact to 1e-9 on 1000 points per chart");
}

// -------------------------------------------------------------- criterion 3

void criterion_selection_rules() {
    MassConfig mc(1.0, 1.0, 0.05, 1e-3);
    bool ok = true;
    for (double L1 : {6.0, 4.5}) {
        SelectionRuleReport rep = dalembert_verify(mc, L1, 1.0);
        ok = ok && rep.max_allowed > 0 && rep.worst_s1 < 1e-9 * rep.max_allowed &&
             rep.worst_s2 < 1e-9 * rep.max_allowed;
    }
    report(3, ok, "forbidden Taylor coefficients < 1e-9 of the largest allowed one at two Lambda values");
}

// -------------------------------------------------------------- criterion 4

void criterion_sigma() {
    MassConfig mc(1.0, 1.0, 0.05, 1e-3);
    SigmaCrosscheck sc = sigma_crosscheck(mc, 4.0, 1.0);  // alpha ~ 0.04 here
    bool ok = sc.err_c0 < 1e-6 && sc.err_sigma11 < 1e-6 && sc.err_sigma22 < 1e-6 &&
              sc.err_sigma12 < 1e-6 && sc.err_varsigma < 1e-6;
    DomainParams dp{};
    double km = dp.k_minus(mc), kp = dp.k_plus(mc);
    bool all_real = true;
    for (int i = 0; i < 100; ++i) {
        double L2 = dp.Lambda_minus + (dp.Lambda_plus - dp.Lambda_minus) * (i + 0.5) / 100.0;
        for (int j = 0; j < 100; ++j) {
            double L1 = L2 * (km + (kp - km) * (j + 0.5) / 100.0);
            all_real = all_real && sigma_matrix(L1, L2, mc).discriminant > 0;
        }
    }
    report(4, ok && all_real,
           "closed-form sigma matches extraction to 1e-6, eigenvalues real on a 100x100 grid");
}

// -------------------------------------------------------------- criterion 5

void criterion_torsion() {
    MassConfig mc(1.0, 1.0, 0.05, 1e-3);
    bool ok = torsion_quartic(0.0) == 12.0 && torsion_quartic(1.0) == -44.0;
    // determinant against the factorized closed form at scattered points
    for (double L1 : {3.0, 4.0, 6.0})
        for (double t : {0.05, 0.2, 0.6}) {
            TorsionData td = torsion_matrices(L1, t * L1, mc, 0.3);
            double ref = -(9.0 / 16.0) * td.prefactor * td.prefactor * torsion_quartic(t);
            ok = ok && std::fabs(td.det_T_dot - ref) < 1e-12 * std::fabs(ref);
        }
    // the quartic changes sign exactly once in (0, 1)
    int sign_changes = 0;
    double prev = torsion_quartic(1e-6);
    for (int k = 1; k <= 100000; ++k) {
        double cur = torsion_quartic(k / 100000.0 - 1e-6 * (k == 100000));
        if (prev * cur < 0) ++sign_changes;
        prev = cur;
    }
    auto [rlo, rhi] = torsion_quartic_root();
    ok = ok && sign_changes == 1 && rlo > 0 && rhi < 1 && rhi - rlo < 1e-12;
    // a certified region with the determinant bounded away from zero
    std::vector<double> L1s, ts;
    for (int i = 0; i < 5; ++i) L1s.push_back(3.0 + i);
    for (int j = 0; j < 40; ++j) ts.push_back(0.005 + 0.3 * j / 39.0);
    TorsionScan scan = torsion_scan(mc, 0.5, L1s, ts);
    ok = ok && scan.n_certified > 0 && scan.certified_min_abs_det > 0;
    std::printf("  (quartic root in [%.6f, %.6f], certified min |det| = %.3e)\n", rlo, rhi,
                scan.certified_min_abs_det);
    report(5, ok, "torsion determinant matches its quartic factorization with one root in (0,1)");
}

// -------------------------------------------------------------- criterion 6

void criterion_secular_identities() {
    MassConfig mc(1.0, 1.0, 1.0, 1e-3);
    auto ph = p_handle(mc);
    double L2 = 6.0, alpha = 0.05;
    double a2 = semimajor_axis(L2, 2, mc);
    double L1 = mc.mbar(1) * std::sqrt(mc.M(1) * alpha * a2);
    double G2 = 0.8 * L2, G = G2 - 0.5 * L1, Th = 0.1 * L1, G1t = 0.8 * L1;
    double num = G1t * G1t - G * G - G2 * G2 + 2 * Th * Th;
    double den = 2 * std::sqrt((G * G - Th * Th) * (G2 * G2 - Th * Th));
    double th = std::acos(num / den);
    Vec12 v{L1, 0.7, L2, 1.9, G2, 0.4, Th, th, G, 2.1, 0.3 * G, 1.1};

    double ind = torus_average(ph, v, [&](const CartesianState& s) {
        return perturbation_value(s, mc).indirect;
    }, 128);
    double dir = std::fabs(torus_average(ph, v, [&](const CartesianState& s) {
        return perturbation_value(s, mc).direct;
    }, 128));
    bool ok = std::fabs(ind) < 1e-10 * dir;

    auto m = multipole_average(ph, v, mc, 192);
    ok = ok && std::fabs(m.f1) < 1e-9 * std::fabs(m.f0);

    CartesianState s = p_to_cartesian(p_of(v), mc);
    auto b1 = body_elements(s.x1, s.y1, 1, mc);
    auto b2 = body_elements(s.x2, s.y2, 2, mc);
    double cf = quadrupole_closed_form(b1.C, b2.C, b1.P, L1, L2, alpha_ratio(L1, L2, mc));
    ok = ok && std::fabs(m.f2 - cf) < 1e-8 * std::fabs(cf);

    // the averaged quadrupole does not depend on the outer perihelion angle
    Vec12 vp = v, vm = v;
    vp[5] += 1e-2;
    vm[5] -= 1e-2;
    double dg2 = (multipole_average(ph, vp, mc, 192).f2 - multipole_average(ph, vm, mc, 192).f2) /
                 2e-2;
    ok = ok && std::fabs(dg2) < 1e-8 * std::fabs(m.f2);
    report(6, ok, "indirect and dipole averages vanish, quadrupole matches its closed forms");
}

// -------------------------------------------------------------- criterion 7

void criterion_equilibria() {
    MassConfig mc(1.0, 1.0, 1.0, 1e-3);
    // classification agrees with the sign predicate on the coefficients
    bool ok = true;
    double L1 = 3.0, L2 = 6.0;
    for (int i = 0; i < 60; ++i)
        for (int j = 0; j < 60; ++j) {
            double G = 0.3 + 1.2 * i / 59.0;
            double G2 = 0.3 + 1.2 * j / 59.0;
            double a = 5 * L1 * L1 * G - (G + G2) * (G + G2) * (4 * G + G2);
            double b = G - G2;
            if (std::fabs(a) < 1e-9 || std::fabs(b) < 1e-9) continue;  // boundary
            auto r = equilibrium_analysis(L1, L2, G2, G);
            bool hyp = a > 0 && b < 0;
            ok = ok && ((r.classification == EquilibriumClass::Hyperbolic) == hyp);
        }

    // frequencies against a Richardson-extrapolated Hessian of the fluctuation
    double G2 = 1.2, G = 1.0;
    SecularPoint sp{L1, L2, G2, 0.0, 0.0, 0.0, G, mc};
    auto rep = equilibrium_analysis(L1, L2, G2, G);
    double pref = -0.125 * std::pow(L2, 3) / (L1 * L1 * std::pow(G2, 5));
    auto P1at = [&](double Th, double th) {
        SecularPoint q = sp;
        q.Theta = Th;
        q.theta = th;
        return quadrupole_p(q).P1;
    };
    auto second = [&](bool in_Theta, double h) {
        double p = in_Theta ? P1at(h, 0) : P1at(0, h);
        double m = in_Theta ? P1at(-h, 0) : P1at(0, -h);
        return (p - 2 * P1at(0, 0) + m) / (h * h);
    };
    auto richardson = [&](bool in_Theta) {
        double h = 2e-3;
        return (4 * second(in_Theta, h / 2) - second(in_Theta, h)) / 3.0;
    };
    double a_fd = richardson(true) * G / (6 * pref);
    double b_fd = richardson(false) / (6 * pref * G * G2 * G2);
    double omega_fd = G * G2 * std::sqrt(-b_fd / a_fd);
    double Omega_fd = -0.75 * std::pow(L2, 3) / (L1 * L1 * std::pow(G2, 4)) *
                      std::sqrt(a_fd * (G2 - G));
    ok = ok && std::fabs(omega_fd - rep.omega) < 1e-8 * rep.omega;
    ok = ok && std::fabs(Omega_fd - rep.Omega) < 1e-8 * std::fabs(rep.Omega);

    // aligned configurations are elliptic, with the stated lower bound
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 300; ++i) {
        double Gs = 0.5 + 2 * u(rng);
        double G2s = (0.1 + 3.8 * u(rng)) * Gs;
        double L1s = (Gs + G2s) * (1.0 + 2 * u(rng));
        auto r = equilibrium_analysis(L1s, 2 * L1s, G2s, Gs);
        ok = ok && r.aligned_classification == EquilibriumClass::Elliptic &&
             r.ahat_coeff >= L1s * L1s * (Gs + G2s) * (1 - 1e-12) && r.bhat_coeff > 0;
    }
    report(7, ok, "hyperbolic exactly when a>0 and b<0, frequencies match the Hessian to 1e-8");
}

// -------------------------------------------------------------- criterion 8

void criterion_whiskers() {
    MassConfig mc(1.0, 1.0, 1.0, 1e-3);
    SecularPoint sp{3.0, 6.0, 1.2, 0.0, 0.0, 0.0, 1.0, mc};
    WhiskerReport rep = whisker_local(sp, 1e-3, 1e-3);
    bool ok = !rep.stable.empty() && !rep.unstable.empty();
    for (const auto& side : {rep.stable, rep.unstable})
        for (const WhiskerSample& ws : side)
            ok = ok && ws.monotone && std::fabs(ws.fitted_rate - rep.exponent) < 0.1 * rep.exponent;
    report(8, ok, "whisker points decay at the linearized rate within 10%");
}

// -------------------------------------------------------------- criterion 9

void criterion_dynamics() {
    // conservation at small mass ratio and small semimajor ratio
    MassConfig mc(1.0, 1.0, 0.05, 1e-4);
    double L2 = 1.0;
    double a2 = semimajor_axis(L2, 2, mc);
    double L1 = mc.mbar(1) * std::sqrt(mc.M(1) * 0.05 * a2);
    double G1 = 0.9 * L1, G2 = 0.9 * L2;
    double G = std::fabs(G1 - G2) + 0.6 * (G1 + G2 - std::fabs(G1 - G2));
    JrdCoords c0{L1, L2, G1, G2, G, 0.5 * G, 0.3, 1.1, 2.4, 0.8, 1.9, 5.5};
    CartesianState s0 = jrd_to_cartesian(c0, mc);
    double T1 = orbital_period(s0.x1, s0.y1, 1, mc);
    Trajectory tr = integrate(s0, mc, 100 * T1, T1 / 4);
    bool ok = !tr.truncated && tr.energy_drift < 1e-9 && tr.momentum_drift < 1e-9;
    CyclicReport cy = cyclic_validation(tr, mc);
    ok = ok && cy.g_drift_jrd < 1e-8 && cy.z_drift_jrd < 1e-8 && cy.g_drift_p < 1e-8 &&
         cy.z_drift_p < 1e-8;
    std::printf("  (drifts: E %.2e, C %.2e, G %.2e/%.2e, Z %.2e/%.2e)\n", tr.energy_drift,
                tr.momentum_drift, cy.g_drift_jrd, cy.g_drift_p, cy.z_drift_jrd, cy.z_drift_p);

    // departure rate from a hyperbolic secular equilibrium
    MassConfig mh(1.0, 1.0, 0.15, 0.03);
    double hL1 = 1.9, hL2 = 1.0, hG2 = 0.893, hG = 0.60;
    auto rep = equilibrium_analysis(hL1, hL2, hG2, hG);
    double w = rep.omega, q0 = 0.02;
    PCoords pc{hL1, hL2, hG2, std::sqrt(w / 2) * q0, hG, 0.5 * hG,
               0.7, 1.3, 0.4, q0 / std::sqrt(2 * w), 2.1, 5.0};
    SecularPoint sp{hL1, hL2, hG2, 0.0, 0.0, 0.0, hG, mh};
    double lam = whisker_exponent(sp, mh.mu);
    IntegrationOptions opt;
    opt.abs_tol = opt.rel_tol = 1e-12;
    Trajectory th = integrate(p_to_cartesian(pc, mh), mh, 2.0 / lam, 2.0 / lam / 1500, opt);
    DepartureFit fit = hyperbolic_departure(th, sp, mh.mu, 1.2 * q0, 5 * q0);
    std::printf("  (departure rate: measured %.3e vs predicted %.3e, rel %.3f)\n",
                fit.measured_rate, fit.predicted_rate, fit.rel_error);
    ok = ok && !th.truncated && fit.n_used > 200 && fit.rel_error < 0.25;
    report(9, ok, "conserved quantities flat, departure rate within 25% of the secular prediction");
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    criterion_symplectic();
    criterion_roundtrips();
    criterion_selection_rules();
    criterion_sigma();
    criterion_torsion();
    criterion_secular_identities();
    criterion_equilibria();
    criterion_whiskers();
    criterion_dynamics();
    double dt = seconds_since(t0);
    std::printf("total runtime: %.1f s (%s the 10 min budget)\n", dt,
                dt < 600 ? "within" : "OVER");
    if (dt >= 600) ++failures;
    std::printf("%s\n", failures == 0 ? "ALL CRITERIA PASS" : "SOME CRITERIA FAIL");
    return failures == 0 ? 0 : 1;
}
