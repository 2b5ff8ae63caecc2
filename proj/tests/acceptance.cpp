// Acceptance suite: fourteen end-to-end checks of the laboratory, one
// printed line each.  Exit status is the number of failed checks, so a
// clean run exits 0.  Tolerances are pinned here, not configurable.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "imploslab/evolution.hpp"
#include "imploslab/fields.hpp"
#include "imploslab/gas.hpp"
#include "imploslab/profile.hpp"
#include "imploslab/series.hpp"
#include "imploslab/spectra.hpp"
#include "imploslab/tail.hpp"

using namespace imploslab;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

std::string strf(const char* fmt, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    return buf;
}

void report(int id, const char* label, bool ok, const std::string& detail) {
    std::printf("[%2d] %-44s %s  %s\n", id, label, ok ? "pass" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

double ms_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

constexpr real kInf = std::numeric_limits<real>::infinity();

// ---------------------------------------------------------------- grid pass
// One sweep over d in {1,2,3} x 20 gamma values x N in 1..20 feeds the
// resonance, trajectory, tail, barrier, radial-spectrum and dominance
// checks; each accumulates its own worst case.

struct GridResults {
    int points = 0;
    double total_ms = 0;
    // recursion determinants
    real det_at_resonance = 0;  // worst |det| / scale at n = N
    real det_off_min = kInf;    // smallest |det| / scale at n != N, n <= 50
    double det_ms = 0;
    // trajectory certificates
    bool omega_ok = true;
    bool q_mono_ok = true;
    real outgoing_min = kInf;
    real residual_max = 0;
    double point_ms_max = 0;
    // tail fits
    bool q1_positive = true;
    bool v1_negative = true;
    real ratio_margin_min = kInf;
    real partial_ratio_max = 0;
    // sign barriers
    bool barrier_ok = true;
    real barrier_min = kInf;
    bool quartic_ok = true;
    int quartic_points = 0;
    real quartic_min = kInf;
    // radial spectra
    bool census_ok = true;
    real a0_eig_err = 0;
    real a1_eig_err = 0;
    real radial_pair_err = 0;
    real radial_gap_min = kInf;  // eigenvalue minus twice the decay floor
    // weighted dominance
    bool gersh_ok = true;
    real gersh_margin_min = kInf;
    double gersh_ms_max = 0;
};

GridResults run_grid() {
    GridResults g;
    const auto sweep_start = Clock::now();
    for (int d = 1; d <= 3; ++d) {
        for (int j = 1; j <= 20; ++j) {
            const std::string gamma = std::to_string(20 + 2 * d * j) + "/20";
            for (int N = 1; N <= 20; ++N) {
                const GasParams p = make_params(d, gamma, N);
                const Exponents e = compute_exponents(p);
                const real floor2 = 2 * lambda_lower(p);

                const auto det_start = Clock::now();
                for (int n = 1; n <= 50; ++n) {
                    const RecursionKernel k = build_kernel(e, n);
                    const real nd = std::abs(k.det_n) / k.det_scale;
                    if (n == N)
                        g.det_at_resonance = std::max(g.det_at_resonance, nd);
                    else
                        g.det_off_min = std::min(g.det_off_min, nd);
                }
                g.det_ms += ms_between(det_start, Clock::now());

                const auto pt_start = Clock::now();
                const OriginSeries s = solve_recursion(e);
                const ProfileTable t = integrate_profile(e, s);
                g.omega_ok &= t.in_omega_all;
                g.q_mono_ok &= t.q_monotone;
                g.outgoing_min = std::min(g.outgoing_min, t.min_outgoing_margin);
                g.residual_max = std::max(g.residual_max, t.max_residual);

                const TailSeries ts = fit_tail(t);
                g.q1_positive &= ts.q[1] > 0;
                if (N == 1) g.v1_negative &= ts.v[1] < 0;
                const PartialSumCheck psc = check_partial_sums(ts, t);
                g.partial_ratio_max = std::max(g.partial_ratio_max, psc.worst_ratio);

                const TailCertificates tc = verify_v1_certificates(ts);
                g.ratio_margin_min = std::min(g.ratio_margin_min, tc.ratio_margin);
                g.barrier_ok &= tc.barrier_ok;
                g.barrier_min = std::min(g.barrier_min, tc.barrier_min);
                if (N == 1 && tc.beta >= 0) {
                    g.quartic_ok &= tc.quartic_ok;
                    g.quartic_min = std::min(g.quartic_min, tc.quartic_min);
                    ++g.quartic_points;
                }

                const ModeCensus a0 = mode_census(assemble_block(BlockKind::A0, e));
                g.census_ok &= a0.neg == 1 && a0.zero == 0 && a0.pos == 1;
                real a0_err = kInf;
                for (const auto& ev : a0.eigenvalues)
                    a0_err = std::min(a0_err, std::abs(ev - std::complex<real>(-1, 0)));
                g.a0_eig_err = std::max(g.a0_eig_err, a0_err);

                radial_eigensystem(e);  // throws when its residual check fails
                const ModeCensus a1 = mode_census(assemble_block(BlockKind::A1N, e), 1);
                const real want[3] = {2 * N * e.kappa, 4 * N * e.kappa + 1 + 2 * e.v0, 0};
                for (const real w : want) {
                    real best = kInf;
                    for (const auto& ev : a1.eigenvalues)
                        best = std::min(best, std::abs(ev - std::complex<real>(w, 0)));
                    g.a1_eig_err = std::max(g.a1_eig_err,
                                            best / std::max(real(1), std::abs(w)));
                }
                for (int L = N + 1; L <= N + 5; ++L) {
                    std::array<real, 3> closed = radial_higher_order_closed(e, L);
                    const std::array<real, 3> numeric = radial_higher_order_numeric(e, L);
                    std::sort(closed.begin(), closed.end());
                    for (int i = 0; i < 3; ++i) {
                        g.radial_pair_err = std::max(
                            g.radial_pair_err, std::abs(closed[i] - numeric[i]) /
                                                   std::max(real(1), std::abs(closed[i])));
                        g.radial_gap_min = std::min(g.radial_gap_min, closed[i] - floor2);
                    }
                }

                const auto gersh_start = Clock::now();
                const int n1 = stabilization_order(p);
                const GershgorinResult g1 = gershgorin_certificate(e, n1, 1);
                const GershgorinResult g2 = gershgorin_certificate(e, n1 + 7, 1);
                g.gersh_ok &= g1.ok && g2.ok;
                g.gersh_margin_min =
                    std::min({g.gersh_margin_min, g1.worst_margin, g2.worst_margin});
                const auto pt_end = Clock::now();
                g.gersh_ms_max = std::max(g.gersh_ms_max, ms_between(gersh_start, pt_end));
                g.point_ms_max = std::max(g.point_ms_max, ms_between(pt_start, pt_end));
                ++g.points;
            }
        }
    }
    g.total_ms = ms_between(sweep_start, Clock::now());
    return g;
}

// ------------------------------------------------------------- deep cases
// Long-radius builds of the seven tabulated parameter points, reused by the
// handoff, entropy and physical-field checks.

struct CasePack {
    int d;
    const char* gamma;
    int N;
    Exponents e;
    OriginSeries series;
    ProfileTable table;
    EntropyProfile entropy;
    TailSeries tail;
};

std::vector<CasePack> build_cases() {
    const std::vector<std::tuple<int, const char*, int>> list = {
        {3, "5/3", 1}, {2, "2", 1},   {3, "7/5", 1}, {2, "5/3", 1},
        {1, "2", 1},   {1, "3", 1},   {3, "5/3", 2}};
    std::vector<CasePack> out;
    out.reserve(list.size());
    for (const auto& [d, gamma, N] : list) {
        CasePack c;
        c.d = d;
        c.gamma = gamma;
        c.N = N;
        c.e = compute_exponents(make_params(d, gamma, N));
        c.series = solve_recursion(c.e);
        IntegrateOptions opt;
        opt.r_max = 1e5L;
        c.table = integrate_profile(c.e, c.series, opt);
        c.entropy = build_entropy(c.table);
        c.tail = fit_tail(c.table, &c.entropy);
        out.push_back(std::move(c));
    }
    return out;
}

void check_exponent_values() {
    const auto start = Clock::now();
    const GasParams p = make_params(3, "5/3", 1);
    const Exponents e = compute_exponents(p);
    const real cr_closed = 0.5L + 0.5L * std::sqrt(47.0L / 12.0L);
    const real limit = c_r_limit(p);
    const real limit_closed =
        (1 + std::sqrt(p.alpha() * p.gamma * p.d / 2)) / (1 + p.alpha_d());
    const double elapsed = ms_between(start, Clock::now());

    const real err_closed = std::max({std::abs(e.c_r - cr_closed),
                                      std::abs(e.c_b - (cr_closed - 0.5L)),
                                      std::abs(limit - limit_closed)});
    const real err_printed = std::max({std::abs(e.c_r - 1.48953L),
                                       std::abs(e.c_b - 0.98953L),
                                       std::abs(limit - 0.956435L),
                                       std::abs(limit - 0.5L - 0.456435L)});
    report(1, "exponent golden values",
           err_closed <= 1e-12L && err_printed <= 1e-5L && elapsed < 1.0,
           strf("closed-form err %.2Le, printed err %.2Le, %.3f ms",
                err_closed, err_printed, elapsed));
}

void check_handoff(const std::vector<CasePack>& cases) {
    real worst = 0;
    real ratio_lo = kInf, ratio_hi = 0;
    for (const CasePack& c : cases) {
        const HandoffReport h = handoff_check(c.e, c.series);
        worst = std::max(worst, h.err_controlled);
        ratio_lo = std::min(ratio_lo, h.richardson_ratio);
        ratio_hi = std::max(ratio_hi, h.richardson_ratio);
    }
    // halving both integrator tolerances must reproduce the same table
    // within ten times the original tolerance
    const CasePack& f = cases.front();
    IntegrateOptions opt;
    opt.r_max = 1e5L;
    opt.abs_tol /= 2;
    opt.rel_tol /= 2;
    const ProfileTable refined = integrate_profile(f.e, f.series, opt);
    real diff = kInf;
    if (refined.R.size() == f.table.R.size()) {
        diff = 0;
        for (std::size_t i = 0; i < refined.R.size(); ++i)
            diff = std::max({diff, std::abs(refined.V[i] - f.table.V[i]),
                             std::abs(refined.Q[i] - f.table.Q[i])});
    }
    report(4, "series-to-integrator handoff",
           worst <= 1e-8L && diff <= 10 * 1e-10L,
           strf("worst handoff err %.2Le, halving diff %.2Le, rk4 ratio %.1Lf..%.1Lf",
                worst, diff, ratio_lo, ratio_hi));
}

void check_entropy(const std::vector<CasePack>& cases) {
    bool origin_ok = true;
    real near_worst = 0;   // residual over allowance, should stay <= 1
    real slope_err = 0;
    for (const CasePack& c : cases) {
        origin_ok &= c.series.hcoef[0] == 1 && entropy_log_at(c.table, c.entropy, 0) == 0;
        const int N = c.N;
        const real allow = 2 * (std::abs(c.series.hcoef[2 * N]) + 1);
        for (const real R : {0.01L, 0.02L, 0.05L}) {
            const real H = std::exp(entropy_log_at(c.table, c.entropy, R));
            const real model = 1 - std::pow(R, 2 * N) / (2 * N * c.e.kappa);
            near_worst = std::max(near_worst,
                                  std::abs(H - model) / (allow * std::pow(R, 4 * N)));
        }
        const real slope_closed = -(c.e.c_r - c.e.c_b) / c.e.c_r;
        slope_err = std::max(slope_err, std::abs(c.entropy.tail_slope - slope_closed));
    }
    report(6, "entropy profile shape",
           origin_ok && near_worst <= 1 && slope_err <= 1e-3L,
           strf("origin exact %s, near-origin residual %.2Lf of allowance, slope err %.2Le",
                origin_ok ? "yes" : "NO", near_worst, slope_err));
}

void check_known_cases() {
    const auto start = Clock::now();
    const std::pair<int, const char*> cases[5] = {
        {3, "5/3"}, {3, "7/5"}, {2, "2"}, {2, "5/3"}, {1, "2"}};
    const int expected[5][4] = {
        {11, 8, 3, 0}, {18, 8, 10, 0}, {5, 3, 2, 0}, {7, 3, 4, 0}, {1, 0, 1, 0}};
    bool census_ok = true, scalar_ok = true, dims_ok = true;
    std::string dims;
    for (int i = 0; i < 5; ++i) {
        const Exponents e = compute_exponents(make_params(cases[i].first, cases[i].second, 1));
        const CaseCensusReport rep = run_known_case_censuses(e);
        census_ok &= rep.ok;
        if (cases[i].first >= 2)
            for (int n = 1; n <= 24; ++n) {
                const ModeCensus mc = mode_census(assemble_block(BlockKind::U_scalar, e, n));
                scalar_ok &= mc.neg == 1 && mc.zero == 0 && mc.pos == 0;
            }
        const UnstableDimension ud = unstable_dimension(e);
        dims_ok &= ud.total == expected[i][0] && ud.m0 == expected[i][1] &&
                   ud.m1 == expected[i][2] && ud.m2 == expected[i][3] && ud.exact;
        dims += strf("%s%d=%d+%d+%d", i ? ", " : "", ud.total, ud.m0, ud.m1, ud.m2);
    }
    const double elapsed = ms_between(start, Clock::now());
    report(9, "mode censuses, five known cases",
           census_ok && scalar_ok && elapsed < 1000.0,
           strf("censuses %s, transport scalars %s, %.0f ms",
                census_ok ? "ok" : "MISMATCH", scalar_ok ? "ok" : "MISMATCH", elapsed));
    report(10, "unstable dimension table", dims_ok, dims);
}

void check_evolution() {
    const auto start = Clock::now();
    RunConfig cfg;
    cfg.params = make_params(3, "5/3", 1);
    cfg.cells = 512;
    cfg.tau_end = 120;
    cfg.perturbation.v = cfg.perturbation.q = cfg.perturbation.k = {{1e-3L, 0.45L, 0.3L}};
    const EvolutionResult perturbed = run_evolution(cfg);

    RunConfig quiet = cfg;
    quiet.perturbation = {};
    quiet.tau_end = 60;
    const EvolutionResult baseline = run_evolution(quiet);
    const double elapsed = ms_between(start, Clock::now());

    bool rates_ok = perturbed.fits.size() == 10;
    real rate_min = kInf;
    for (const DecayFit& f : perturbed.fits) {
        rates_ok &= !f.at_floor && f.rate >= 0.5L * perturbed.lambda_floor;
        rate_min = std::min(rate_min, f.rate);
    }
    bool floor_ok = !baseline.fits.empty();
    for (const DecayFit& f : baseline.fits) floor_ok &= f.at_floor;
    const bool speeds_ok =
        perturbed.min_speed_overall > 0 && baseline.min_speed_overall > 0;
    const bool floor_value_ok = std::abs(perturbed.lambda_floor - 1.0L / 12) <= 1e-15L;
    report(12, "perturbed evolution decay",
           rates_ok && floor_ok && speeds_ok && floor_value_ok && elapsed < 60e3,
           strf("min rate %.4Lf vs floor %.4Lf, quiet run at floor %s, "
                "min speed %.3Lf, %.1f s",
                rate_min, 0.5L * perturbed.lambda_floor, floor_ok ? "yes" : "NO",
                perturbed.min_speed_overall, elapsed / 1e3));
}

void check_blowup(const std::vector<CasePack>& cases) {
    FieldBundle mono;
    mono.table = &cases[0].table;
    mono.entropy = &cases[0].entropy;
    mono.tail = &cases[0].tail;
    mono.allow_extrapolation = true;
    const BlowupRates br = blowup_rate_regression(mono);
    const bool rho_ok = std::abs(br.rho_rate_expected + 1.5L) <= 1e-12L &&
                        std::abs(br.rho_rate - br.rho_rate_expected) <=
                            0.02L * std::abs(br.rho_rate_expected);

    FieldBundle iso;
    iso.table = &cases[1].table;
    iso.entropy = &cases[1].entropy;
    iso.tail = &cases[1].tail;
    iso.allow_extrapolation = true;
    const BlowupRates bp = blowup_rate_regression(iso);
    const bool p_ok = bp.p_rate_expected == 0 && std::abs(bp.p_rate) <= 5e-3L &&
                      bp.max_p_ratio > 0.5L && bp.max_p_ratio < 1.5L;

    const Snapshot snap = make_snapshot(mono, -0.01L);
    const bool center_ok = snap.r[0] == 0 && snap.p[0] == 0 && snap.u_r[0] == 0;
    report(13, "physical blowup rates",
           rho_ok && p_ok && center_ok,
           strf("rho rate %.4Lf vs %.4Lf, bounded-p drift %.2Le ratio %.3Lf, "
                "center row exact %s",
                br.rho_rate, br.rho_rate_expected, bp.p_rate, bp.max_p_ratio,
                center_ok ? "yes" : "NO"));
}

void check_kinetic() {
    const GasParams p = make_params(3, "5/3", 1);
    const Exponents e = compute_exponents(p);
    bool ok = true;
    std::string margins;
    for (const int g : {-3, 0, 1}) {
        const KineticCheck kc = kinetic_admissible(p, g);
        ok &= kc.admissible && g * e.c_u < 0.5L;  // equivalent reduced form
        margins += strf("%s%d: %.3Lf", margins.empty() ? "" : ", ", g, kc.margin);
    }
    report(14, "kinetic admissibility", ok, "margins " + margins);
}

void run_all() {
    check_exponent_values();

    const GridResults g = run_grid();
    report(2, "recursion resonance structure",
           g.det_at_resonance <= 1e-10L && g.det_off_min > 1e-10L && g.det_ms < 1000.0,
           strf("at-resonance %.2Le, off-resonance min %.2Le, %.0f ms",
                g.det_at_resonance, g.det_off_min, g.det_ms));
    report(3, "profile trajectory certificates",
           g.omega_ok && g.q_mono_ok && g.outgoing_min >= 0 && g.residual_max <= 1e-8L &&
               g.point_ms_max < 5000.0,
           strf("%d points, outgoing margin >= %.2Le, residual <= %.2Le, "
                "slowest point %.0f ms",
                g.points, g.outgoing_min, g.residual_max, g.point_ms_max));

    const std::vector<CasePack> cases = build_cases();
    check_handoff(cases);

    report(5, "tail coefficient signs and partial sums",
           g.q1_positive && g.v1_negative && g.ratio_margin_min >= 0 &&
               g.partial_ratio_max <= 1.05L,
           strf("q1>0 %s, v1<0 %s, ratio margin >= %.2Le, partial-sum ratio <= %.3Lf",
                g.q1_positive ? "yes" : "NO", g.v1_negative ? "yes" : "NO",
                g.ratio_margin_min, g.partial_ratio_max));

    check_entropy(cases);

    report(7, "sign-barrier certificates",
           g.barrier_ok && g.quartic_ok && g.quartic_points > 0,
           strf("barrier min %.3Le, quartic min %.3Le over %d eligible points",
                g.barrier_min, g.quartic_min, g.quartic_points));
    report(8, "radial spectral blocks",
           g.census_ok && g.a0_eig_err <= 1e-10L && g.a1_eig_err <= 1e-10L &&
               g.radial_pair_err <= 1e-10L && g.radial_gap_min >= -1e-10L,
           strf("eig errs %.1Le / %.1Le / %.1Le, gap above decay floor %.2Le",
                g.a0_eig_err, g.a1_eig_err, g.radial_pair_err, g.radial_gap_min));

    check_known_cases();

    report(11, "weighted dominance stabilization",
           g.gersh_ok && g.gersh_ms_max < 1000.0,
           strf("margin min %.2Lf, slowest point %.0f ms (grid pass total %.1f s)",
                g.gersh_margin_min, g.gersh_ms_max, g.total_ms / 1e3));

    check_evolution();
    check_blowup(cases);
    check_kinetic();
}

}  // namespace

int main() {
    try {
        run_all();
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "aborted: %s\n", ex.what());
        return 99;
    }
    std::printf("%d/14 checks passed\n", 14 - failures);
    return failures;
}
