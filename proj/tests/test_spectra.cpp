#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "imploslab/spectra.hpp"
#include "reference_values.hpp"

using namespace imploslab;
using refs::rel;

namespace {

const Exponents& e353() {
    static const Exponents e = compute_exponents(make_params(3, "5/3", 1));
    return e;
}

std::vector<real> sorted_real_parts(const ModeCensus& mc) {
    std::vector<real> out;
    for (const auto& ev : mc.eigenvalues) out.push_back(ev.real());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("constant radial block: one stable direction, one unstable") {
    const ModeCensus mc = mode_census(assemble_block(BlockKind::A0, e353()));
    CHECK(mc.neg == 1);
    CHECK(mc.zero == 0);
    CHECK(mc.pos == 1);
    const auto evs = sorted_real_parts(mc);
    CHECK(std::fabs(evs[0] + 1.0L) < 1e-15L);  // the stable eigenvalue is exactly -1
    // for alpha d = 1 the unstable one is 2 alpha d/(1 + alpha d) = 1
    CHECK(std::fabs(evs[1] - 1.0L) < 1e-15L);
}

TEST_CASE("resonant radial block eigensystem") {
    const Exponents& e = e353();
    const RadialEigensystem re = radial_eigensystem(e);
    CHECK(rel(re.lambda_sharp, 2.0L * e.kappa) < 1e-15L);
    CHECK(rel(re.lambda_flat, 4.0L * e.kappa + 1.0L + 2.0L * e.v0) < 1e-15L);
    CHECK((re.P * re.P_inv - Matrix3r::Identity()).cwiseAbs().maxCoeff() < 1e-15L);

    const ModeCensus mc = mode_census(assemble_block(BlockKind::A1N, e), 1);
    CHECK(mc.zero == 1);
    real err_sharp = 1e30L, err_flat = 1e30L;
    for (const auto& ev : mc.eigenvalues) {
        err_sharp = std::min(err_sharp, std::abs(ev - std::complex<real>(re.lambda_sharp, 0)));
        err_flat = std::min(err_flat, std::abs(ev - std::complex<real>(re.lambda_flat, 0)));
    }
    CHECK(err_sharp < 1e-12L);
    CHECK(err_flat < 1e-12L);

    // A1 = E0 + 2N E1 entry by entry
    const BlockMatrix A = assemble_block(BlockKind::A1N, e).A;
    const Matrix3r B = E0_matrix(e) + 2.0L * e.params.N * E1_matrix(e);
    CHECK((A - B).cwiseAbs().maxCoeff() < 1e-15L);
}

TEST_CASE("higher radial blocks: closed form, numerics, reference eigenvalues") {
    const Exponents& e = e353();
    for (int L = 2; L <= 8; ++L) {
        auto closed = radial_higher_order_closed(e, L);
        const auto numeric = radial_higher_order_numeric(e, L);
        std::sort(closed.begin(), closed.end());
        for (int i = 0; i < 3; ++i) {
            CHECK(rel(closed[i], numeric[i]) < 1e-12L);
            CHECK(closed[i] >= 2.0L * lambda_lower(e.params) - 1e-12L);
        }
    }
    auto L2 = radial_higher_order_closed(e, 2);
    std::sort(L2.begin(), L2.end());
    for (int i = 0; i < 3; ++i) CHECK(rel(L2[i], refs::r353::radial_L2[i]) < 1e-12L);
    auto L3 = radial_higher_order_closed(e, 3);
    std::sort(L3.begin(), L3.end());
    for (int i = 0; i < 3; ++i) CHECK(rel(L3[i], refs::r353::radial_L3[i]) < 1e-10L);
}

TEST_CASE("angular block censuses at the flagship point") {
    const Exponents& e = e353();

    const ModeCensus h3_1 = mode_census(assemble_block(BlockKind::H3, e, 1));
    CHECK(h3_1.neg == 2);
    CHECK(h3_1.zero == 1);
    CHECK(h3_1.pos == 0);
    const auto ev3 = sorted_real_parts(h3_1);
    for (int i = 0; i < 3; ++i) CHECK(std::fabs(ev3[i] - refs::r353::H3_1_eigs[i]) < 1e-6L);

    for (int k = 2; k <= 6; ++k) {
        const ModeCensus mc = mode_census(assemble_block(BlockKind::H3, e, k));
        CHECK(mc.neg == 3);
        CHECK(mc.zero == 0);
        CHECK(mc.pos == 0);
    }

    const ModeCensus h10 = mode_census(assemble_block(BlockKind::Hbk, e, 1, 0));
    CHECK(h10.neg == 3);
    CHECK(h10.zero == 0);
    CHECK(h10.pos == 1);
    real pos_part = 0;
    for (const auto& ev : h10.eigenvalues) pos_part = std::max(pos_part, ev.real());
    CHECK(std::fabs(pos_part - refs::r353::H10_pos) < 1e-6L);

    const ModeCensus h01 = mode_census(assemble_block(BlockKind::Hbk, e, 0, 1));
    CHECK(h01.neg == 3);
    CHECK(h01.zero == 1);
    CHECK(h01.pos == 0);

    const ModeCensus h11 = mode_census(assemble_block(BlockKind::Hbk, e, 1, 1));
    CHECK(h11.neg == 4);
    CHECK(h11.zero == 0);
    CHECK(h11.pos == 0);

    const ModeCensus h2 = mode_census(assemble_block(BlockKind::H2, e, 1));
    CHECK(h2.neg == 2);
    CHECK(h2.pos == 0);
    const auto ev2 = sorted_real_parts(h2);
    for (int i = 0; i < 2; ++i) CHECK(std::fabs(ev2[i] - refs::r353::H2_1_eigs[i]) < 1e-6L);

    for (int n = 1; n <= 24; ++n) {
        const ModeCensus sc = mode_census(assemble_block(BlockKind::U_scalar, e, n));
        CHECK(sc.neg == 1);
        CHECK(sc.zero == 0);
        CHECK(sc.pos == 0);
    }
}

TEST_CASE("positive sound-speed modes appear for gamma = 7/5 and 5/3 in d = 2") {
    const Exponents e375 = compute_exponents(make_params(3, "7/5", 1));
    const ModeCensus a = mode_census(assemble_block(BlockKind::H2, e375, 1));
    CHECK(a.neg == 1);
    CHECK(a.pos == 1);
    real pos_a = 0;
    for (const auto& ev : a.eigenvalues) pos_a = std::max(pos_a, ev.real());
    CHECK(std::fabs(pos_a - refs::r375::H2_1_pos) < 1e-6L);

    const ModeCensus a10 = mode_census(assemble_block(BlockKind::Hbk, e375, 1, 0));
    real pos_a10 = 0;
    for (const auto& ev : a10.eigenvalues) pos_a10 = std::max(pos_a10, ev.real());
    CHECK(std::fabs(pos_a10 - refs::r375::H10_pos) < 1e-6L);

    const Exponents e253 = compute_exponents(make_params(2, "5/3", 1));
    const ModeCensus bm = mode_census(assemble_block(BlockKind::H2, e253, 1));
    CHECK(bm.pos == 1);
    real pos_b = 0;
    for (const auto& ev : bm.eigenvalues) pos_b = std::max(pos_b, ev.real());
    CHECK(std::fabs(pos_b - refs::r253::H2_1_pos) < 1e-6L);

    const Exponents e221 = compute_exponents(make_params(2, "2", 1));
    const ModeCensus cm = mode_census(assemble_block(BlockKind::H2, e221, 1));
    CHECK(cm.neg == 2);
    CHECK(cm.pos == 0);
    const auto evc = sorted_real_parts(cm);
    for (int i = 0; i < 2; ++i) CHECK(std::fabs(evc[i] - refs::r221::H2_1_eigs[i]) < 1e-6L);
    const ModeCensus c10 = mode_census(assemble_block(BlockKind::Hbk, e221, 1, 0));
    real pos_c = 0;
    for (const auto& ev : c10.eigenvalues) pos_c = std::max(pos_c, ev.real());
    CHECK(std::fabs(pos_c - refs::r221::H10_pos) < 1e-6L);
}

TEST_CASE("one-dimensional blocks") {
    const Exponents e = compute_exponents(make_params(1, "2", 1));
    const ModeCensus n1 = mode_census(assemble_block(BlockKind::H1_1D, e, 1));
    CHECK(n1.neg == 2);
    CHECK(n1.zero == 0);
    CHECK(n1.pos == 1);
    const auto ev = sorted_real_parts(n1);
    for (int i = 0; i < 3; ++i) CHECK(std::fabs(ev[i] - refs::r121::H1_1_eigs[i]) < 1e-6L);

    const ModeCensus n2 = mode_census(assemble_block(BlockKind::H1_1D, e, 2));
    CHECK(n2.neg == 2);
    CHECK(n2.zero == 1);
    CHECK(n2.pos == 0);
    for (int n = 3; n <= 8; ++n) {
        const ModeCensus mc = mode_census(assemble_block(BlockKind::H1_1D, e, n));
        CHECK(mc.neg == 3);
        CHECK(mc.pos == 0);
    }
}

TEST_CASE("known-case census tables and unstable dimensions") {
    const struct {
        int d;
        const char* g;
        int total, m0, m1, m2;
    } cases[] = {{3, "5/3", 11, 8, 3, 0},
                 {3, "7/5", 18, 8, 10, 0},
                 {2, "2", 5, 3, 2, 0},
                 {2, "5/3", 7, 3, 4, 0},
                 {1, "2", 1, 0, 1, 0}};
    for (const auto& c : cases) {
        const Exponents e = compute_exponents(make_params(c.d, c.g, 1));
        const CaseCensusReport rep = run_known_case_censuses(e);
        CHECK_MESSAGE(rep.ok, c.d << " " << c.g);
        for (const auto& f : rep.failures) MESSAGE(f);
        const UnstableDimension ud = unstable_dimension(e);
        CHECK(ud.exact);
        CHECK(ud.total == c.total);
        CHECK(ud.m0 == c.m0);
        CHECK(ud.m1 == c.m1);
        CHECK(ud.m2 == c.m2);
    }
    // off the known list the census table is unavailable
    CHECK_THROWS_AS(run_known_case_censuses(compute_exponents(make_params(1, "3", 1))),
                    std::invalid_argument);
    // N = 2 reports the bound path, not an exact count
    const UnstableDimension ud2 = unstable_dimension(compute_exponents(make_params(3, "5/3", 2)));
    CHECK_FALSE(ud2.exact);
    CHECK(ud2.total == 22);
    CHECK(ud2.m0 == 8);
    CHECK(ud2.m1 == 14);
}

TEST_CASE("weighted Gershgorin dominance at the stabilization order") {
    const Exponents& e = e353();
    const long long n1 = stabilization_order(e.params);
    CHECK(n1 == 2916);
    const GershgorinResult g = gershgorin_certificate(e, n1, 1.0L);
    CHECK(g.ok);
    CHECK(std::fabs(g.worst_margin - refs::r353::gersh_margin) < 0.5L);
    CHECK(gershgorin_certificate(e, n1 + 7, 1.0L).ok);

    const Exponents e121 = compute_exponents(make_params(1, "2", 1));
    const GershgorinResult g1 = gershgorin_certificate(e121, stabilization_order(e121.params), 1.0L);
    CHECK(g1.ok);
    CHECK(std::fabs(g1.worst_margin - refs::r121::gersh_margin) < 0.5L);
}

TEST_CASE("characteristic polynomial, closed-form roots, Routh table") {
    BlockMatrix A(3, 3);
    A.setZero();
    A(0, 0) = 1;
    A(1, 1) = 2;
    A(2, 2) = 3;
    const auto mono = charpoly(A);
    REQUIRE(mono.size() == 4);
    const auto roots = poly_roots(mono);
    std::vector<real> re;
    for (const auto& r : roots) {
        CHECK(std::fabs(r.imag()) < 1e-14L);
        re.push_back(r.real());
    }
    std::sort(re.begin(), re.end());
    CHECK(rel(re[0], 1.0L) < 1e-12L);
    CHECK(rel(re[1], 2.0L) < 1e-12L);
    CHECK(rel(re[2], 3.0L) < 1e-12L);

    // lambda^2 - 1: one root in the right half plane
    const RouthResult plus = routh_hurwitz({1.0L, 0.0L, -1.0L}, 1.0L);
    CHECK_FALSE(plus.degenerate);
    CHECK(plus.count_positive == 1);
    // lambda^2 + 1: imaginary pair degenerates the table
    const RouthResult imag = routh_hurwitz({1.0L, 0.0L, 1.0L}, 1.0L);
    CHECK(imag.degenerate);
    // (lambda + 1)(lambda + 2): stable
    const RouthResult stable = routh_hurwitz({1.0L, 3.0L, 2.0L}, 1.0L);
    CHECK_FALSE(stable.degenerate);
    CHECK(stable.count_positive == 0);
}
