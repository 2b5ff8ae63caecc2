#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

#include "imploslab/profile.hpp"
#include "reference_values.hpp"

using namespace imploslab;
using refs::rel;

namespace {

struct Built {
    Exponents e;
    OriginSeries s;
    ProfileTable t;
};

const Built& built(int d, const char* gamma, int N) {
    static std::map<std::string, Built> cache;
    const std::string key = std::to_string(d) + "|" + gamma + "|" + std::to_string(N);
    auto it = cache.find(key);
    if (it == cache.end()) {
        Built b;
        b.e = compute_exponents(make_params(d, gamma, N));
        b.s = solve_recursion(b.e);
        b.t = integrate_profile(b.e, b.s);
        it = cache.emplace(key, std::move(b)).first;
    }
    return it->second;
}

}  // namespace

TEST_CASE("trajectory certificates, d=3 gamma=5/3 N=1") {
    const ProfileTable& t = built(3, "5/3", 1).t;
    CHECK(t.in_omega_all);
    CHECK(t.q_monotone);
    CHECK(t.min_outgoing_margin > 0.0L);
    CHECK(t.max_residual < 1e-12L);
    CHECK(t.min_delta > 0.0L);
    CHECK(t.terminal_decay < 10.0L);
    CHECK(t.R.front() == doctest::Approx((double)t.series.r_switch));
    CHECK(rel(t.R.back(), 1e4L) < 1e-12L);
}

TEST_CASE("profile values against the reference table") {
    const Built& b = built(3, "5/3", 1);
    const struct {
        real R;
        const real* vqh;
    } rows[] = {{0.25L, refs::r353::at_R025},
                {1.0L, refs::r353::at_R1},
                {10.0L, refs::r353::at_R10},
                {1e4L, refs::r353::at_R1e4}};
    for (const auto& row : rows) {
        // tolerance set by the Hermite interpolation between table nodes,
        // not by the integrator
        const ProfileValue pv = profile_at(b.t, row.R);
        CHECK(rel(pv.V, row.vqh[0]) < 2e-8L);
        CHECK(rel(pv.Q, row.vqh[1]) < 2e-8L);
        CHECK_FALSE(pv.extrapolated);
    }
    CHECK(profile_at(b.t, 0.0L).V == b.e.v0);
    CHECK_THROWS_AS(profile_at(b.t, 2e4L), std::domain_error);

    const ProfileValue p221 = profile_at(built(2, "2", 1).t, 1.0L);
    CHECK(rel(p221.V, refs::r221::at_R1[0]) < 2e-8L);
    CHECK(rel(p221.Q, refs::r221::at_R1[1]) < 2e-8L);
    const ProfileValue p131 = profile_at(built(1, "3", 1).t, 1.0L);
    CHECK(rel(p131.V, refs::r131::at_R1[0]) < 2e-8L);
    CHECK(rel(p131.Q, refs::r131::at_R1[1]) < 2e-8L);
    const ProfileValue p2 = profile_at(built(3, "5/3", 2).t, 1.0L);
    CHECK(rel(p2.V, refs::r353n2::at_R1[0]) < 2e-8L);
    CHECK(rel(p2.Q, refs::r353n2::at_R1[1]) < 2e-8L);
}

TEST_CASE("interpolation is smooth between nodes") {
    const Built& b = built(3, "5/3", 1);
    // Hermite value midway between nodes vs a fresh fine integration sample:
    // compare the derivative columns against finite differences of the values
    for (std::size_t i : {std::size_t(10), b.t.R.size() / 2, b.t.R.size() - 5}) {
        const real Rm = std::sqrt(b.t.R[i] * b.t.R[i + 1]);  // log midpoint
        const ProfileValue pv = profile_at(b.t, Rm);
        CHECK(pv.V >= std::min(b.t.V[i], b.t.V[i + 1]) - 1e-12L);
        CHECK(pv.V <= std::max(b.t.V[i], b.t.V[i + 1]) + 1e-12L);
        const real h = Rm * 1e-6L;
        const real fd = (profile_at(b.t, Rm + h).V - profile_at(b.t, Rm - h).V) / (2.0L * h);
        CHECK(rel(pv.dV, fd) < 1e-6L);
    }
}

TEST_CASE("series-to-integrator handoff") {
    const Built& b = built(3, "5/3", 1);
    const HandoffReport h = handoff_check(b.e, b.s);
    CHECK(h.err_controlled < 1e-10L);
    CHECK(h.err_rk4_h2 < h.err_rk4_h);
    CHECK(h.richardson_ratio > 8.0L);
    CHECK(h.richardson_ratio < 40.0L);
    CHECK(h.r_to == doctest::Approx((double)b.s.r_switch));
}

TEST_CASE("halving the integrator tolerance moves values within ten tolerances") {
    const Built& b = built(3, "5/3", 1);
    IntegrateOptions strict;
    strict.abs_tol = 5e-12L;
    strict.rel_tol = 5e-11L;
    const ProfileTable t2 = integrate_profile(b.e, b.s, strict);
    REQUIRE(t2.R.size() == b.t.R.size());
    real worst = 0;
    for (std::size_t i = 0; i < t2.R.size(); ++i)
        worst = std::max(worst, std::fabs(t2.V[i] - b.t.V[i]) + std::fabs(t2.Q[i] - b.t.Q[i]));
    CHECK(worst < 10.0L * 1e-10L);
}

TEST_CASE("phase field algebra") {
    const Built& b = built(3, "5/3", 1);
    PhaseField pf;
    pf.exp = b.e;
    const real a = b.e.params.alpha();

    // Delta is the product of the three characteristic factors
    const real V = -0.3L, Q = 0.9L;
    const real c = b.e.c_r + V;
    CHECK(rel(pf.Delta(V, Q), c * (c - a * Q) * (c + a * Q)) < 1e-15L);
    CHECK(pf.delta_floor() > 0.0L);
    CHECK(pf.Delta(b.e.v0, b.e.q0) > pf.delta_floor());

    // on-trajectory residuals vanish, off-trajectory ones do not
    const std::size_t i = b.t.R.size() / 2;
    const real RdV = b.t.dV[i] * b.t.R[i], RdQ = b.t.dQ[i] * b.t.R[i];
    const auto on = pf.closed_residuals(b.t.V[i], b.t.Q[i], RdV, RdQ);
    CHECK(on[0] < 1e-12L);
    CHECK(on[1] < 1e-12L);
    const auto off = pf.closed_residuals(b.t.V[i] + 0.05L, b.t.Q[i], RdV, RdQ);
    CHECK(off[0] + off[1] > 1e-3L);
}

TEST_CASE("region check classifies points") {
    const Exponents e = built(3, "5/3", 1).e;
    const RegionCheck in = check_invariant_region(e, -0.3L, 0.9L);
    CHECK(in.in_omega);
    CHECK(in.outgoing_ok);
    CHECK(rel(in.speed_mid, e.c_r - 0.3L) < 1e-15L);
    CHECK(in.speed_minus < in.speed_mid);
    CHECK(in.speed_mid < in.speed_plus);
    CHECK_FALSE(check_invariant_region(e, e.v0 - 0.01L, 0.9L).in_omega);
    CHECK_FALSE(check_invariant_region(e, -0.3L, e.q0 + 0.01L).in_omega);
    CHECK_FALSE(check_invariant_region(e, -0.3L, -0.01L).in_omega);
}

TEST_CASE("profile CSV carries its schema tag") {
    const Built& b = built(2, "2", 1);
    const std::string path = "/tmp/imploslab_test_profile.csv";
    write_profile_csv(b.t, path);
    std::ifstream f(path);
    std::string line1, line2;
    std::getline(f, line1);
    std::getline(f, line2);
    CHECK(line1 == "# schema=imploslab.profile.v1");
    CHECK(line2.substr(0, 2) == "R,");
    std::remove(path.c_str());
}
