#pragma once

#include <string>
#include <vector>

#include "imploslab/profile.hpp"
#include "imploslab/tail.hpp"

namespace imploslab {

// Everything needed to evaluate the similarity fields at any R: the dense
// table, the entropy quadrature, and (optionally) the far-field expansion
// for R beyond the table.
struct FieldBundle {
    const ProfileTable* table = nullptr;
    const EntropyProfile* entropy = nullptr;
    const TailSeries* tail = nullptr;
    bool allow_extrapolation = false;
};

struct SimilarityPoint {
    real V = 0;
    real Q = 0;
    real K = 0;      // log H
    bool extrapolated = false;
};

SimilarityPoint eval_similarity(const FieldBundle& b, real R);

// Physical fields at one time t < 0 on a radial grid.  r[0] = 0 always;
// there the pressure and velocity vanish identically and the density takes
// its maximum.
struct Snapshot {
    real t = 0;
    std::vector<real> r;
    std::vector<real> rho;
    std::vector<real> u_r;
    std::vector<real> p;
    std::vector<real> c;
};

// Grid: r = R (-t)^{c_r} for 'points' log-spaced similarity radii in
// [R_lo, R_hi], preceded by r = 0.
Snapshot make_snapshot(const FieldBundle& b, real t, int points = 512,
                       real R_lo = 1e-2L, real R_hi = 1e3L);

// Consistency of the two routes to the transported quantity b^2 = g p / rho^g
// versus its similarity form (-t)^{2 c_b} (R H)^2.  Returns the worst
// relative difference over the positive-r samples.
real snapshot_transport_consistency(const FieldBundle& b, const Snapshot& s);

// Fixed-r limits as t -> 0^-: each field converges to amplitude * r^exponent
// (density blows up at the origin only).  Also integrability flags of mass,
// momentum and energy densities near r = 0 at the blowup time, and whether
// the velocity amplitude grows as t -> 0^-.
struct ImplosionLimits {
    real u_amp = 0, u_exp = 0;
    real sigma_amp = 0, sigma_exp = 0;
    real b_amp = 0, b_exp = 0;
    real rho_amp = 0, rho_exp = 0;
    real p_amp = 0, p_exp = 0;
    real energy_amp = 0, energy_exp = 0;
    bool mass_finite = false;
    bool momentum_finite = false;
    bool energy_finite = false;
    bool velocity_blows_up = false;
};

ImplosionLimits implosion_limits(const TailSeries& ts);

// Log-log regressions of the blowup rates across a sweep of times:
// density at r = 0, pressure and velocity along the similarity ray R = 1.
struct BlowupRates {
    real rho_rate = 0, rho_rate_expected = 0;
    real p_rate = 0, p_rate_expected = 0;
    real u_rate = 0, u_rate_expected = 0;
    real max_p_ratio = 0;   // max_r p at latest time / earliest time
};

BlowupRates blowup_rate_regression(const FieldBundle& b,
                                   const std::vector<real>& times = {});

void write_snapshot_csv(const Snapshot& s, const std::string& path);

} // namespace imploslab
