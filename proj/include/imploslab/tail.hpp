#pragma once

#include <string>
#include <vector>

#include "imploslab/profile.hpp"

namespace imploslab {

// Far-field expansion V = sum v_n x^n, Q = sum q_n x^n in x = R^{-1/c_r}.
// The leading pair (v1, q1) is fitted from the outer decade of the table;
// higher coefficients follow from the quadratic/cubic recursion seeded by
// the fit.  beta is the coefficient entering the closed form of v2.
struct TailSeries {
    Exponents exp;
    int n_max = 8;
    std::vector<real> v;   // index 1..n_max, [0] unused
    std::vector<real> q;
    real v1_drift = 0;     // spread of pointwise v1 estimates over the fit window
    real q1_drift = 0;
    real beta = 0;
    real h1 = 0;           // entropy amplitude, 0 until an entropy fit is attached
};

// Entropy profile H on the table grid.  K = log H accumulates the quadrature
// of -(V - v0)/(c_r + V) in log R starting from the origin-series value at
// the switch radius; dlogH is d(log H)/d(log R), available in closed form.
struct EntropyProfile {
    std::vector<real> R;
    std::vector<real> K;
    std::vector<real> H;
    std::vector<real> dlogH;
    real h1 = 0;           // fitted limit of R^{(c_r-c_b)/c_r} H
    real tail_slope = 0;   // empirical dlogH at the outer edge
};

TailSeries fit_tail(const ProfileTable& t, const EntropyProfile* entropy = nullptr);

EntropyProfile build_entropy(const ProfileTable& t);

// H and log H at any R in [0, r_max] (series region included).
real entropy_log_at(const ProfileTable& t, const EntropyProfile& ep, real R);

// Worst ratio |profile - partial sum| / (first omitted term) over the outer
// decade, maximized over truncation orders 1..n_max-2.  The omitted-term
// scale uses the two leading omitted terms so an accidentally small single
// coefficient does not inflate the ratio.
struct PartialSumCheck {
    real worst_ratio = 0;
    int worst_order = 0;
    real worst_R = 0;
};

PartialSumCheck check_partial_sums(const TailSeries& ts, const ProfileTable& t);

// Sign certificates for the leading tail pair.  The ratio bound
// v1/q1 >= lambda0 = -sqrt(2a/(d g)) is certified by a barrier computation:
// the factored lower barrier F must be positive on a q grid, the series seed
// must start above the barrier line, and, when beta >= 0 and N = 1, the
// quartic mu0 - mu1 (1-s)^2 + mu2 (1-s)^4 must be nonnegative.  beta >= 0
// with N >= 2 has no barrier recipe here; the fitted sign is reported and
// certified stays false.
struct TailCertificates {
    real lambda0 = 0;
    bool q1_positive = false;
    bool v1_negative = false;   // checked only when N == 1
    bool ratio_ok = false;      // fitted v1 >= lambda0 * q1
    real ratio_margin = 0;      // v1/q1 - lambda0
    bool seed_ok = false;       // v_N - lambda0 q_N > 0 for the origin series kernel
    real barrier_min = 0;
    bool barrier_ok = false;
    real beta = 0;
    std::string branch;         // "negative_beta" | "quartic" | "unresolved"
    real mu0 = 0, mu1 = 0, mu2 = 0;
    real quartic_min = 0;
    bool quartic_ok = false;
    bool certified = false;
};

TailCertificates verify_v1_certificates(const TailSeries& ts);

void write_entropy_csv(const EntropyProfile& ep, const std::string& path);
void write_tail_json(const TailSeries& ts, const TailCertificates& tc, const std::string& path);

} // namespace imploslab
