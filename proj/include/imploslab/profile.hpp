#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "imploslab/gas.hpp"
#include "imploslab/series.hpp"
#include "imploslab/util.hpp"

namespace imploslab {

// Autonomous phase-plane field for the profile in s = log R.
//
//   R dV/dR = DeltaV / Delta,   R dQ/dR = DeltaQ / Delta,
//
// with Delta the product of the three characteristic factors
// (c_r+V), (c_r+V-aQ), (c_r+V+aQ).  P1 and P2 are the numerators of the
// two product-form balance laws; they vanish along the profile when
// combined with the flux derivatives, which gives an algebraic residual
// check independent of the Delta-ratio route used for integration.
struct PhaseField {
    Exponents exp;

    real P1(real V, real Q) const;
    real P2(real V, real Q) const;
    real Delta(real V, real Q) const;
    real DeltaV(real V, real Q) const;
    real DeltaQ(real V, real Q) const;

    // Relative residuals of the two balance laws
    //   P1 + (c_r+V) RdQ + a Q RdV               (sound-speed equation)
    //   P2 + a (c_r+V) Q RdQ + (c_r+V)^2 RdV     (velocity equation)
    // given RdV = R dV/dR, RdQ = R dQ/dR.  Each residual is normalized by
    // the sum of magnitudes of its terms.
    std::array<real, 2> closed_residuals(real V, real Q, real RdV, real RdQ) const;

    // Smallest |Delta| we tolerate before declaring the trajectory has left
    // the sonic-free corridor.  Scaled by the corridor width at the origin.
    real delta_floor() const;
};

// Pointwise region and speed diagnostics for a phase point.
struct RegionCheck {
    bool in_omega = false;       // v0 <= V <= -(d g /2) v0 and 0 <= Q <= q0
    bool outgoing_ok = false;    // c_r + V - a Q above the 1/(6N)-type bound
    real speed_minus = 0;        // c_r + V - a Q
    real speed_mid = 0;          // c_r + V
    real speed_plus = 0;         // c_r + V + a Q
    real outgoing_margin = 0;    // speed_minus - lower bound
};

RegionCheck check_invariant_region(const Exponents& e, real V, real Q);

// Dense profile table on a log-uniform R grid from the series switch radius
// out to r_max.  dV, dQ are d/dR at the nodes (exact field values, not finite
// differences), so interpolation can be made derivative-consistent.
struct ProfileTable {
    Exponents exp;
    OriginSeries series;
    real r_max = 0;

    std::vector<real> R;
    std::vector<real> V;
    std::vector<real> Q;
    std::vector<real> dV;
    std::vector<real> dQ;

    // Certificates accumulated during integration.
    bool in_omega_all = false;
    bool q_monotone = false;
    real min_outgoing_margin = 0;
    real min_delta = 0;
    real max_residual = 0;       // worst closed_residuals value over the nodes
    real terminal_decay = 0;     // (|V|+|Q|) * R^{1/c_r} at R = r_max
};

struct IntegrateOptions {
    real r_max = 1e4L;
    real abs_tol = 1e-11L;
    real rel_tol = 1e-10L;
    int points_per_decade = 64;
};

// Launch from the origin series at its switch radius and integrate the
// phase-plane field outward, recording the table and running the region,
// monotonicity and residual certificates.  Throws CertificateError if the
// trajectory leaves the invariant region or approaches the sonic set.
ProfileTable integrate_profile(const Exponents& e, const OriginSeries& s,
                               const IntegrateOptions& opt = {});

struct ProfileValue {
    real V = 0;
    real Q = 0;
    real dV = 0;   // d/dR
    real dQ = 0;
    bool from_series = false;
    bool extrapolated = false;   // R beyond the table range
};

// Evaluate the profile at any R in [0, r_max]: the origin series below the
// switch radius, cubic Hermite interpolation (in log R, using the stored
// derivatives) on the table above it.  R > r_max throws std::domain_error;
// callers wanting the far-field continuation should go through the tail
// expansion instead.
ProfileValue profile_at(const ProfileTable& t, real R);

// Agreement between the series and one controlled integrator hop ending at
// the switch radius, starting from the series a short log-distance inside.
// err_h uses step control at the table tolerance, err_h_rk4 a single fixed
// RK4 step of width h, err_h2_rk4 two steps of width h/2; the rk4 ratio
// should sit near 2^4 on a smooth field.
struct HandoffReport {
    real r_from = 0;
    real r_to = 0;
    real err_controlled = 0;
    real err_rk4_h = 0;
    real err_rk4_h2 = 0;
    real richardson_ratio = 0;
};

HandoffReport handoff_check(const Exponents& e, const OriginSeries& s,
                            real log_gap = 0.05L);

// Write the table in CSV form: R,V,Q,dV,dQ,speed_minus,speed_mid,speed_plus,
// in_Omega,outgoing_ok.
void write_profile_csv(const ProfileTable& t, const std::string& path);

} // namespace imploslab
