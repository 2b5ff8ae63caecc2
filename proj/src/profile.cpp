#include "imploslab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

namespace imploslab {

namespace {

using State = std::array<real, 2>;

// Field in the log radius s = log R.  The phase plane is autonomous, so the
// right-hand side depends on (V,Q) only.
struct LogField {
    const PhaseField* pf;

    void operator()(const State& x, State& dxds, real /*s*/) const {
        const real D = pf->Delta(x[0], x[1]);
        if (D <= pf->delta_floor())
            throw CertificateError("profile trajectory approached the sonic set");
        dxds[0] = pf->DeltaV(x[0], x[1]) / D;
        dxds[1] = pf->DeltaQ(x[0], x[1]) / D;
    }
};

State rk4_step(const LogField& f, const State& x0, real s, real h) {
    State k1, k2, k3, k4, tmp;
    f(x0, k1, s);
    for (int i = 0; i < 2; ++i) tmp[i] = x0[i] + 0.5L * h * k1[i];
    f(tmp, k2, s + 0.5L * h);
    for (int i = 0; i < 2; ++i) tmp[i] = x0[i] + 0.5L * h * k2[i];
    f(tmp, k3, s + 0.5L * h);
    for (int i = 0; i < 2; ++i) tmp[i] = x0[i] + h * k3[i];
    f(tmp, k4, s + h);
    State out;
    for (int i = 0; i < 2; ++i)
        out[i] = x0[i] + (h / 6.0L) * (k1[i] + 2.0L * k2[i] + 2.0L * k3[i] + k4[i]);
    return out;
}

void advance(const LogField& f, State& x, real s_a, real s_b, real abs_tol, real rel_tol) {
    namespace ode = boost::numeric::odeint;
    using Stepper = ode::runge_kutta_dopri5<State, real, State, real>;
    auto controlled = ode::make_controlled<Stepper>(abs_tol, rel_tol);
    ode::integrate_adaptive(controlled, f, x, s_a, s_b, (s_b - s_a) / 8.0L);
}

} // namespace

real PhaseField::P1(real V, real Q) const {
    const real ad = exp.params.alpha_d();
    return (1.0L + (1.0L + ad) * V) * Q;
}

real PhaseField::P2(real V, real Q) const {
    const real a = exp.params.alpha();
    const real g = exp.params.gamma;
    const real cV = exp.c_r + V;
    return cV * (V + V * V + (2.0L * a * a / g) * Q * Q) +
           (a / g) * Q * Q * (V - exp.v0);
}

real PhaseField::Delta(real V, real Q) const {
    const real a = exp.params.alpha();
    const real cV = exp.c_r + V;
    return cV * (cV - a * Q) * (cV + a * Q);
}

real PhaseField::DeltaV(real V, real Q) const {
    const real a = exp.params.alpha();
    const real cV = exp.c_r + V;
    return cV * (a * Q * P1(V, Q) - P2(V, Q));
}

real PhaseField::DeltaQ(real V, real Q) const {
    const real a = exp.params.alpha();
    const real cV = exp.c_r + V;
    return a * Q * P2(V, Q) - cV * cV * P1(V, Q);
}

std::array<real, 2> PhaseField::closed_residuals(real V, real Q, real RdV, real RdQ) const {
    const real a = exp.params.alpha();
    const real cV = exp.c_r + V;

    const real t1a = P1(V, Q);
    const real t1b = cV * RdQ;
    const real t1c = a * Q * RdV;
    const real scale1 = std::abs(t1a) + std::abs(t1b) + std::abs(t1c) +
                        std::numeric_limits<real>::min();

    const real t2a = P2(V, Q);
    const real t2b = a * cV * Q * RdQ;
    const real t2c = cV * cV * RdV;
    const real scale2 = std::abs(t2a) + std::abs(t2b) + std::abs(t2c) +
                        std::numeric_limits<real>::min();

    return {std::abs(t1a + t1b + t1c) / scale1, std::abs(t2a + t2b + t2c) / scale2};
}

real PhaseField::delta_floor() const {
    const real a = exp.params.alpha();
    const real w_minus = exp.c_r + exp.v0 - a * exp.q0;
    const real w_plus = exp.c_r + exp.v0 + a * exp.q0;
    return 1e-3L * exp.c_r * w_minus * w_plus;
}

RegionCheck check_invariant_region(const Exponents& e, real V, real Q) {
    const real a = e.params.alpha();
    RegionCheck rc;
    rc.speed_minus = e.c_r + V - a * Q;
    rc.speed_mid = e.c_r + V;
    rc.speed_plus = e.c_r + V + a * Q;

    const real v_hi = -(e.params.d * e.params.gamma / 2.0L) * e.v0;
    rc.in_omega = (V >= e.v0) && (V <= v_hi) && (Q >= 0.0L) && (Q <= e.q0);

    rc.outgoing_margin = rc.speed_minus - e.outgoing_lower_bound();
    rc.outgoing_ok = rc.outgoing_margin >= 0.0L;
    return rc;
}

ProfileTable integrate_profile(const Exponents& e, const OriginSeries& s,
                               const IntegrateOptions& opt) {
    if (opt.r_max <= s.r_switch)
        throw std::invalid_argument("integrate_profile: r_max must exceed the switch radius");

    PhaseField pf{e};
    LogField field{&pf};

    ProfileTable t;
    t.exp = e;
    t.series = s;
    t.r_max = opt.r_max;

    const real s0 = std::log(s.r_switch);
    const real s_end = std::log(opt.r_max);
    const real ds = std::log(10.0L) / static_cast<real>(opt.points_per_decade);

    std::vector<real> snodes;
    for (std::size_t i = 0;; ++i) {
        const real si = s0 + static_cast<real>(i) * ds;
        if (si >= s_end - 1e-12L) {
            snodes.push_back(s_end);
            break;
        }
        snodes.push_back(si);
    }

    const SeriesEval launch = evaluate_series(s, s.r_switch);
    State x{launch.V, launch.Q};

    t.in_omega_all = true;
    t.q_monotone = true;
    t.min_outgoing_margin = std::numeric_limits<real>::max();
    t.min_delta = std::numeric_limits<real>::max();
    t.max_residual = 0.0L;

    const real q_slack = 4.0L * std::numeric_limits<real>::epsilon() * e.q0;

    for (std::size_t i = 0; i < snodes.size(); ++i) {
        if (i > 0)
            advance(field, x, snodes[i - 1], snodes[i], opt.abs_tol, opt.rel_tol);

        const real Ri = std::exp(snodes[i]);
        const real D = pf.Delta(x[0], x[1]);
        if (D <= pf.delta_floor())
            throw CertificateError("profile trajectory approached the sonic set");
        const real RdV = pf.DeltaV(x[0], x[1]) / D;
        const real RdQ = pf.DeltaQ(x[0], x[1]) / D;

        t.R.push_back(Ri);
        t.V.push_back(x[0]);
        t.Q.push_back(x[1]);
        t.dV.push_back(RdV / Ri);
        t.dQ.push_back(RdQ / Ri);

        const RegionCheck rc = check_invariant_region(e, x[0], x[1]);
        t.in_omega_all = t.in_omega_all && rc.in_omega;
        t.min_outgoing_margin = std::min(t.min_outgoing_margin, rc.outgoing_margin);
        t.min_delta = std::min(t.min_delta, D);

        const auto res = pf.closed_residuals(x[0], x[1], RdV, RdQ);
        t.max_residual = std::max({t.max_residual, res[0], res[1]});

        if (i > 0 && t.Q[i] >= t.Q[i - 1] + q_slack)
            t.q_monotone = false;
    }
    if (t.Q.back() >= t.Q.front())
        t.q_monotone = false;

    if (!t.in_omega_all)
        throw CertificateError("profile trajectory left the invariant region");

    t.terminal_decay = (std::abs(t.V.back()) + t.Q.back()) *
                       std::pow(opt.r_max, 1.0L / e.c_r);
    if (!(t.terminal_decay < 1e3L))
        throw CertificateError("profile tail does not decay toward the free fixed point");

    return t;
}

ProfileValue profile_at(const ProfileTable& t, real R) {
    if (!(R >= 0.0L))
        throw std::domain_error("profile_at: R must be nonnegative");
    if (R < t.series.r_switch) {
        const SeriesEval ev = evaluate_series(t.series, R);
        return {ev.V, ev.Q, ev.dV, ev.dQ, true, false};
    }
    if (R > t.r_max * (1.0L + 1e-14L))
        throw std::domain_error("profile_at: R beyond the table; use the tail expansion");

    const real s = std::log(std::min(R, t.r_max));
    // Nodes are uniform in log R except possibly the last interval.
    auto it = std::upper_bound(t.R.begin(), t.R.end(), R);
    std::size_t hi = static_cast<std::size_t>(it - t.R.begin());
    if (hi == 0) hi = 1;
    if (hi >= t.R.size()) hi = t.R.size() - 1;
    const std::size_t lo = hi - 1;

    const real s_lo = std::log(t.R[lo]);
    const real s_hi = std::log(t.R[hi]);
    const real h = s_hi - s_lo;
    const real u = (s - s_lo) / h;

    // log-derivatives at the two nodes
    const real gV0 = t.R[lo] * t.dV[lo], gV1 = t.R[hi] * t.dV[hi];
    const real gQ0 = t.R[lo] * t.dQ[lo], gQ1 = t.R[hi] * t.dQ[hi];

    const real h00 = (2.0L * u - 3.0L) * u * u + 1.0L;
    const real h10 = ((u - 2.0L) * u + 1.0L) * u;
    const real h01 = (3.0L - 2.0L * u) * u * u;
    const real h11 = (u - 1.0L) * u * u;
    const real d00 = (6.0L * u - 6.0L) * u / h;
    const real d10 = (3.0L * u - 4.0L) * u + 1.0L;
    const real d01 = (6.0L - 6.0L * u) * u / h;
    const real d11 = (3.0L * u - 2.0L) * u;

    ProfileValue pv;
    pv.V = t.V[lo] * h00 + h * gV0 * h10 + t.V[hi] * h01 + h * gV1 * h11;
    pv.Q = t.Q[lo] * h00 + h * gQ0 * h10 + t.Q[hi] * h01 + h * gQ1 * h11;
    const real dVds = t.V[lo] * d00 + gV0 * d10 + t.V[hi] * d01 + gV1 * d11;
    const real dQds = t.Q[lo] * d00 + gQ0 * d10 + t.Q[hi] * d01 + gQ1 * d11;
    pv.dV = dVds / R;
    pv.dQ = dQds / R;
    return pv;
}

HandoffReport handoff_check(const Exponents& e, const OriginSeries& s, real log_gap) {
    PhaseField pf{e};
    LogField field{&pf};

    HandoffReport hr;
    hr.r_to = s.r_switch;
    hr.r_from = s.r_switch * std::exp(-log_gap);
    const real s_from = std::log(hr.r_from);
    const real s_to = std::log(hr.r_to);

    const SeriesEval a = evaluate_series(s, hr.r_from);
    const SeriesEval b = evaluate_series(s, hr.r_to);
    const State x0{a.V, a.Q};

    State xc = x0;
    advance(field, xc, s_from, s_to, 1e-13L, 1e-12L);
    hr.err_controlled = std::max(std::abs(xc[0] - b.V), std::abs(xc[1] - b.Q));

    const State x1 = rk4_step(field, x0, s_from, log_gap);
    hr.err_rk4_h = std::max(std::abs(x1[0] - b.V), std::abs(x1[1] - b.Q));

    State x2 = rk4_step(field, x0, s_from, 0.5L * log_gap);
    x2 = rk4_step(field, x2, s_from + 0.5L * log_gap, 0.5L * log_gap);
    hr.err_rk4_h2 = std::max(std::abs(x2[0] - b.V), std::abs(x2[1] - b.Q));

    hr.richardson_ratio = (hr.err_rk4_h2 > 0.0L) ? hr.err_rk4_h / hr.err_rk4_h2 : 0.0L;
    return hr;
}

void write_profile_csv(const ProfileTable& t, const std::string& path) {
    CsvWriter w(path, {"R", "V", "Q", "dV", "dQ", "speed_minus", "speed_mid",
                       "speed_plus", "in_Omega", "outgoing_ok"},
                "imploslab.profile.v1");
    for (std::size_t i = 0; i < t.R.size(); ++i) {
        const RegionCheck rc = check_invariant_region(t.exp, t.V[i], t.Q[i]);
        w.row({t.R[i], t.V[i], t.Q[i], t.dV[i], t.dQ[i], rc.speed_minus,
               rc.speed_mid, rc.speed_plus, rc.in_omega ? 1.0L : 0.0L,
               rc.outgoing_ok ? 1.0L : 0.0L});
    }
}

} // namespace imploslab
