#include "imploslab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

namespace imploslab {

namespace {

using gauss7 = boost::math::quadrature::gauss<real, 7>;

// far-field values from the tail partial sums
void tail_vq(const TailSeries& ts, real R, real& V, real& Q) {
    const real x = std::pow(R, -1.0L / ts.exp.c_r);
    real sv = 0, sq = 0;
    for (int n = ts.n_max; n >= 1; --n) {
        sv = (sv + ts.v[n]) * x;
        sq = (sq + ts.q[n]) * x;
    }
    V = sv;
    Q = sq;
}

} // namespace

SimilarityPoint eval_similarity(const FieldBundle& b, real R) {
    if (!b.table || !b.entropy)
        throw std::invalid_argument("eval_similarity: bundle lacks a table or entropy profile");

    SimilarityPoint sp;
    const ProfileTable& t = *b.table;
    if (R <= t.r_max) {
        const ProfileValue pv = profile_at(t, R);
        sp.V = pv.V;
        sp.Q = pv.Q;
        sp.K = entropy_log_at(t, *b.entropy, R);
        return sp;
    }
    if (!b.allow_extrapolation || !b.tail)
        throw std::domain_error("eval_similarity: R beyond the table and extrapolation is off");

    sp.extrapolated = true;
    tail_vq(*b.tail, R, sp.V, sp.Q);

    // continue K = log H beyond the table by quadrature of the closed-form
    // log-derivative, with V supplied by the tail expansion
    const Exponents& e = t.exp;
    auto w = [&](real s) {
        real V, Q;
        tail_vq(*b.tail, std::exp(s), V, Q);
        return (V - e.v0) / (e.c_r + V);
    };
    const real s_max = std::log(t.r_max);
    const real s_end = std::log(R);
    real K = b.entropy->K.back();
    real s = s_max;
    while (s < s_end) {
        const real s2 = std::min(s + 0.25L, s_end);
        K -= gauss7::integrate(w, s, s2);
        s = s2;
    }
    sp.K = K;
    return sp;
}

Snapshot make_snapshot(const FieldBundle& b, real t, int points, real R_lo, real R_hi) {
    if (!(t < 0))
        throw std::invalid_argument("make_snapshot: t must be negative");
    if (!(R_lo > 0 && R_hi > R_lo) || points < 2)
        throw std::invalid_argument("make_snapshot: bad similarity range");

    const Exponents& e = b.table->exp;
    const GasParams& p = e.params;
    const real a = p.alpha(), g = p.gamma;
    const real mt = -t;
    const real time_rho = std::pow(mt, -static_cast<real>(p.d) / (1.0L + p.alpha_d()));
    const real time_u = std::pow(mt, e.c_r - 1.0L);
    const real space = std::pow(mt, e.c_r);

    Snapshot snap;
    snap.t = t;
    // origin sample: p and u vanish identically, the density is maximal
    snap.r.push_back(0);
    snap.rho.push_back(time_rho * std::pow(a * e.q0, 1.0L / a));
    snap.u_r.push_back(0);
    snap.p.push_back(0);
    snap.c.push_back(0);

    const real lstep = std::log(R_hi / R_lo) / (points - 1);
    for (int i = 0; i < points; ++i) {
        const real R = R_lo * std::exp(lstep * i);
        const SimilarityPoint sp = eval_similarity(b, R);
        const real H = std::exp(sp.K);
        const real rho = time_rho * std::pow(a * sp.Q / H, 1.0L / a);
        const real sigma = time_u * R * sp.Q;
        snap.r.push_back(R * space);
        snap.rho.push_back(rho);
        snap.u_r.push_back(time_u * R * sp.V);
        snap.p.push_back((a * a / g) * rho * sigma * sigma);
        snap.c.push_back(a * sigma);
    }
    return snap;
}

real snapshot_transport_consistency(const FieldBundle& b, const Snapshot& s) {
    const Exponents& e = b.table->exp;
    const real g = e.params.gamma;
    const real mt = -s.t;
    const real space = std::pow(mt, e.c_r);
    real worst = 0;
    for (std::size_t i = 1; i < s.r.size(); ++i) {
        const real R = s.r[i] / space;
        const real H = std::exp(eval_similarity(b, R).K);
        const real via_state = g * s.p[i] / std::pow(s.rho[i], g);
        const real via_profile = std::pow(mt, 2.0L * e.c_b) * (R * H) * (R * H);
        worst = std::max(worst, std::abs(via_state - via_profile) /
                                    std::max(via_state, via_profile));
    }
    return worst;
}

ImplosionLimits implosion_limits(const TailSeries& ts) {
    const Exponents& e = ts.exp;
    const GasParams& p = e.params;
    const real a = p.alpha(), g = p.gamma, ad = p.alpha_d();
    const real cr = e.c_r;
    const int d = p.d;

    ImplosionLimits il;
    il.u_amp = ts.v[1];
    il.u_exp = 1.0L - 1.0L / cr;
    il.sigma_amp = ts.q[1];
    il.sigma_exp = 1.0L - 1.0L / cr;
    il.b_amp = ts.h1;
    il.b_exp = e.c_b / cr;
    il.rho_amp = std::pow(a * ts.q[1] / ts.h1, 1.0L / a);
    il.rho_exp = -d / ((1.0L + ad) * cr);
    il.p_amp = (a * a / g) * il.rho_amp * ts.q[1] * ts.q[1];
    il.p_exp = il.rho_exp + 2.0L - 2.0L / cr;
    il.energy_amp = 0.5L * il.rho_amp * ((a / g) * ts.q[1] * ts.q[1] + ts.v[1] * ts.v[1]);
    il.energy_exp = il.p_exp;

    // local integrability of rho r^{d-1}, rho|u| r^{d-1}, E r^{d-1} near 0
    il.mass_finite = cr > 1.0L / (1.0L + ad);
    il.momentum_finite = cr > (d + 1.0L + ad) / ((d + 1.0L) * (1.0L + ad));
    il.energy_finite = cr > (d + 2.0L + 2.0L * ad) / ((d + 2.0L) * (1.0L + ad));
    il.velocity_blows_up = cr < 1.0L;
    return il;
}

BlowupRates blowup_rate_regression(const FieldBundle& b, const std::vector<real>& times) {
    const Exponents& e = b.table->exp;
    const GasParams& p = e.params;
    std::vector<real> ts = times;
    if (ts.empty())
        for (int k = 0; k <= 8; ++k) ts.push_back(-std::pow(10.0L, -0.5L * k));

    std::vector<real> lx, l_rho, l_p, l_u;
    real p_first = 0, p_last = 0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const Snapshot s = make_snapshot(b, ts[k], 128);
        lx.push_back(std::log(-ts[k]));
        l_rho.push_back(std::log(s.rho[0]));

        // values along the similarity ray R = 1
        const SimilarityPoint sp = eval_similarity(b, 1.0L);
        const real mt = -ts[k];
        const real sigma = std::pow(mt, e.c_r - 1.0L) * sp.Q;
        const real rho = std::pow(mt, -static_cast<real>(p.d) / (1.0L + p.alpha_d())) *
                         std::pow(p.alpha() * sp.Q / std::exp(sp.K), 1.0L / p.alpha());
        l_p.push_back(std::log((p.alpha() * p.alpha() / p.gamma) * rho * sigma * sigma));
        l_u.push_back(std::log(std::abs(std::pow(mt, e.c_r - 1.0L) * sp.V)));

        const real pmax = *std::max_element(s.p.begin(), s.p.end());
        if (k == 0) p_first = pmax;
        p_last = pmax;
    }

    BlowupRates br;
    br.rho_rate = least_squares_line(lx, l_rho).slope;
    br.rho_rate_expected = -static_cast<real>(p.d) / (1.0L + p.alpha_d());
    br.p_rate = least_squares_line(lx, l_p).slope;
    br.p_rate_expected = br.rho_rate_expected + 2.0L * (e.c_r - 1.0L);
    br.u_rate = least_squares_line(lx, l_u).slope;
    br.u_rate_expected = e.c_r - 1.0L;
    br.max_p_ratio = p_last / p_first;
    return br;
}

void write_snapshot_csv(const Snapshot& s, const std::string& path) {
    CsvWriter w(path, {"t", "r", "rho", "u_r", "p", "c"}, "imploslab.snapshot.v1");
    for (std::size_t i = 0; i < s.r.size(); ++i)
        w.row({s.t, s.r[i], s.rho[i], s.u_r[i], s.p[i], s.c[i]});
}

} // namespace imploslab
