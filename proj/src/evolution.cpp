#include "imploslab/evolution.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "imploslab/series.hpp"

namespace imploslab {

namespace {

real factorial(int n) {
    real f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

real bump_eval(const BumpSpec& b, real R) {
    const real up = (R - b.center) / b.width;
    const real dn = (R + b.center) / b.width;
    return b.amplitude * (std::exp(-up * up) + std::exp(-dn * dn));
}

// exp(-((R-c)/w)^2) + exp(-((R+c)/w)^2) is even; expanding the cross term
// 2 exp(-(R^2+c^2)/w^2) cosh(2cR/w^2) in R gives the R^{2m} coefficient
//   2 A exp(-c^2/w^2) sum_{i+j=m} (-1/w^2)^i / i! * (2c/w^2)^{2j} / (2j)!.
real bump_even_coefficient(const BumpSpec& b, int m) {
    const real w2 = b.width * b.width;
    real sum = 0;
    for (int j = 0; j <= m; ++j) {
        const int i = m - j;
        real term = 1;
        for (int p = 0; p < i; ++p) term *= -1 / w2;
        term /= factorial(i);
        for (int p = 0; p < 2 * j; ++p) term *= 2 * b.center / w2;
        term /= factorial(2 * j);
        sum += term;
    }
    return 2 * b.amplitude * std::exp(-b.center * b.center / w2) * sum;
}

EvolutionGrid make_grid(int cells, real r_out, real stretch) {
    if (cells < 16) throw std::invalid_argument("evolution grid needs at least 16 cells");
    if (!(r_out > 0) || !(stretch > 0)) throw std::invalid_argument("grid extent must be positive");
    EvolutionGrid g;
    g.cells = cells;
    g.r_out = r_out;
    g.stretch = stretch;

    std::vector<real> edge(cells + 1);
    const real den = std::sinh(stretch);
    for (int j = 0; j <= cells; ++j)
        edge[j] = r_out * std::sinh(stretch * real(j) / cells) / den;
    g.center.resize(cells);
    for (int i = 0; i < cells; ++i) g.center[i] = (edge[i] + edge[i + 1]) / 2;

    // Ghost positions below R = 0 mirror the first cells; stencil indices
    // store the mirrored interior cell (fields are even, so the ghost value
    // equals the interior value).
    auto pos = [&](int j) { return j >= 0 ? g.center[j] : -g.center[-1 - j]; };
    g.stencil.resize(cells);
    for (int i = 0; i < cells; ++i) {
        int nodes[4];
        if (i == cells - 1) {
            nodes[0] = i - 3; nodes[1] = i - 2; nodes[2] = i - 1; nodes[3] = i;
        } else {
            nodes[0] = i - 2; nodes[1] = i - 1; nodes[2] = i; nodes[3] = i + 1;
        }
        std::vector<real> xs(4);
        for (int k = 0; k < 4; ++k) xs[k] = pos(nodes[k]);
        std::vector<real> w = fd_weights(g.center[i], xs, 1);
        for (int k = 0; k < 4; ++k) {
            g.stencil[i].idx[k] = nodes[k] >= 0 ? nodes[k] : -1 - nodes[k];
            g.stencil[i].w[k] = w[k] * g.center[i];  // R d/dR directly
        }
    }
    return g;
}

Simulator::Simulator(const Exponents& e, const ProfileTable& table, const EntropyProfile& entropy,
                     const EvolutionGrid& grid)
    : exp_(e), grid_(grid) {
    if (table.r_max < grid.r_out)
        throw std::invalid_argument("profile table does not cover the evolution grid");
    const int M = grid_.cells;
    theta_ = std::min<real>(1, 1 / e.c_r) / 2;

    baseV_.resize(M);
    baseQ_.resize(M);
    baseK_.resize(M);
    for (int i = 0; i < M; ++i) {
        const ProfileValue pv = profile_at(table, grid_.center[i]);
        baseV_[i] = pv.V;
        baseQ_[i] = pv.Q;
        baseK_[i] = entropy_log_at(table, entropy, grid_.center[i]);
    }

    // Even fit basis 1, R^2, ..., R^{2N}, R^{2N+2} on the innermost cells:
    // one spare order past the resonant coefficient keeps the R^{2N} read
    // from absorbing higher curvature.
    const int N = e.params.N;
    for (int p = 0; p <= N + 1; ++p) fit_powers_.push_back(2 * p);
    const int pts = std::min(M, int(fit_powers_.size()) * 4);
    fit_x_.assign(grid_.center.begin(), grid_.center.begin() + pts);
    const auto fit = [&](const std::vector<real>& f) {
        std::vector<real> y(f.begin(), f.begin() + pts);
        return fit_poly_powers(fit_x_, y, fit_powers_);
    };
    base_fit_[0] = fit(baseV_).coeffs;
    base_fit_[1] = fit(baseQ_).coeffs;
    base_fit_[2] = fit(baseK_).coeffs;

    baseW_.resize(M);
    baseZ_.resize(M);
    baseA_.resize(M);
    sV_.resize(M); sQ_.resize(M); sK_.resize(M);
    fV_.resize(M); fQ_.resize(M); fK_.resize(M);
    u1V_.resize(M); u1Q_.resize(M); u1K_.resize(M);
    ring_variables(baseV_, baseQ_, baseK_, baseW_, baseZ_, baseA_);

    P_inv_ = radial_eigensystem(e).P_inv;
}

EvolutionState Simulator::init_state(const PerturbationSpec& spec) const {
    const int N = exp_.params.N;
    if (N >= 2) {
        // Perturbations must vanish to order R^{2N-2} at the origin or the
        // Taylor record cannot separate the resonant coefficient.
        real scale = 0;
        for (const auto* list : {&spec.v, &spec.q, &spec.k})
            for (const BumpSpec& b : *list) scale += std::fabs(b.amplitude);
        for (int m = 1; m < N; ++m) {
            real coeff = 0;
            for (const auto* list : {&spec.v, &spec.q, &spec.k}) {
                real c = 0;
                for (const BumpSpec& b : *list) c += bump_even_coefficient(b, m);
                coeff = std::max(coeff, std::fabs(c));
            }
            if (coeff > 1e-12L * scale) {
                std::ostringstream os;
                os << "perturbation has a nonzero R^" << 2 * m
                   << " Taylor coefficient; orders below R^" << 2 * N
                   << " must vanish for this N";
                throw std::invalid_argument(os.str());
            }
        }
    }

    EvolutionState s;
    s.tau = 0;
    s.V = baseV_;
    s.Q = baseQ_;
    s.K = baseK_;
    const int M = grid_.cells;
    for (int i = 0; i < M; ++i) {
        const real r = grid_.center[i];
        for (const BumpSpec& b : spec.v) s.V[i] += bump_eval(b, r);
        for (const BumpSpec& b : spec.q) s.Q[i] += bump_eval(b, r);
        for (const BumpSpec& b : spec.k) s.K[i] += bump_eval(b, r);
    }
    s.taylor = taylor_record(s.V, s.Q, s.K);
    s.modulation = modulation_from(s.taylor);
    return s;
}

std::array<PolyFit, 3> Simulator::origin_fits(const std::vector<real>& V,
                                              const std::vector<real>& Q,
                                              const std::vector<real>& K) const {
    const size_t pts = fit_x_.size();
    std::array<PolyFit, 3> out;
    const std::vector<real>* fields[3] = {&V, &Q, &K};
    for (int f = 0; f < 3; ++f) {
        std::vector<real> y(fields[f]->begin(), fields[f]->begin() + pts);
        out[f] = fit_poly_powers(fit_x_, y, fit_powers_);
    }
    return out;
}

TaylorRecord Simulator::taylor_record(const std::vector<real>& V, const std::vector<real>& Q,
                                      const std::vector<real>& K) const {
    const std::array<PolyFit, 3> fits = origin_fits(V, Q, K);
    const int N = exp_.params.N;
    TaylorRecord t;
    t.v0 = fits[0].coeffs[0] - base_fit_[0][0];
    t.q0 = fits[1].coeffs[0] - base_fit_[1][0];
    t.k0 = fits[2].coeffs[0] - base_fit_[2][0];
    t.vN = fits[0].coeffs[N] - base_fit_[0][N];
    t.qN = fits[1].coeffs[N] - base_fit_[1][N];
    t.kN = fits[2].coeffs[N] - base_fit_[2][N];
    t.cond = std::max({fits[0].cond, fits[1].cond, fits[2].cond});

    // Misfit of the deviation against its own even fit: the baseline's
    // truncation error cancels, so odd or rough content stands out.
    const std::vector<real>* fields[3] = {&V, &Q, &K};
    const std::vector<real>* bases[3] = {&baseV_, &baseQ_, &baseK_};
    real worst = 0;
    for (int f = 0; f < 3; ++f) {
        for (size_t i = 0; i < fit_x_.size(); ++i) {
            real model = 0;
            const real u = fit_x_[i] * fit_x_[i];
            real up = 1;
            for (size_t p = 0; p < fit_powers_.size(); ++p) {
                model += (fits[f].coeffs[p] - base_fit_[f][p]) * up;
                up *= u;
            }
            const real data = (*fields[f])[i] - (*bases[f])[i];
            worst = std::max(worst, std::fabs(data - model));
        }
    }
    t.parity_residual = worst;
    return t;
}

ModulationState Simulator::modulation_from(const TaylorRecord& t) const {
    const real a = exp_.params.alpha();
    const real g = exp_.params.gamma;
    const real ad = exp_.params.alpha_d();
    Vector3r dev;
    dev << t.qN, t.vN, t.kN;
    const real phi = (P_inv_ * dev)(2);
    const real dc_r = exp_.kappa * phi - t.v0;
    const real dc_u = dc_r + (4 * a * a / g) * (exp_.q0 / exp_.v0) * t.q0 - t.v0 / exp_.v0;
    const real dc_b = exp_.kappa * phi - (2 * ad / (1 + ad)) * t.k0;
    ModulationState m;
    m.c_r = exp_.c_r + dc_r;
    m.c_u = exp_.c_u + dc_u;
    m.c_b = exp_.c_b + dc_b;
    return m;
}

void Simulator::apply_stencil(const std::vector<real>& f, std::vector<real>& out) const {
    const int M = grid_.cells;
    for (int i = 0; i < M; ++i) {
        const EvolutionGrid::Stencil& st = grid_.stencil[i];
        out[i] = st.w[0] * f[st.idx[0]] + st.w[1] * f[st.idx[1]] + st.w[2] * f[st.idx[2]] +
                 st.w[3] * f[st.idx[3]];
    }
}

void Simulator::rhs(const std::vector<real>& V, const std::vector<real>& Q,
                    const std::vector<real>& K, const ModulationState& mod, std::vector<real>& fV,
                    std::vector<real>& fQ, std::vector<real>& fK) const {
    apply_stencil(V, sV_);
    apply_stencil(Q, sQ_);
    apply_stencil(K, sK_);
    const real a = exp_.params.alpha();
    const real g = exp_.params.gamma;
    const real ad = exp_.params.alpha_d();
    const real cu_gap = mod.c_r - mod.c_u;
    const real cb_gap = mod.c_r - mod.c_b;
    const int M = grid_.cells;
    for (int i = 0; i < M; ++i) {
        const real cv = mod.c_r + V[i];
        fQ[i] = -((cu_gap + (1 + ad) * V[i]) * Q[i] + cv * sQ_[i] + a * Q[i] * sV_[i]);
        fV[i] = -(cu_gap * V[i] + V[i] * V[i] + (2 * a * a / g) * Q[i] * Q[i] + cv * sV_[i] +
                  a * Q[i] * sQ_[i] - (a / g) * Q[i] * Q[i] * sK_[i]);
        fK[i] = -(cb_gap + V[i] + cv * sK_[i]);
    }
}

real Simulator::cfl_dtau(const EvolutionState& s, real cfl) const {
    const real a = exp_.params.alpha();
    const int M = grid_.cells;
    real dt = std::numeric_limits<real>::infinity();
    for (int i = 0; i < M; ++i) {
        real gap = std::numeric_limits<real>::infinity();
        if (i > 0) gap = grid_.center[i] - grid_.center[i - 1];
        if (i + 1 < M) gap = std::min(gap, grid_.center[i + 1] - grid_.center[i]);
        const real speed = s.modulation.c_r + s.V[i] + a * std::fabs(s.Q[i]);
        if (speed <= 0) continue;  // the step guard reports this state
        dt = std::min(dt, cfl * gap / (grid_.center[i] * speed));
    }
    if (!std::isfinite(dt)) throw CertificateError("no admissible CFL step");
    return dt;
}

void Simulator::step(EvolutionState& s, real dtau) const {
    const int M = grid_.cells;

    ModulationState m = s.modulation;
    rhs(s.V, s.Q, s.K, m, fV_, fQ_, fK_);
    for (int i = 0; i < M; ++i) {
        u1V_[i] = s.V[i] + dtau * fV_[i];
        u1Q_[i] = s.Q[i] + dtau * fQ_[i];
        u1K_[i] = s.K[i] + dtau * fK_[i];
    }

    m = modulation_from(taylor_record(u1V_, u1Q_, u1K_));
    rhs(u1V_, u1Q_, u1K_, m, fV_, fQ_, fK_);
    for (int i = 0; i < M; ++i) {
        u1V_[i] = 0.75L * s.V[i] + 0.25L * (u1V_[i] + dtau * fV_[i]);
        u1Q_[i] = 0.75L * s.Q[i] + 0.25L * (u1Q_[i] + dtau * fQ_[i]);
        u1K_[i] = 0.75L * s.K[i] + 0.25L * (u1K_[i] + dtau * fK_[i]);
    }

    m = modulation_from(taylor_record(u1V_, u1Q_, u1K_));
    rhs(u1V_, u1Q_, u1K_, m, fV_, fQ_, fK_);
    const real w = 2.0L / 3.0L;
    for (int i = 0; i < M; ++i) {
        s.V[i] = s.V[i] / 3 + w * (u1V_[i] + dtau * fV_[i]);
        s.Q[i] = s.Q[i] / 3 + w * (u1Q_[i] + dtau * fQ_[i]);
        s.K[i] = s.K[i] / 3 + w * (u1K_[i] + dtau * fK_[i]);
    }
    s.tau += dtau;
    s.taylor = taylor_record(s.V, s.Q, s.K);
    s.modulation = modulation_from(s.taylor);

    const real a = exp_.params.alpha();
    real min_minus = std::numeric_limits<real>::infinity();
    for (int i = 0; i < M; ++i) {
        if (!std::isfinite(s.V[i]) || !std::isfinite(s.Q[i]) || !std::isfinite(s.K[i]))
            throw CertificateError("evolution state lost finiteness");
        if (s.Q[i] <= 0) throw CertificateError("sound speed positivity lost");
        min_minus = std::min(min_minus, s.modulation.c_r + s.V[i] - a * s.Q[i]);
    }
    if (min_minus <= 0) {
        std::ostringstream os;
        os << "outgoing regime lost at tau = " << double(s.tau);
        throw CertificateError(os.str());
    }
}

void Simulator::ring_variables(const std::vector<real>& V, const std::vector<real>& Q,
                               const std::vector<real>& K, std::vector<real>& W,
                               std::vector<real>& Z, std::vector<real>& A) const {
    apply_stencil(V, sV_);
    apply_stencil(Q, sQ_);
    apply_stencil(K, sK_);
    const real a = exp_.params.alpha();
    const real g = exp_.params.gamma;
    const int M = grid_.cells;
    for (int i = 0; i < M; ++i) {
        const real ent = Q[i] * sK_[i] / g;
        W[i] = sV_[i] + sQ_[i] - ent;
        Z[i] = sV_[i] - sQ_[i] + ent;
        A[i] = a * ent;
    }
}

RiemannDiagnostics Simulator::riemann_diagnostics(const EvolutionState& s) const {
    const int M = grid_.cells;
    RiemannDiagnostics d;
    d.W.resize(M);
    d.Z.resize(M);
    d.A.resize(M);
    ring_variables(s.V, s.Q, s.K, d.W, d.Z, d.A);

    const real a = exp_.params.alpha();
    real wsup = 0;
    real mn = std::numeric_limits<real>::infinity();
    real md = mn, mp = mn;
    for (int i = 0; i < M; ++i) {
        const real r = grid_.center[i];
        const real wgt = std::pow(std::sqrt(1 + r * r), theta_);
        const real dev = std::max({std::fabs(d.W[i] - baseW_[i]), std::fabs(d.Z[i] - baseZ_[i]),
                                   std::fabs(d.A[i] - baseA_[i])});
        wsup = std::max(wsup, wgt * dev);
        mn = std::min(mn, s.modulation.c_r + s.V[i] - a * s.Q[i]);
        md = std::min(md, s.modulation.c_r + s.V[i]);
        mp = std::min(mp, s.modulation.c_r + s.V[i] + a * s.Q[i]);
    }
    d.weighted_sup = wsup;
    d.min_speed_minus = mn;
    d.min_speed_mid = md;
    d.min_speed_plus = mp;

    // A determines d(log H)/dR up to the gas factor; integrating it back in R
    // and comparing with the stored K closes the loop on the entropy coupling.
    // Hermite-corrected trapezoid: the h^2/12 endpoint-derivative term lifts
    // the panel quadrature to the accuracy of the stencils themselves.
    const real g = exp_.params.gamma;
    std::vector<real> f(M), df(M);
    for (int i = 0; i < M; ++i) f[i] = g * d.A[i] / (a * s.Q[i] * grid_.center[i]);
    apply_stencil(f, df);  // R d f/dR
    for (int i = 0; i < M; ++i) df[i] /= grid_.center[i];
    real krec = s.K[0];
    real err = 0;
    for (int i = 1; i < M; ++i) {
        const real h = grid_.center[i] - grid_.center[i - 1];
        krec += h * (f[i] + f[i - 1]) / 2 + h * h * (df[i - 1] - df[i]) / 12;
        err = std::max(err, std::fabs(krec - s.K[i]));
    }
    d.entropy_roundtrip = err;
    return d;
}

namespace {

DecayFit fit_decay(const std::string& name, const std::vector<real>& tau,
                   const std::vector<real>& val) {
    DecayFit f;
    f.name = name;
    const size_t n = val.size();
    for (real v : val) f.peak = std::max(f.peak, std::fabs(v));

    // Flatline level: the series has stopped decaying by the end of the run,
    // so the median magnitude of the last stretch estimates the noise floor.
    const size_t tail_len = std::max<size_t>(n / 7, std::min<size_t>(n, 4));
    std::vector<real> tail;
    for (size_t i = n - tail_len; i < n; ++i) tail.push_back(std::fabs(val[i]));
    f.floor = median(tail);

    if (f.peak <= std::max(5 * f.floor, 1e-13L)) {
        f.at_floor = true;
        return f;
    }

    // Fit from the series peak down to where the floor takes over; the part
    // of the tail that has flattened onto the floor would bias the slope.
    size_t start = 0;
    for (size_t i = 0; i < n; ++i)
        if (std::fabs(val[i]) > std::fabs(val[start])) start = i;
    const real cut = std::max(3 * f.floor, f.peak * 1e-14L);
    std::vector<real> xs, ys;
    for (size_t i = start; i < n; ++i) {
        if (std::fabs(val[i]) <= cut) break;
        xs.push_back(tau[i]);
        ys.push_back(std::log(std::fabs(val[i])));
    }
    f.points = int(xs.size());
    if (f.points < 6) return f;

    const LineFit lf = theil_sen(xs, ys);
    f.rate = -lf.slope;

    // Compare mean log-magnitudes of the two window halves; a rising second
    // half means the series is not actually settling.
    const size_t h = xs.size() / 2;
    real m1 = 0, m2 = 0;
    for (size_t i = 0; i < h; ++i) m1 += ys[i];
    for (size_t i = h; i < xs.size(); ++i) m2 += ys[i];
    m1 /= real(h);
    m2 /= real(xs.size() - h);
    f.monotone_tail = m2 <= m1 + 0.2L;
    return f;
}

}  // namespace

EvolutionResult Simulator::run(const RunConfig& cfg) const {
    EvolutionState s = init_state(cfg.perturbation);
    EvolutionResult res;
    res.lambda_floor = lambda_lower(exp_.params);

    const int M = grid_.cells;
    auto record = [&]() {
        SeriesSample smp;
        smp.tau = s.tau;
        smp.taylor = s.taylor;
        smp.modulation = s.modulation;
        for (int i = 0; i < M; ++i) {
            smp.sup_dev_V = std::max(smp.sup_dev_V, std::fabs(s.V[i] - baseV_[i]));
            smp.sup_dev_Q = std::max(smp.sup_dev_Q, std::fabs(s.Q[i] - baseQ_[i]));
            smp.sup_dev_K = std::max(smp.sup_dev_K, std::fabs(s.K[i] - baseK_[i]));
        }
        const RiemannDiagnostics rd = riemann_diagnostics(s);
        smp.weighted_Y = rd.weighted_sup;
        smp.min_speed = rd.min_speed_minus;
        res.series.push_back(smp);
    };

    record();
    real next_rec = cfg.record_every;
    while (s.tau < cfg.tau_end - 1e-12L) {
        real dt = cfl_dtau(s, cfg.cfl);
        dt = std::min(dt, cfg.tau_end - s.tau);
        dt = std::min(dt, next_rec - s.tau);
        step(s, dt);
        ++res.steps;
        if (s.tau >= next_rec - 1e-12L) {
            record();
            next_rec += cfg.record_every;
        }
    }
    if (res.series.back().tau < s.tau - 1e-12L) record();

    std::vector<real> taus;
    for (const SeriesSample& smp : res.series) taus.push_back(smp.tau);
    auto column = [&](auto getter) {
        std::vector<real> col;
        for (const SeriesSample& smp : res.series) col.push_back(getter(smp));
        return col;
    };
    res.fits.push_back(fit_decay("v0", taus, column([](const SeriesSample& x) { return x.taylor.v0; })));
    res.fits.push_back(fit_decay("q0", taus, column([](const SeriesSample& x) { return x.taylor.q0; })));
    res.fits.push_back(fit_decay("k0", taus, column([](const SeriesSample& x) { return x.taylor.k0; })));
    res.fits.push_back(fit_decay("vN", taus, column([](const SeriesSample& x) { return x.taylor.vN; })));
    res.fits.push_back(fit_decay("qN", taus, column([](const SeriesSample& x) { return x.taylor.qN; })));
    res.fits.push_back(fit_decay("kN", taus, column([](const SeriesSample& x) { return x.taylor.kN; })));
    const Exponents& e = exp_;
    res.fits.push_back(fit_decay(
        "c_r", taus, column([&e](const SeriesSample& x) { return x.modulation.c_r - e.c_r; })));
    res.fits.push_back(fit_decay(
        "c_u", taus, column([&e](const SeriesSample& x) { return x.modulation.c_u - e.c_u; })));
    res.fits.push_back(fit_decay(
        "c_b", taus, column([&e](const SeriesSample& x) { return x.modulation.c_b - e.c_b; })));
    res.fits.push_back(
        fit_decay("weighted_Y", taus, column([](const SeriesSample& x) { return x.weighted_Y; })));

    res.min_speed_overall = std::numeric_limits<real>::infinity();
    for (const SeriesSample& smp : res.series) {
        res.min_speed_overall = std::min(res.min_speed_overall, smp.min_speed);
        res.max_parity_residual = std::max(res.max_parity_residual, smp.taylor.parity_residual);
    }
    res.final_state = s;
    return res;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    nlohmann::json j;
    in >> j;

    RunConfig cfg;
    const auto& jp = j.at("params");
    cfg.params = make_params(jp.at("d").get<int>(), jp.at("gamma").get<std::string>(),
                             jp.at("N").get<int>());
    if (j.contains("grid")) {
        const auto& jg = j.at("grid");
        if (jg.contains("cells")) cfg.cells = jg.at("cells").get<int>();
        if (jg.contains("r_out")) cfg.r_out = jg.at("r_out").get<double>();
        if (jg.contains("stretch")) cfg.stretch = jg.at("stretch").get<double>();
    }
    if (j.contains("cfl")) cfg.cfl = j.at("cfl").get<double>();
    if (j.contains("tau_end")) cfg.tau_end = j.at("tau_end").get<double>();
    if (j.contains("record_every")) cfg.record_every = j.at("record_every").get<double>();
    if (j.contains("table_r_max")) cfg.table_r_max = j.at("table_r_max").get<double>();
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("perturbation")) {
        const auto& jb = j.at("perturbation");
        auto read_list = [&](const char* key, std::vector<BumpSpec>& out) {
            if (!jb.contains(key)) return;
            for (const auto& item : jb.at(key)) {
                BumpSpec b;
                b.amplitude = item.at("amplitude").get<double>();
                b.center = item.at("center").get<double>();
                b.width = item.at("width").get<double>();
                out.push_back(b);
            }
        };
        read_list("v", cfg.perturbation.v);
        read_list("q", cfg.perturbation.q);
        read_list("k", cfg.perturbation.k);
    }
    return cfg;
}

void save_run_config(const RunConfig& cfg, const std::string& path) {
    nlohmann::json j;
    j["schema"] = "imploslab.runconfig.v1";
    std::string gamma_text = std::to_string(cfg.params.gamma_num);
    if (cfg.params.gamma_den != 1) gamma_text += "/" + std::to_string(cfg.params.gamma_den);
    j["params"] = {{"d", cfg.params.d}, {"gamma", gamma_text}, {"N", cfg.params.N}};
    j["grid"] = {{"cells", cfg.cells},
                 {"r_out", double(cfg.r_out)},
                 {"stretch", double(cfg.stretch)}};
    j["cfl"] = double(cfg.cfl);
    j["tau_end"] = double(cfg.tau_end);
    j["record_every"] = double(cfg.record_every);
    j["table_r_max"] = double(cfg.table_r_max);
    if (!cfg.out_dir.empty()) j["out_dir"] = cfg.out_dir;
    auto bump_list = [](const std::vector<BumpSpec>& list) {
        nlohmann::json arr = nlohmann::json::array();
        for (const BumpSpec& b : list)
            arr.push_back({{"amplitude", double(b.amplitude)},
                           {"center", double(b.center)},
                           {"width", double(b.width)}});
        return arr;
    };
    j["perturbation"] = {{"v", bump_list(cfg.perturbation.v)},
                         {"q", bump_list(cfg.perturbation.q)},
                         {"k", bump_list(cfg.perturbation.k)}};

    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write config file: " + path);
    out << j.dump(2) << "\n";
}

EvolutionResult run_evolution(const RunConfig& cfg) {
    const Exponents e = compute_exponents(cfg.params);
    const OriginSeries series = solve_recursion(e);
    IntegrateOptions opt;
    opt.r_max = cfg.table_r_max;
    const ProfileTable table = integrate_profile(e, series, opt);
    const EntropyProfile entropy = build_entropy(table);
    const EvolutionGrid grid = make_grid(cfg.cells, cfg.r_out, cfg.stretch);
    const Simulator sim(e, table, entropy, grid);
    EvolutionResult res = sim.run(cfg);
    if (!cfg.out_dir.empty()) {
        write_series_csv(res, cfg.out_dir + "/series.csv");
        write_fields_csv(sim, res.final_state, cfg.out_dir + "/fields.csv");
    }
    return res;
}

void write_series_csv(const EvolutionResult& r, const std::string& path) {
    CsvWriter csv(path, {"tau", "v0", "q0", "k0", "vN", "qN", "kN", "c_r", "c_u", "c_b",
                         "sup_dev_V", "sup_dev_Q", "sup_dev_K", "weighted_Y", "min_speed",
                         "parity_residual"},
                  "imploslab.series.v1");
    for (const SeriesSample& s : r.series)
        csv.row({s.tau, s.taylor.v0, s.taylor.q0, s.taylor.k0, s.taylor.vN, s.taylor.qN,
                 s.taylor.kN, s.modulation.c_r, s.modulation.c_u, s.modulation.c_b, s.sup_dev_V,
                 s.sup_dev_Q, s.sup_dev_K, s.weighted_Y, s.min_speed, s.taylor.parity_residual});
}

void write_fields_csv(const Simulator& sim, const EvolutionState& s, const std::string& path) {
    CsvWriter csv(path, {"R", "V", "Q", "K", "dev_V", "dev_Q", "dev_K"},
                  "imploslab.evofields.v1");
    const EvolutionGrid& g = sim.grid();
    for (int i = 0; i < g.cells; ++i)
        csv.row({g.center[i], s.V[i], s.Q[i], s.K[i], s.V[i] - sim.baseline_V()[i],
                 s.Q[i] - sim.baseline_Q()[i], s.K[i] - sim.baseline_K()[i]});
}

}  // namespace imploslab
