#include "imploslab/series.hpp"

#include <cfloat>
#include <cmath>
#include <stdexcept>

namespace imploslab {

RecursionKernel build_kernel(const Exponents& e, int n) {
    if (n < 1) throw std::invalid_argument("kernel order must be >= 1");
    const real a = e.params.alpha(), g = e.params.gamma, ad = e.params.alpha_d();
    const real k = e.kappa, q0 = e.q0, v0 = e.v0;
    RecursionKernel ker;
    ker.n = n;
    ker.M[0][0] = 2.0L * n * k;
    ker.M[0][1] = (1 + ad + 2 * a * n) * q0;
    ker.M[1][0] = a * k * q0 * (4 * a / g + 2.0L * n);
    ker.M[1][1] = 2.0L * n * k * k + (1 + 2 * v0) * k + (a / g) * q0 * q0;
    ker.det_n = ker.M[0][0] * ker.M[1][1] - ker.M[0][1] * ker.M[1][0];
    // independent route: det = 4 n^2 kappa (kappa^2 + kappa(1+2v0)/(2n) - v0^2 (a g d/2 + E_n))
    real En = correction_E(e.params, n);
    ker.det_closed = 4.0L * n * n * k *
                     (k * k + k * (1 + 2 * v0) / (2.0L * n) -
                      v0 * v0 * (a * g * e.params.d / 2 + En));
    real r0 = std::hypot(ker.M[0][0], ker.M[0][1]);
    real r1 = std::hypot(ker.M[1][0], ker.M[1][1]);
    ker.det_scale = r0 * r1;
    if (std::fabs(ker.det_n - ker.det_closed) > 1e-10L * ker.det_scale)
        throw std::logic_error("recursion determinant disagrees with closed form");
    return ker;
}

namespace {

// forcing of the first recursion equation at order n, from lower coefficients.
// Coefficients are nonzero only at multiples of the resonance order, so the
// convolutions stride by N (a sum of multiples of N is a multiple of N).
real forcing1(const Exponents& e, const std::vector<real>& v, const std::vector<real>& q, int n) {
    const real a = e.params.alpha(), ad = e.params.alpha_d();
    const int N = e.params.N;
    real f = 0;
    for (int m = N; m <= n - 1; m += N) {
        int j = n - m;
        f -= q[m] * v[j] * (1 + ad + 2.0L * n - 2 * (1 - a) * j);
    }
    return f;
}

real forcing2(const Exponents& e, const std::vector<real>& v, const std::vector<real>& q, int n) {
    const real a = e.params.alpha(), g = e.params.gamma;
    const real cr = e.c_r, v0 = e.v0, q0 = e.q0, k = e.kappa;
    const int N = e.params.N;
    real f = 0;
    for (int m = N; m <= n - 1; m += N) {
        int j = n - m;
        f -= v[m] * v[j] * (1 + cr + 3 * v0 + 4.0L * j * k);
        f -= v[m] * q[j] * 2 * a * q0 * (j + 1.0L);
        f -= q[m] * q[j] * k * (2 * a * a / g + 2.0L * a * j);
    }
    for (int m = N; m <= n - 2; m += N)
        for (int l = N; l <= n - m - 1; l += N) {
            int j = n - m - l;
            f -= v[m] * (v[l] * v[j] + a * q[l] * q[j]) * (2.0L * j + 1);
        }
    return f;
}

}  // namespace

OriginSeries solve_recursion(const Exponents& e, int order_max) {
    const int N = e.params.N;
    if (order_max <= 0) order_max = 30 * N;
    if (order_max < 2 * N) throw std::invalid_argument("order_max must be >= 2N");

    OriginSeries s;
    s.exp = e;
    s.order_max = order_max;
    s.v.assign(order_max + 1, 0);
    s.q.assign(order_max + 1, 0);
    s.v[0] = e.v0;
    s.q[0] = e.q0;

    const real a = e.params.alpha(), ad = e.params.alpha_d(), k = e.kappa, q0 = e.q0;
    // Orders that are not multiples of N carry zero coefficients: their
    // forcing is a convolution of multiples of N and the kernel is regular
    // away from the resonance, so the zero vector is the unique solution.
    for (int n = N; n <= order_max; n += N) {
        RecursionKernel ker = build_kernel(e, n);
        ker.F1 = forcing1(e, s.v, s.q, n);
        ker.F2 = forcing2(e, s.v, s.q, n);
        if (n == N) {
            // resonant order: forcing vanishes (lower orders are all zero) and
            // the solution is the kernel direction, normalized to v_N = 1
            real fscale = std::fabs(ker.F1) + std::fabs(ker.F2);
            if (fscale > 1e-12L * ker.det_scale)
                throw std::logic_error("nonzero forcing at the resonant order");
            if (std::fabs(ker.det_n) > 1e-10L * ker.det_scale)
                throw std::logic_error("recursion matrix nonsingular at the resonant order");
            s.q[n] = -q0 * (1 + ad + 2 * a * N) / (2.0L * N * k);
            s.v[n] = 1;
        } else {
            if (std::fabs(ker.det_n) <= 1e-10L * ker.det_scale)
                throw std::logic_error("singular recursion matrix away from the resonance");
            // adjugate solve of M (q_n, v_n)^T = (F1, F2)^T
            s.q[n] = (ker.M[1][1] * ker.F1 - ker.M[0][1] * ker.F2) / ker.det_n;
            s.v[n] = (-ker.M[1][0] * ker.F1 + ker.M[0][0] * ker.F2) / ker.det_n;
        }
        // residual re-substitution
        real r1 = ker.M[0][0] * s.q[n] + ker.M[0][1] * s.v[n] - ker.F1;
        real r2 = ker.M[1][0] * s.q[n] + ker.M[1][1] * s.v[n] - ker.F2;
        real scale = ker.det_scale * (std::fabs(s.q[n]) + std::fabs(s.v[n])) +
                     std::fabs(ker.F1) + std::fabs(ker.F2) + 1e-30L;
        if (std::fabs(r1) + std::fabs(r2) > 1e-12L * scale)
            throw std::logic_error("recursion residual exceeds tolerance");
    }

    // entropy log series: (c_r + V) (R dK/dR) = -(V - v0), with R dK/dR
    // expanding to sum 2k kcoef[k] R^{2k}
    s.kcoef.assign(order_max + 1, 0);
    std::vector<real> w(order_max + 1, 0);
    for (int n = N; n <= order_max; n += N) {
        real acc = -s.v[n];
        for (int m = N; m <= n - 1; m += N) acc -= s.v[m] * w[n - m];
        w[n] = acc / k;
        s.kcoef[n] = w[n] / (2.0L * n);
    }
    // H = exp(K) via the standard power-series exponential recurrence
    s.hcoef.assign(order_max + 1, 0);
    s.hcoef[0] = 1;
    for (int n = N; n <= order_max; n += N) {
        real acc = 0;
        for (int m = N; m <= n; m += N) acc += m * s.kcoef[m] * s.hcoef[n - m];
        s.hcoef[n] = acc / n;
    }

    // convergence radius: fit log|v_{kN}| + (3/2) log k ~ k log C, then
    // radius_lb = 0.5 * C^{-1/(2N)}
    std::vector<real> xs, ys;
    for (int kk = 1; kk * N <= order_max; ++kk) {
        real av = std::fabs(s.v[kk * N]);
        if (av > 0) {
            xs.push_back(kk);
            ys.push_back(std::log(av) + 1.5L * std::log((real)kk));
        }
    }
    if (xs.size() < 3) throw std::logic_error("too few coefficients for the radius fit");
    LineFit fit = least_squares_line(xs, ys);
    s.growth_C = std::exp(fit.slope);
    s.radius_lb = 0.5L * std::pow(s.growth_C, -1.0L / (2.0L * N));

    // default hand-off radius, raised when R^{2N} would drown in rounding of
    // V itself (large N): the deviation v_N R^{2N} must stay well above one ulp
    real base = std::min(0.25L, 0.5L * s.radius_lb);
    real r_floor = std::pow(64.0L * LDBL_EPSILON * std::fabs(e.v0), 1.0L / (2.0L * N));
    s.r_switch = std::max(base, std::min(r_floor, 0.9L * s.radius_lb));
    return s;
}

SeriesEval evaluate_series(const OriginSeries& s, real R) {
    if (R < 0 || R >= s.radius_lb)
        throw std::domain_error("series evaluated outside its certified radius");
    const real u = R * R;
    SeriesEval out;
    real V = 0, Q = 0, K = 0, H = 0, dVu = 0, dQu = 0, dKu = 0;
    for (int n = s.order_max; n >= 0; --n) {
        V = V * u + s.v[n];
        Q = Q * u + s.q[n];
        K = K * u + s.kcoef[n];
        H = H * u + s.hcoef[n];
        if (n >= 1) {
            dVu = dVu * u + n * s.v[n];
            dQu = dQu * u + n * s.q[n];
            dKu = dKu * u + n * s.kcoef[n];
        }
    }
    out.V = V;
    out.Q = Q;
    out.K = K;
    out.H = H;
    out.dV = 2 * R * dVu;
    out.dQ = 2 * R * dQu;
    out.dK = 2 * R * dKu;
    return out;
}

}  // namespace imploslab
