#include "imploslab/gas.hpp"

#include <cmath>
#include <stdexcept>

namespace imploslab {

void GasParams::validate() const {
    if (d < 1 || d > 3) throw std::invalid_argument("d must be 1, 2, or 3");
    if (!(gamma > 1.0L) || !(gamma <= 2.0L * d + 1.0L))
        throw std::invalid_argument("gamma must lie in (1, 2d+1]");
    if (N < 1) throw std::invalid_argument("N must be >= 1");
    if (gamma_den <= 0) throw std::invalid_argument("gamma denominator must be positive");
}

GasParams make_params(int d, const std::string& gamma_text, int N) {
    Rational64 g = parse_rational(gamma_text);
    GasParams p;
    p.d = d;
    p.gamma_num = g.num;
    p.gamma_den = g.den;
    p.gamma = g.value();
    p.N = N;
    p.validate();
    return p;
}

real correction_E(const GasParams& p, int n) {
    real a = p.alpha(), g = p.gamma, d = p.d;
    return a * g * d * (d + 2) / (4.0L * n) + a * d * (1 + a * d) / (2.0L * n * n);
}

real c_r_star(const GasParams& p, int n) {
    real a = p.alpha(), g = p.gamma, d = p.d, ad = p.alpha_d();
    real rad = a * g * d / 2 + correction_E(p, n) + (1 - ad) * (1 - ad) / (16.0L * n * n);
    return (1 + std::sqrt(rad) + (1 - ad) / (4.0L * n)) / (1 + ad);
}

real c_r_limit(const GasParams& p) {
    real a = p.alpha(), g = p.gamma, d = p.d, ad = p.alpha_d();
    return (1 + std::sqrt(a * g * d / 2)) / (1 + ad);
}

Exponents compute_exponents(const GasParams& p) {
    p.validate();
    Exponents e;
    e.params = p;
    real a = p.alpha(), g = p.gamma, d = p.d, ad = p.alpha_d();
    e.v0 = -1 / (1 + ad);
    e.q0 = std::sqrt(d * g / (2 * a)) / (1 + ad);
    e.h0 = 1;
    e.E_N = correction_E(p, p.N);
    e.c_r = c_r_star(p, p.N);
    e.c_u = e.c_r - 1;
    e.c_b = e.c_r - 1 / (1 + ad);
    e.kappa = e.c_r + e.v0;
    // internal sanity: the origin values solve V + V^2 + (2 a^2/g) Q^2 = 0,
    // and kappa must coincide with c_b
    real fp = e.v0 + e.v0 * e.v0 + (2 * a * a / g) * e.q0 * e.q0;
    if (std::fabs(fp) > 1e-17L || std::fabs(e.kappa - e.c_b) > 1e-17L)
        throw std::logic_error("exponent identities violated (internal inconsistency)");
    return e;
}

real Exponents::outgoing_lower_bound() const {
    real ad = params.alpha_d();
    return (1 + (2.0L / 3.0L) * ad) / (4.0L * params.N * (1 + ad));
}

KineticCheck kinetic_admissible(const GasParams& p, real gamma_kin) {
    if (gamma_kin < -3.0L || gamma_kin > 2.0L)
        throw std::invalid_argument("gamma_kin must lie in [-3, 2]");
    Exponents e = compute_exponents(p);
    KineticCheck k;
    k.margin = -3 * e.c_b + (gamma_kin + 3) * e.c_u + 1;
    k.admissible = k.margin < 0;
    return k;
}

real lambda_lower(const GasParams& p) {
    real a = p.alpha(), ad = p.alpha_d();
    real c_r = c_r_star(p, p.N);
    real t1 = a / (2 * (1 + ad));
    real t2 = (p.N + 1) * (c_r - 1 / (1 + ad));
    GasParams q = p;
    q.N = p.N + 1;
    real t3 = (p.N + 1) * (c_r - c_r_star(q, q.N));
    return std::min(t1, std::min(t2, t3));
}

std::vector<ExponentRow> exponent_sweep(GasParams p, int N_from, int N_to) {
    if (N_from < 1 || N_to < N_from) throw std::invalid_argument("bad N range");
    std::vector<ExponentRow> rows;
    for (int n = N_from; n <= N_to; ++n) {
        p.N = n;
        rows.push_back({n, compute_exponents(p)});
    }
    // limit row: exponents with c_r replaced by its closed-form limit
    p.N = N_to;
    Exponents lim = compute_exponents(p);
    lim.c_r = c_r_limit(p);
    lim.c_u = lim.c_r - 1;
    lim.c_b = lim.c_r - 1 / (1 + p.alpha_d());
    lim.kappa = lim.c_b;
    lim.E_N = 0;
    rows.push_back({-1, lim});
    return rows;
}

std::vector<real> gamma_grid(int d, int count) {
    // count values filling (1, 2d+1], uniformly spaced, endpoint included
    std::vector<real> g(count);
    for (int j = 1; j <= count; ++j)
        g[j - 1] = 1 + (2.0L * d) * j / count;
    return g;
}

}  // namespace imploslab
