// Power series of the profile (V, Q) in R^2 at the origin, built from the
// resonant two-by-two recursion, together with the entropy-log series and a
// fitted lower bound on the convergence radius.
#pragma once

#include "imploslab/gas.hpp"

namespace imploslab {

// Order-n recursion matrix and its determinant. The determinant vanishes
// exactly at n = N; that resonance is what selects c_r.
struct RecursionKernel {
    int n = 0;
    real M[2][2] = {{0, 0}, {0, 0}};  // acts on (q_n, v_n)
    real F1 = 0, F2 = 0;              // forcing (filled by solve_recursion)
    real det_n = 0;
    real det_closed = 0;  // independent closed-form value of the determinant
    real det_scale = 0;   // Hadamard normalizer for "det == 0" tests
};

RecursionKernel build_kernel(const Exponents& e, int n);

struct OriginSeries {
    Exponents exp;
    int order_max = 0;        // highest retained power of R^2
    std::vector<real> v, q;   // index k = 0..order_max; v[0]=v0, q[0]=q0
    std::vector<real> kcoef;  // K = log H = sum_{k>=1} kcoef[k] R^{2k}
    std::vector<real> hcoef;  // H = sum_{k>=0} hcoef[k] R^{2k}, hcoef[0]=1
    real radius_lb = 0;       // fitted certified-ish lower bound on the radius
    real r_switch = 0;        // hand-off radius to the ODE integrator
    real growth_C = 0;        // fitted geometric growth constant of |v_{kN}|
};

// Solves the recursion through order_max (>= 2N), normalizing the resonant
// kernel direction to v_N = 1. Residual of every solved order is re-checked
// by substitution; failure throws std::logic_error (internal inconsistency).
OriginSeries solve_recursion(const Exponents& e, int order_max = 0);

struct SeriesEval {
    real V = 0, Q = 0, dV = 0, dQ = 0;  // d/dR derivatives
    real K = 0, dK = 0, H = 0;
};

// Horner evaluation in R^2; derivatives are term-wise. Throws
// std::domain_error for R >= radius_lb.
SeriesEval evaluate_series(const OriginSeries& s, real R);

}  // namespace imploslab
