// Similarity exponents and origin values for smooth non-isentropic
// self-similar Euler implosion profiles. Everything here is closed-form;
// the rest of the library consumes these values.
#pragma once

#include <vector>

#include "imploslab/util.hpp"

namespace imploslab {

struct GasParams {
    int d = 3;                 // spatial dimension, 1..3
    real gamma = 5.0L / 3.0L;  // adiabatic exponent, in (1, 2d+1]
    std::int64_t gamma_num = 5;  // exact rational form of gamma
    std::int64_t gamma_den = 3;
    int N = 1;  // resonance order (ground state N=1)

    real alpha() const { return (gamma - 1) / 2; }
    real alpha_d() const { return alpha() * d; }
    void validate() const;  // throws std::invalid_argument outside the box
};

GasParams make_params(int d, const std::string& gamma_text, int N);

struct Exponents {
    GasParams params;
    real c_r = 0;    // space similarity exponent
    real c_u = 0;    // velocity exponent, c_r - 1
    real c_b = 0;    // entropy exponent, c_r - 1/(1+alpha d)
    real kappa = 0;  // c_r + v0; equals c_b
    real v0 = 0;     // V(0) = -1/(1+alpha d)
    real q0 = 0;     // Q(0) = sqrt(d gamma/(2 alpha))/(1+alpha d)
    real h0 = 1;     // H(0)
    real E_N = 0;    // correction term entering the c_r closed form

    // uniform positive lower bound for the slowest outgoing speed c_r+v0-alpha q0
    real outgoing_lower_bound() const;
};

// Correction term E_n(d, gamma) of the exponent formula.
real correction_E(const GasParams& p, int n);

// The admissible exponent c_r*(d, gamma, n) whose resonance sits at order n.
real c_r_star(const GasParams& p, int n);

// Closed-form N -> infinity limit of c_r (and c_b = that minus 1/(1+alpha d)).
real c_r_limit(const GasParams& p);

Exponents compute_exponents(const GasParams& p);

// Scalar hydrodynamic-limit admissibility: true iff
// -3 c_b + (gamma_kin + 3) c_u + 1 < 0. Returns the signed margin
// (negative = admissible) alongside the verdict.
struct KineticCheck {
    bool admissible = false;
    real margin = 0;  // -3 c_b + (gamma_kin+3) c_u + 1
};
KineticCheck kinetic_admissible(const GasParams& p, real gamma_kin);

// Analytic decay rate floor for the modulated evolution:
// min{ alpha/(2(1+alpha d)), (N+1)(c_r - 1/(1+alpha d)), (N+1)(c_r - c_r*(N+1)) }.
real lambda_lower(const GasParams& p);

// Sweep over N, appending one row per N plus the closed-form limit row
// (reported with N = -1).
struct ExponentRow {
    int N;  // -1 marks the limit row
    Exponents exp;
};
std::vector<ExponentRow> exponent_sweep(GasParams p, int N_from, int N_to);

// The 20-gamma x N<=20 verification grid used by the certificate suite.
std::vector<real> gamma_grid(int d, int count = 20);

}  // namespace imploslab
