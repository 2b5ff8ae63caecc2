#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "imploslab/gas.hpp"
#include "imploslab/util.hpp"

namespace imploslab {

using BlockMatrix = Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
using Matrix3r = Eigen::Matrix<real, 3, 3>;
using Vector3r = Eigen::Matrix<real, 3, 1>;

// Every linear-stability matrix family.  The H-family and the scalar are
// written as d/dtau X = A X (positive real parts are unstable); the radial
// and 0th-order blocks appear in the flow as d/dtau X + A X = 0, so there
// the unstable directions correspond to negative matrix eigenvalues.
enum class BlockKind {
    A0,        // 2x2 radial constant block
    A1N,       // 3x3 resonant-order radial block E0 + 2N E1
    E0_2LE1,   // 3x3 higher-order radial block at order 2L
    G0,        // 3x3 0th-order block
    G0sym,     // 2x2 symmetric-part restriction of G0
    G1,        // 3x3 Nth-order 0D block, equals -H3_N
    H3,        // 3x3 pure-Laplacian-power block, index k
    Hbk,       // 4x4 mixed-derivative block, indices (|beta|, k)
    H2,        // 2x2 restriction governing (Delta^k Z, Delta^k B)
    H1_1D,     // 3x3 one-dimensional block at order n
    U_scalar,  // 1x1 transport scalar -n kappa - 2 v0 - 1
};

struct SpectralBlock {
    BlockKind kind;
    GasParams params;
    int n = 0;      // total order where applicable
    int beta = 0;   // |beta| for Hbk
    int k = 0;      // Laplacian index for H3/Hbk, L for E0_2LE1
    BlockMatrix A;
    bool rhs_flow = true;
};

// indices: H3 -> (k); Hbk -> (|beta|, k); H2/H1_1D/U_scalar -> (n);
// E0_2LE1 -> (L); the rest take none.
SpectralBlock assemble_block(BlockKind kind, const Exponents& e, int i1 = 0, int i2 = 0);

// monic characteristic polynomial, coeffs[0] = 1, coeffs[i] multiplies
// lambda^{size-i}
std::vector<real> charpoly(const BlockMatrix& A);

// roots of a monic real polynomial of degree <= 4 in closed form
std::vector<std::complex<real>> poly_roots(const std::vector<real>& monic);

struct RouthResult {
    int count_positive = 0;
    bool degenerate = false;
};

// Routh table in exact rational arithmetic on rationalized coefficients.
// scale is the magnitude of the matrix entries; coefficients below
// 1e-9 * scale^position are treated as structural zeros.  A zero first-column
// pivot marks the table degenerate (callers then fall back to root counts).
RouthResult routh_hurwitz(const std::vector<real>& monic, real scale);

struct ModeCensus {
    int neg = 0, zero = 0, pos = 0;
    bool rh_degenerate = false;
    std::vector<std::complex<real>> eigenvalues;
};

// Eigenvalue census by sign of the real part (tolerance 1e-9): closed-form
// roots, cross-checked against a dense eigensolver and, when the table is
// regular, against the Routh count.  Disagreement throws logic_error.
// expected_zero >= 0 asserts the count of structural zero eigenvalues.
ModeCensus mode_census(const SpectralBlock& b, int expected_zero = -1);

// weighted Gershgorin dominance over every partition at total order n,
// establishing Re(lambda) <= -theta for all blocks at that order
struct GershgorinResult {
    bool ok = false;
    real worst_margin = 0;
};

GershgorinResult gershgorin_certificate(const Exponents& e, int n, real theta);

int stabilization_order(const GasParams& p);  // (18 d)^2 N

// census sweep reproducing the known tables for the five special parameter
// cases (N = 1); every H-block is Routh-cross-checked along the way
struct CaseCensusReport {
    bool ok = true;
    std::vector<std::string> failures;
};

CaseCensusReport run_known_case_censuses(const Exponents& e);

struct UnstableDimension {
    int m0 = 0;     // 0th-order contributions
    int m1 = 0;     // first-order block contributions
    int m2 = 0;     // second-order contributions
    int total = 0;
    bool exact = false;   // true for the five special cases
    std::string note;
};

UnstableDimension unstable_dimension(const Exponents& e);

// radial Taylor-coefficient systems
Matrix3r E0_matrix(const Exponents& e);
Matrix3r E1_matrix(const Exponents& e);

struct RadialEigensystem {
    real lambda_sharp = 0;   // 2 N kappa
    real lambda_flat = 0;    // 4 N kappa + 1 + 2 v0; the third eigenvalue is 0
    Vector3r p_sharp, p_flat, p_dagger;   // (q, v, k) component order
    Matrix3r P;        // columns (p_sharp, p_flat, p_dagger)
    Matrix3r P_inv;
};

// eigensystem of A1 = E0 + 2N E1, verified against the matrix to 1e-10
RadialEigensystem radial_eigensystem(const Exponents& e);

std::array<real, 3> radial_higher_order_closed(const Exponents& e, int L);
std::array<real, 3> radial_higher_order_numeric(const Exponents& e, int L);  // sorted

} // namespace imploslab
