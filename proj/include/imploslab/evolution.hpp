// Modulated radially symmetric self-similar evolution of (V, Q, K): stretched
// cell-centered grid with parity ghosts at the origin, third-order upwind
// transport, SSP-RK3 stepping with the modulation recomputed every stage from
// the origin Taylor record, Riemann-variable diagnostics, and decay-rate fits.
#pragma once

#include <string>
#include <vector>

#include "imploslab/spectra.hpp"
#include "imploslab/tail.hpp"

namespace imploslab {

// One Gaussian bump A exp(-((R-c)/w)^2), automatically symmetrized in R^2 by
// adding its mirror image A exp(-((R+c)/w)^2).
struct BumpSpec {
    real amplitude = 0;
    real center = 0;
    real width = 1;
};

real bump_eval(const BumpSpec& b, real R);
// Taylor coefficient of R^{2m} at R = 0 of the symmetrized bump.
real bump_even_coefficient(const BumpSpec& b, int m);

// Per-field bump sums for (V, Q, K).
struct PerturbationSpec {
    std::vector<BumpSpec> v, q, k;
};

struct EvolutionGrid {
    int cells = 0;
    real r_out = 0;
    real stretch = 0;
    std::vector<real> center;  // ascending, no cell at R = 0

    // Upwind stencil for R d/dR at each center: nodes {i-2, i-1, i, i+1}
    // (mirrored across R = 0 below the first cells, fully one-sided at the
    // outer edge), weights already multiplied by R_i.
    struct Stencil {
        int idx[4];
        real w[4];
    };
    std::vector<Stencil> stencil;
};

// Cell edges R_out sinh(stretch j/M)/sinh(stretch); centers are midpoints.
EvolutionGrid make_grid(int cells, real r_out, real stretch);

struct ModulationState {
    real c_r = 0, c_u = 0, c_b = 0;
};

// Deviation Taylor data at the origin, from an even least-squares fit in R^2
// over the innermost cells with the stored profile's fit subtracted.
struct TaylorRecord {
    real v0 = 0, q0 = 0, k0 = 0;  // value deviations at R = 0
    real vN = 0, qN = 0, kN = 0;  // R^{2N} coefficient deviations
    real cond = 0;                // worst fit condition number
    real parity_residual = 0;     // worst pointwise misfit of the even basis
};

struct EvolutionState {
    real tau = 0;
    std::vector<real> V, Q, K;
    TaylorRecord taylor;
    ModulationState modulation;
};

struct RiemannDiagnostics {
    std::vector<real> W, Z, A;  // ring variables on the grid
    real weighted_sup = 0;      // sup <R>^theta |(W,Z,A) - baseline|
    real min_speed_minus = 0;   // min over grid of c_r + V - alpha Q
    real min_speed_mid = 0;
    real min_speed_plus = 0;
    real entropy_roundtrip = 0;  // trapezoid reconstruction of K from A
};

struct SeriesSample {
    real tau = 0;
    TaylorRecord taylor;
    ModulationState modulation;
    real sup_dev_V = 0, sup_dev_Q = 0, sup_dev_K = 0;
    real weighted_Y = 0;
    real min_speed = 0;
};

struct DecayFit {
    std::string name;
    real rate = 0;        // fitted exponential decay rate (positive = decay)
    real peak = 0;        // max |y| over the series
    real floor = 0;       // flatline level at the end of the run
    int points = 0;       // samples used in the fit
    bool monotone_tail = true;
    bool at_floor = false;  // series never rose above the floor; no fit
};

struct EvolutionResult {
    std::vector<SeriesSample> series;
    std::vector<DecayFit> fits;
    EvolutionState final_state;
    real lambda_floor = 0;  // analytic decay-rate lower bound
    real min_speed_overall = 0;
    real max_parity_residual = 0;
    long long steps = 0;
};

struct RunConfig {
    GasParams params;
    int cells = 512;
    real r_out = 50;
    real stretch = 4;
    real cfl = 0.5L;
    real tau_end = 120;
    real record_every = 0.025L;
    real table_r_max = 200;
    PerturbationSpec perturbation;
    std::string out_dir;  // empty: no files written
};

RunConfig load_run_config(const std::string& path);
void save_run_config(const RunConfig& cfg, const std::string& path);

class Simulator {
  public:
    Simulator(const Exponents& e, const ProfileTable& table, const EntropyProfile& entropy,
              const EvolutionGrid& grid);

    // Throws std::invalid_argument when N >= 2 and the perturbation has a
    // nonzero even Taylor coefficient of order 2..2N-2, naming the order.
    EvolutionState init_state(const PerturbationSpec& spec) const;

    TaylorRecord taylor_record(const std::vector<real>& V, const std::vector<real>& Q,
                               const std::vector<real>& K) const;
    ModulationState modulation_from(const TaylorRecord& t) const;

    real cfl_dtau(const EvolutionState& s, real cfl) const;
    // One SSP-RK3 step. Throws CertificateError when the outgoing regime is
    // lost (c_r + V - alpha Q <= 0 somewhere) or the state stops being finite.
    void step(EvolutionState& s, real dtau) const;

    RiemannDiagnostics riemann_diagnostics(const EvolutionState& s) const;

    EvolutionResult run(const RunConfig& cfg) const;

    const EvolutionGrid& grid() const { return grid_; }
    // Even-fit coefficients of the discretized profile itself (V, Q, K order),
    // aligned with powers 0, 2, ..., 2N+2.
    const std::array<std::vector<real>, 3>& baseline_fit() const { return base_fit_; }
    const std::vector<real>& baseline_V() const { return baseV_; }
    const std::vector<real>& baseline_Q() const { return baseQ_; }
    const std::vector<real>& baseline_K() const { return baseK_; }
    const Exponents& exponents() const { return exp_; }

  private:
    void apply_stencil(const std::vector<real>& f, std::vector<real>& out) const;
    void rhs(const std::vector<real>& V, const std::vector<real>& Q, const std::vector<real>& K,
             const ModulationState& mod, std::vector<real>& fV, std::vector<real>& fQ,
             std::vector<real>& fK) const;
    void ring_variables(const std::vector<real>& V, const std::vector<real>& Q,
                        const std::vector<real>& K, std::vector<real>& W, std::vector<real>& Z,
                        std::vector<real>& A) const;
    std::array<PolyFit, 3> origin_fits(const std::vector<real>& V, const std::vector<real>& Q,
                                       const std::vector<real>& K) const;

    Exponents exp_;
    EvolutionGrid grid_;
    real theta_ = 0;  // weight exponent, min{1, 1/c_r}/2
    std::vector<int> fit_powers_;
    std::vector<real> fit_x_;
    std::array<std::vector<real>, 3> base_fit_;  // baseline fit coefficients
    std::vector<real> baseV_, baseQ_, baseK_;
    std::vector<real> baseW_, baseZ_, baseA_;
    Matrix3r P_inv_;  // modulation projection, (q, v, k) ordering

    // scratch for step(); a Simulator instance is single-threaded
    mutable std::vector<real> sV_, sQ_, sK_, fV_, fQ_, fK_, u1V_, u1Q_, u1K_;
};

// Build the full pipeline for cfg.params and run; writes series/fields CSV
// into cfg.out_dir when set.
EvolutionResult run_evolution(const RunConfig& cfg);

void write_series_csv(const EvolutionResult& r, const std::string& path);
void write_fields_csv(const Simulator& sim, const EvolutionState& s, const std::string& path);

}  // namespace imploslab
