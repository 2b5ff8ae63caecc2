// Reference values for the test suite, computed with an independent
// extended-precision (50-digit) implementation of the same formulas and
// truncated to long-double range. Exact rationals are spelled as fractions.
#pragma once

#include <cmath>

#include "imploslab/util.hpp"

namespace refs {

using imploslab::real;

// relative error against a reference magnitude (absolute when |b| <= 1)
inline real rel(real a, real b) {
    const real scale = std::max<real>(std::fabs(b), 1e-30L);
    return std::fabs(a - b) / scale;
}

// d = 3, gamma = 5/3, N = 1
namespace r353 {
inline constexpr real c_r = 1.489528507253159769556076L;
inline constexpr real kappa = 0.9895285072531597695560765L;
inline constexpr real q0 = 1.369306393762915283642424L;
inline constexpr real c_r_inf = 0.9564354645876384278808082L;
inline constexpr real lambda_lower = 1.0L / 12.0L;

// origin recursion pairs (q_n, v_n), n = 1..8
inline constexpr real qv[8][2] = {
    {-1.845062416057770163318266L, 1.0L},
    {7.961535377359440801412295L, -5.01765865528470129560152L},
    {-47.05073565321368777852411L, 32.29663063577691689831297L},
    {323.107909770195617571997L, -234.6651735901946596026868L},
    {-2423.321996567384654698008L, 1832.953068352412792768616L},
    {19259.56229674857478955144L, -15024.23909605750161760733L},
    {-159470.4757227950938373968L, 127470.9706564573840869047L},
    {1361305.649885806247336363L, -1109901.65271370287415242L}};
inline constexpr real k1 = -0.50529115263991137169L;
inline constexpr real k2 = 1.523008411677387432L;
inline constexpr real h2 = 1.6506679861454725383L;
inline constexpr real det_M2 = 7.091620968647645015151881L;

// profile (V, Q, H) samples
inline constexpr real at_R025[3] = {-4.516351442537907e-01L, 1.276981300975721e+00L,
                                    9.734104889801899e-01L};
inline constexpr real at_R1[3] = {-2.783748025295830e-01L, 8.899229061716325e-01L,
                                  8.337855545589574e-01L};
inline constexpr real at_R10[3] = {-6.681636749988994e-02L, 2.565749418124648e-01L,
                                   4.598733641996687e-01L};
inline constexpr real at_R1e4[3] = {-6.488832650137693e-04L, 2.677664248263266e-03L,
                                    4.733687906225451e-02L};

// far-field coefficients
inline constexpr real v1 = -3.144567953151e-01L;
inline constexpr real q1 = 1.298616935826e+00L;
inline constexpr real h1 = 1.042542171186e+00L;
inline constexpr real v2 = -6.8222965796e-03L;
inline constexpr real q2 = -4.5118031764e-01L;
inline constexpr real v1_over_q1 = -0.242147462150L;
inline constexpr real beta = 0.0233159L;

// ratio-bound quartic coefficients
inline constexpr real mu0 = 8.098821268132899L;
inline constexpr real mu1 = 6.694152038683519L;
inline constexpr real mu2 = 7.0L / 6.0L;

// kinetic margins -3 c_b + (gamma_kin + 3) c_u + 1
inline constexpr real kin_margin_1 = -0.01047149274684L;
inline constexpr real kin_margin_2 = 0.47905701450632L;

// radial blocks E0 + 2L E1 (eigenvalues, ascending)
inline constexpr real radial_L2[3] = {1.042638081589988842787229L,
                                      3.958114029012639078224306L,
                                      6.873589976435289313661382L};
inline constexpr real radial_L3[3] = {2.096598169585L, 5.937171043519L, 9.777743917453L};

// spectra spot values
inline constexpr real H3_1_eigs[3] = {-3.95811403L, -1.97905701L, 0.0L};
inline constexpr real H2_1_eigs[2] = {-1.85555391L, -0.1235031L};
inline constexpr real H10_pos = 0.3885688L;  // positive eigenvalue of H_{1,0}
inline constexpr real gersh_margin = 1553.50L;
}  // namespace r353

// d = 2, gamma = 2, N = 1 (kappa = 1, q0 = 1, c_r = 3/2 closed form)
namespace r221 {
inline constexpr real q2 = 409.0L / 56.0L;
inline constexpr real v2 = -38.0L / 7.0L;
inline constexpr real q3 = -779.0L / 16.0L;
inline constexpr real v3 = 269.0L / 7.0L;
inline constexpr real v4 = -196866.0L / 637.0L;
inline constexpr real at_R1[3] = {-2.859905722030727e-01L, 6.384466110781675e-01L,
                                  8.387215616033652e-01L};
inline constexpr real v1 = -3.508089350362e-01L;
inline constexpr real q1 = 9.266548682175e-01L;
inline constexpr real h1 = 1.065324268663e+00L;
inline constexpr real H2_1_eigs[2] = {-1.8660254L, -0.1339746L};
inline constexpr real H10_pos = 0.42505312L;
}  // namespace r221

// d = 3, gamma = 5/3, N = 2
namespace r353n2 {
inline constexpr real c_r = 1.228868986855662558859269L;
inline constexpr real qN = -1.565560727712873725399044L;
inline constexpr real q4 = 10.21267771342052809972295L;
inline constexpr real v4 = -7.522398724780240572863599L;
inline constexpr real k2 = -0.34299717028501767476L;
inline constexpr real at_R1[3] = {-3.203392799425001e-01L, 1.033258609238810e+00L,
                                  9.011611800939310e-01L};
inline constexpr real v1 = -2.916769752141e-01L;
inline constexpr real q1 = 1.450068975977e+00L;
inline constexpr real h1 = 1.122673223484e+00L;
inline constexpr real outgoing_speed_origin = 0.2724335222680241309785L;
}  // namespace r353n2

// d = 3, gamma = 7/5, N = 1 (c_r = 25/16 closed form)
namespace r375 {
inline constexpr real q0 = 2.025231468252456322176865L;
inline constexpr real qN = -2.160246899469286743655322L;
inline constexpr real kN = -8.0L / 15.0L;
inline constexpr real q2 = 7.864551031111374347916189L;
inline constexpr real v2 = -4.289855072463768115942029L;
inline constexpr real at_R1[3] = {-3.761936828564419e-01L, 1.396482989620315e+00L,
                                  8.163545361142840e-01L};
inline constexpr real tail_v1 = -4.423837485399e-01L;
inline constexpr real tail_q1 = 2.096593792399e+00L;
inline constexpr real tail_h1 = 1.089258259294e+00L;
inline constexpr real beta = 0.0137143L;
inline constexpr real H10_pos = 0.4106451L;
inline constexpr real H2_1_pos = 0.03529125L;
}  // namespace r375

// d = 2, gamma = 5/3, N = 1
namespace r253 {
inline constexpr real c_r = 1.545823643358445859232316L;
inline constexpr real q2 = 6.909354215258891015132857L;
inline constexpr real v2 = -4.712853761111929841196376L;
inline constexpr real at_R1[3] = {-3.631544047295198e-01L, 8.990799378183676e-01L,
                                  8.224468840188098e-01L};
inline constexpr real tail_v1 = -4.575602445767e-01L;
inline constexpr real tail_q1 = 1.335775494605e+00L;
inline constexpr real tail_h1 = 1.100343513084e+00L;
inline constexpr real beta = 0.0046729L;
inline constexpr real H2_1_pos = 0.00857673L;
}  // namespace r253

// d = 1, gamma = 2, N = 1
namespace r121 {
inline constexpr real c_r = 1.603912563829966531935087L;
inline constexpr real kappa = 0.9372458971632998652684199L;
inline constexpr real q2 = 5.775232693731738764245375L;
inline constexpr real v2 = -4.846569883347983855379265L;
inline constexpr real at_R1[3] = {-4.277199870994572e-01L, 6.262884372973598e-01L,
                                  8.211869996239958e-01L};
inline constexpr real tail_v1 = -5.911420640377e-01L;
inline constexpr real tail_q1 = 9.058725856648e-01L;
inline constexpr real tail_h1 = 1.164674675940e+00L;
inline constexpr real beta = -0.0421749L;
inline constexpr real outgoing_speed_origin = 0.4658413763722681823345L;
inline constexpr real H1_1_eigs[3] = {-2.02888497L, -0.9372459L, 0.48772651L};
inline constexpr real gersh_margin = 149.93L;
}  // namespace r121

// d = 1, gamma = 3, N = 1
namespace r131 {
inline constexpr real c_r = 1.589724735885168388059245L;
inline constexpr real at_R1[3] = {-3.005717731377927e-01L, 3.795782154726094e-01L,
                                  8.563210971873516e-01L};
inline constexpr real tail_v1 = -4.000264798474e-01L;
inline constexpr real tail_q1 = 5.258521705972e-01L;
inline constexpr real tail_h1 = 1.119248651693e+00L;
inline constexpr real beta = -0.1424669L;
}  // namespace r131

}  // namespace refs
