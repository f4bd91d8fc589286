#pragma once

// Unit conventions used throughout:
//   - energies are stored as frequency equivalents E/h in GHz
//   - inverse temperature is stored as beta_tilde = h*beta in ns
//     (so beta_tilde * E/h is dimensionless: 1 ns * 1 GHz = 1)
//   - fluxes are dimensionless, phi = 2*pi*Phi/Phi_0
//   - charges are dimensionless, q = Q/(2e)
// Capacitances enter in fF, inductances in nH.

namespace fluxsim::units {

inline constexpr double elementary_charge_c = 1.602176634e-19;  // C (exact SI)
inline constexpr double planck_h_js = 6.62607015e-34;           // J*s (exact SI)

// E_C/h [GHz] = charging_prefactor_ghz_ff * (C [fF])^{-1}, elementwise on the
// inverse capacitance matrix.  Equals e^2/(2h) expressed in GHz*fF.
inline constexpr double charging_prefactor_ghz_ff =
    elementary_charge_c * elementary_charge_c / (2.0 * planck_h_js) * 1.0e6;

// E_L/h [GHz] = inductive_prefactor_ghz_nh * (L [nH])^{-1}, elementwise on the
// inverse inductance matrix.  Equals Phi_0^2/(4 pi^2 h) in GHz*nH.
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double inductive_prefactor_ghz_nh =
    planck_h_js / (16.0 * pi * pi * elementary_charge_c * elementary_charge_c);

}  // namespace fluxsim::units
