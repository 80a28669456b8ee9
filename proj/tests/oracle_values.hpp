// Reference values computed by tests/oracles/compute_oracles.py (scipy
// quadrature and numpy Monte Carlo, independent of this library).

#pragma once

namespace relaynet::oracle {

// integral of ln(1 + snr x) e^{-x} dx over [0, inf) = e^{1/snr} E1(1/snr)
inline constexpr double kSisoSnr1 = 0.596347362323194;
inline constexpr double kSisoSnr10 = 2.014642544708451;

// 2x2 at snr 1 by quadrature over the unordered Wishart eigenvalue density
// (1 + (1 - x)^2) e^{-x}; a 2e7-draw Monte Carlo gives 1.789050.
inline constexpr double kMimo2x2Snr1 = 1.789042086969582;

// Exact per-cut NNC objective, K=2, D=8, snr=10, maximized over q on a step
// 0.05 grid in (0, 40] with 4e5 shared draws.
inline constexpr double kOptimalQ_K2_D8_Snr10 = 17.45;
inline constexpr double kOptimalRate_K2_D8_Snr10 = 0.451611;
inline constexpr double kRateAtQ1_K2_D8_Snr10 = -5.857379;
inline constexpr double kRateAtQ7_K2_D8_Snr10 = 0.155769;

}  // namespace relaynet::oracle
