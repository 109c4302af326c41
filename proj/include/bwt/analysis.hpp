// Turns a force history into the reported quantities: shedding frequency,
// lift/drag coefficients, drift ratio, Strouhal and Reynolds numbers.
#pragma once

#include <string>
#include <vector>

#include "bwt/common.hpp"
#include "bwt/solver.hpp"

namespace bwt {

struct CoefficientSummary {
  std::string design;
  Scalar U = 0.0;
  Scalar frequency_hz = 0.0;
  Scalar cl = 0.0;       // sqrt(2) * RMS lift fluctuation / (0.5 rho U^2 D)
  Scalar cd = 0.0;       // mean drag / (0.5 rho U^2 D)
  Scalar drift = 0.0;    // cl / cd, recomputed from cl and cd
  Scalar strouhal = 0.0; // f D / U
  Scalar reynolds = 0.0; // U D / nu
  Scalar transient_fraction = 0.0;
};

// Drops the first ceil(fraction * N) samples. Errors if fewer than 16 remain.
ForceHistory trim_transient(const ForceHistory& history, Scalar fraction);

// Mean-removed, Hann-windowed DFT peak refined by parabolic interpolation.
// Returns 0 for signals with no significant spectral content.
Scalar dominant_frequency(const std::vector<Scalar>& series, Scalar dt_sample);
Scalar dominant_frequency(const ForceHistory& history);  // lift component

// Independent frequency estimate: sign changes of the mean-removed series
// over twice the span.
int zero_crossings(const std::vector<Scalar>& series);
Scalar zero_crossing_frequency(const std::vector<Scalar>& series, Scalar dt_sample);

Scalar drag_coefficient(const ForceHistory& trimmed, Scalar U, Scalar D, Scalar rho);
Scalar lift_coefficient(const ForceHistory& trimmed, Scalar U, Scalar D, Scalar rho);
Scalar drift_coefficient(Scalar cl, Scalar cd);
Scalar strouhal(Scalar frequency_hz, Scalar D, Scalar U);

std::vector<Scalar> lift_series(const ForceHistory& history);
std::vector<Scalar> drag_series(const ForceHistory& history);

CoefficientSummary summarize(const ForceHistory& history, const std::string& design,
                             Scalar U, Scalar D, Scalar nu, Scalar rho,
                             Scalar transient_fraction);

}  // namespace bwt
