#include "bwt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <unsupported/Eigen/FFT>

namespace bwt {

namespace {

void check_uniform(const ForceHistory& h) {
  for (std::size_t k = 1; k < h.samples.size(); ++k) {
    const Scalar gap = h.samples[k].t - h.samples[k - 1].t;
    if (!(gap > 0.0) || std::abs(gap - h.dt_sample) > 1e-12 * std::max<Scalar>(1.0, std::abs(h.samples[k].t)))
      fail(ErrorCode::sampling, "force history is not uniformly sampled");
  }
}

Scalar mean_of(const std::vector<Scalar>& x) {
  Scalar m = 0.0;
  for (Scalar v : x) m += v;
  return x.empty() ? 0.0 : m / Scalar(x.size());
}

}  // namespace

ForceHistory trim_transient(const ForceHistory& history, Scalar fraction) {
  if (history.samples.size() < 2)
    fail(ErrorCode::insufficient_data, "force history needs at least 2 samples");
  if (!(fraction >= 0.0 && fraction < 1.0))
    fail(ErrorCode::config, "transient fraction must lie in [0, 1)");
  const std::size_t n = history.samples.size();
  const std::size_t drop = std::size_t(std::ceil(fraction * Scalar(n)));
  if (n - drop < 16)
    fail(ErrorCode::insufficient_data,
         "fewer than 16 samples remain after transient trimming");
  ForceHistory out;
  out.dt_sample = history.dt_sample;
  out.samples.assign(history.samples.begin() + drop, history.samples.end());
  return out;
}

Scalar dominant_frequency(const std::vector<Scalar>& series, Scalar dt_sample) {
  const std::size_t n = series.size();
  if (n < 16)
    fail(ErrorCode::insufficient_data, "frequency estimate needs >= 16 samples");
  if (!(dt_sample > 0.0)) fail(ErrorCode::sampling, "sample spacing must be positive");

  Scalar rms = 0.0;
  for (Scalar v : series) rms += v * v;
  rms = std::sqrt(rms / Scalar(n));
  if (rms == 0.0) return 0.0;

  const Scalar mean = mean_of(series);
  std::vector<Scalar> windowed(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Scalar w = 0.5 * (1.0 - std::cos(2.0 * M_PI * Scalar(k) / Scalar(n - 1)));
    windowed[k] = (series[k] - mean) * w;
  }

  Eigen::FFT<Scalar> fft;
  std::vector<std::complex<Scalar>> spectrum;
  fft.fwd(spectrum, windowed);

  const std::size_t half = n / 2;
  std::size_t peak = 1;
  Scalar peak_mag = 0.0;
  for (std::size_t k = 1; k <= half; ++k) {
    const Scalar m = std::abs(spectrum[k]);
    if (m > peak_mag) {
      peak_mag = m;
      peak = k;
    }
  }
  if (peak_mag / Scalar(n) <= 1e-9 * rms) return 0.0;

  Scalar delta = 0.0;
  if (peak > 1 && peak < half) {
    const Scalar a = std::abs(spectrum[peak - 1]);
    const Scalar b = peak_mag;
    const Scalar c = std::abs(spectrum[peak + 1]);
    const Scalar denom = a - 2.0 * b + c;
    if (denom != 0.0) delta = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
  }
  return (Scalar(peak) + delta) / (Scalar(n) * dt_sample);
}

Scalar dominant_frequency(const ForceHistory& history) {
  check_uniform(history);
  return dominant_frequency(lift_series(history), history.dt_sample);
}

int zero_crossings(const std::vector<Scalar>& series) {
  const Scalar mean = mean_of(series);
  int crossings = 0;
  int last_sign = 0;
  for (Scalar v : series) {
    const Scalar d = v - mean;
    const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
    if (sign != 0) {
      if (last_sign != 0 && sign != last_sign) ++crossings;
      last_sign = sign;
    }
  }
  return crossings;
}

Scalar zero_crossing_frequency(const std::vector<Scalar>& series, Scalar dt_sample) {
  if (series.size() < 2 || !(dt_sample > 0.0))
    fail(ErrorCode::insufficient_data, "zero-crossing estimate needs >= 2 samples");
  const Scalar span = Scalar(series.size() - 1) * dt_sample;
  return Scalar(zero_crossings(series)) / (2.0 * span);
}

std::vector<Scalar> lift_series(const ForceHistory& history) {
  std::vector<Scalar> out(history.samples.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = history.samples[k].fy;
  return out;
}

std::vector<Scalar> drag_series(const ForceHistory& history) {
  std::vector<Scalar> out(history.samples.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = history.samples[k].fx;
  return out;
}

Scalar drag_coefficient(const ForceHistory& trimmed, Scalar U, Scalar D, Scalar rho) {
  if (!(U > 0.0) || !(D > 0.0))
    fail(ErrorCode::normalization, "drag coefficient needs positive U and D");
  if (trimmed.samples.empty())
    fail(ErrorCode::insufficient_data, "empty force history");
  return mean_of(drag_series(trimmed)) / (0.5 * rho * U * U * D);
}

Scalar lift_coefficient(const ForceHistory& trimmed, Scalar U, Scalar D, Scalar rho) {
  if (!(U > 0.0) || !(D > 0.0))
    fail(ErrorCode::normalization, "lift coefficient needs positive U and D");
  if (trimmed.samples.empty())
    fail(ErrorCode::insufficient_data, "empty force history");
  const std::vector<Scalar> fy = lift_series(trimmed);
  const Scalar mean = mean_of(fy);
  Scalar var = 0.0;
  for (Scalar v : fy) var += (v - mean) * (v - mean);
  var /= Scalar(fy.size());
  return std::sqrt(2.0 * var) / (0.5 * rho * U * U * D);
}

Scalar drift_coefficient(Scalar cl, Scalar cd) {
  if (!(cd > 0.0))
    fail(ErrorCode::division_domain, "drift coefficient needs cd > 0");
  return cl / cd;
}

Scalar strouhal(Scalar frequency_hz, Scalar D, Scalar U) {
  if (!(U > 0.0) || !(D > 0.0))
    fail(ErrorCode::normalization, "Strouhal number needs positive U and D");
  return frequency_hz * D / U;
}

CoefficientSummary summarize(const ForceHistory& history, const std::string& design,
                             Scalar U, Scalar D, Scalar nu, Scalar rho,
                             Scalar transient_fraction) {
  if (history.samples.empty())
    fail(ErrorCode::insufficient_data, "empty force history");
  check_uniform(history);
  const ForceHistory trimmed = trim_transient(history, transient_fraction);

  CoefficientSummary s;
  s.design = design;
  s.U = U;
  s.transient_fraction = transient_fraction;
  s.frequency_hz = dominant_frequency(lift_series(trimmed), trimmed.dt_sample);
  s.cd = drag_coefficient(trimmed, U, D, rho);
  s.cl = lift_coefficient(trimmed, U, D, rho);
  s.drift = drift_coefficient(s.cl, s.cd);
  s.strouhal = strouhal(s.frequency_hz, D, U);
  if (!(nu > 0.0)) fail(ErrorCode::normalization, "Reynolds number needs nu > 0");
  s.reynolds = U * D / nu;
  return s;
}

}  // namespace bwt
