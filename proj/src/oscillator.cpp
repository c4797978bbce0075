#include "pdmp/oscillator.hpp"

#include <algorithm>
#include <cmath>

#include "pdmp/error.hpp"
#include "pdmp/periodic_dmp.hpp"

namespace pdmp {

OscillatorState OscillatorState::initial(double frequency_guess,
                                         const OscillatorParams& params,
                                         double phase) {
  if (!(frequency_guess > 0.0)) {
    throw DomainError("oscillator frequency guess must be positive");
  }
  if (params.harmonics < 0) {
    throw DomainError("oscillator needs a non-negative harmonic count");
  }
  OscillatorState s;
  s.phase = phase;
  s.frequency = frequency_guess;
  s.cos_coeffs = Eigen::VectorXd::Zero(params.harmonics + 1);
  s.sin_coeffs = Eigen::VectorXd::Zero(params.harmonics + 1);
  return s;
}

double OscillatorState::wrapped_phase() const { return wrap_phase(phase); }

double estimate_signal(const OscillatorState& state) {
  double u = 0.0;
  for (Eigen::Index c = 0; c < state.cos_coeffs.size(); ++c) {
    const double a = static_cast<double>(c) * state.phase;
    u += state.cos_coeffs[c] * std::cos(a) + state.sin_coeffs[c] * std::sin(a);
  }
  return u;
}

OscillatorState step(const OscillatorState& state, double input, double dt,
                     const OscillatorParams& params) {
  if (!(dt > 0.0)) throw DomainError("oscillator step needs dt > 0");
  const double e = input - estimate_signal(state);
  const double coupling = params.coupling * e * std::sin(state.phase);

  OscillatorState next = state;
  next.phase = state.phase + dt * (state.frequency - coupling);
  next.frequency = std::max(state.frequency - dt * coupling,
                            params.min_frequency);
  for (Eigen::Index c = 0; c < state.cos_coeffs.size(); ++c) {
    const double a = static_cast<double>(c) * state.phase;
    next.cos_coeffs[c] += dt * params.learning_rate * std::cos(a) * e;
    next.sin_coeffs[c] += dt * params.learning_rate * std::sin(a) * e;
  }
  return next;
}

double estimate_frequency(std::span<const double> signal, double dt,
                          double frequency_guess, int passes,
                          const OscillatorParams& params) {
  if (signal.empty() || passes < 1) {
    throw DegenerateInput("estimate_frequency needs a signal and >= 1 pass");
  }
  OscillatorState s = OscillatorState::initial(frequency_guess, params);
  double sum = 0.0;
  for (int p = 0; p < passes; ++p) {
    for (double u : signal) {
      s = step(s, u, dt, params);
      if (p == passes - 1) sum += s.frequency;
    }
  }
  return sum / static_cast<double>(signal.size());
}

}  // namespace pdmp
