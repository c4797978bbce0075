#pragma once

#include <Eigen/Core>
#include <span>

namespace pdmp {

/// Adaptive frequency oscillator with a Fourier-series model of its input:
///   phi'     = Omega - K e sin(phi)
///   Omega'   = -K e sin(phi)
///   alpha_c' = eta cos(c phi) e
///   beta_c'  = eta sin(c phi) e,       e = U - U_hat, c = 0..M
struct OscillatorParams {
  double coupling = 10.0;      // K
  int harmonics = 10;          // M
  double learning_rate = 2.0;  // eta
  /// Frequency floor applied after each step.
  double min_frequency = 1e-6;
};

struct OscillatorState {
  /// Unwrapped phase (rad).
  double phase = 0.0;
  double frequency = 1.0;  // rad/s
  Eigen::VectorXd cos_coeffs;  // alpha_0..alpha_M
  Eigen::VectorXd sin_coeffs;  // beta_0..beta_M

  /// Zero Fourier coefficients. The frequency guess should be within a
  /// factor of ~2 of the true input frequency; outside that the oscillator
  /// can lock onto a harmonic.
  static OscillatorState initial(double frequency_guess,
                                 const OscillatorParams& params = {},
                                 double phase = 0.0);

  /// Phase wrapped to [0, 2pi).
  double wrapped_phase() const;
};

/// U_hat = sum_c alpha_c cos(c phi) + beta_c sin(c phi).
double estimate_signal(const OscillatorState& state);

/// One explicit Euler step of all four equations; the error uses the
/// pre-step state.
OscillatorState step(const OscillatorState& state, double input, double dt,
                     const OscillatorParams& params = {});

/// Runs the oscillator over `signal` (uniform step dt) repeated `passes`
/// times and returns the mean frequency over the final pass.
double estimate_frequency(std::span<const double> signal, double dt,
                          double frequency_guess, int passes = 20,
                          const OscillatorParams& params = {});

}  // namespace pdmp
