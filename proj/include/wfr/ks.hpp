#pragma once

#include <cstdint>
#include <vector>

#include "wfr/field.hpp"

namespace wfr {

// Configuration for integrating the Kuramoto-Sivashinsky equation
//   u_t + u u_x + u_xx + u_xxxx = 0
// on a periodic domain [0, length_x) with a stiff exponential Runge-Kutta
// scheme (ETDRK4) in Fourier space; the nonlinear term is evaluated
// pseudospectrally in flux form (u^2/2)_x with 2/3-rule dealiasing.
struct SimulationConfig {
  double length_x = 100.53096491487338;  // 32 * pi
  int n_x = 2048;
  double dt = 0.005;
  double duration = 500.0;      // recorded time span (after the transient)
  double transient_time = 50.0; // integrated but not recorded
  int save_stride = 50;         // steps between saved snapshots
  std::uint64_t seed = 1;
  // Optional explicit initial condition (size n_x).  When empty, a seeded
  // random superposition of the lowest four Fourier modes with O(1)
  // peak-to-peak amplitude is used.
  std::vector<double> initial_profile;
};

// Integrates the KS equation and returns the recorded snapshots as a field
// with delta_x = length_x / n_x and delta_t = dt * save_stride (origin at
// x = 0 and at the end of the transient).  Bit-identical for identical
// configurations.  Throws std::invalid_argument for inconsistent
// configurations and std::runtime_error (naming the step) if the solution
// leaves the attractor and blows up.
Field2D simulate_ks(const SimulationConfig& config);

// Growth rate kappa^2 - kappa^4 of the linearized equation for a
// perturbation of wavenumber kappa: unstable band 0 < kappa < 1, used as an
// integrator test oracle.
double linear_growth_rate(double kappa);

}  // namespace wfr
