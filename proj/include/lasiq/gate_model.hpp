// Copyright 2026 The lasiq authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace lasiq {

/// Two coupled Duffing transmons. Frequencies and couplings in MHz,
/// anharmonicities negative.
struct TransmonPair {
    double f_c_mhz = 5000.0;
    double f_t_mhz = 4900.0;
    double delta_c_mhz = -330.0;
    double delta_t_mhz = -330.0;
    double j_mhz = 1.75;   // exchange coupling, >= 0
    int levels = 4;        // truncation per transmon, >= 3

    void validate() const;
    int dim() const { return levels * levels; }
};

/// Echoed cross-resonance pulse parameters. The drive is a Gaussian-square
/// envelope: flat top with Gaussian rise/fall edges (2 sigma = rise_fall),
/// truncated and rescaled so the envelope starts and ends at zero. With
/// echo enabled the gate is CR(+A, T/2), pi pulse on the control,
/// CR(-A, T/2), pi pulse; the rotary tone on the target flips sign with
/// the CR segment.
struct CRPulseSpec {
    double gate_time_ns = 400.0;
    double rise_fall_ns = 20.0;
    double amplitude_mhz = 0.0;
    double rotary_amplitude_mhz = 0.0;
    bool echo = true;

    void validate() const;
};

struct GateErrorResult {
    double error = 0.0;                 // average-gate-error, dimensionless
    double zz_khz = 0.0;
    double unitarity_defect = 0.0;      // max |U^dag U - I| element
    double calibrated_amplitude_mhz = 0.0;
};

struct ZZResult {
    double zz_khz = 0.0;
    bool flagged = false;  // near-degenerate level identification
};

class CalibrationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Static Hamiltonian in the product basis (index = n_c*levels + n_t),
/// in MHz units:
///   H0 = sum_q [f_q n_q + (delta_q/2) n_q(n_q-1)] + J (a_c^dag a_t + h.c.)
Eigen::MatrixXd build_hamiltonian(const TransmonPair& pair);

/// Static ZZ from exact eigenlevels, zeta = E11 - E10 - E01 + E00, with
/// eigenstates identified by maximum overlap with the bare states. The
/// result is flagged (not silently returned) when that identification is
/// ambiguous, i.e. inside a collision.
ZZResult static_zz(const TransmonPair& pair);

/// Dispersive-limit closed form
///   zeta = 2 J^2 (delta_c + delta_t) / ((Delta + delta_c)(Delta - delta_t))
/// in kHz, valid for |Delta +- delta| >> J. Throws within 1 MHz of a pole.
double static_zz_perturbative(const TransmonPair& pair);

/// Integrates i dU/dt = H(t) U with an adaptive Dormand-Prince 5(4)
/// stepper in the frame rotating at the drive frequency (the dressed
/// target frequency), then returns the propagator in the interaction
/// frame of H0. A zero-amplitude pulse therefore returns the identity.
Eigen::MatrixXcd propagate_unitary(const TransmonPair& pair, const CRPulseSpec& spec,
                                   double solver_tol = 1e-8);

/// Scalar search over the CR drive amplitude such that the target qubit's
/// conditional rotation equals pi/2 about ZX for the echoed sequence.
/// Throws CalibrationError if no amplitude within bounds achieves it
/// (e.g. J = 0, or deep inside a collision region).
CRPulseSpec calibrate_cr_echo(const TransmonPair& pair, double gate_time_ns,
                              double solver_tol = 1e-8);

/// 1-D minimization of the gate error over the rotary amplitude. The
/// returned spec never scores worse than the input (zero rotary is always
/// a candidate).
CRPulseSpec optimize_rotary(const TransmonPair& pair, const CRPulseSpec& spec,
                            double solver_tol = 1e-8);

/// Projects the propagated operator onto the dressed computational
/// subspace, optimizes away the single-qubit Z-phase freedom on both
/// qubits (pre and post), and scores against U_target = exp(-i pi/4 ZX):
///   E = 1 - (|Tr(U_target^dag U_proj)|^2 + d) / (d(d+1)),  d = 4.
/// Leakage reduces |Tr| and increases E.
double gate_error(const Eigen::MatrixXcd& u, const TransmonPair& pair);

/// Full single-point pipeline: calibrate, optionally rotary-optimize,
/// propagate and score.
GateErrorResult simulate_gate(const TransmonPair& pair, double gate_time_ns,
                              bool optimize_rotary_pulse = true,
                              double solver_tol = 1e-8);

struct SweepPoint {
    double detuning_mhz = 0.0;
    double error = 0.0;       // NaN when the point failed
    double zz_khz = 0.0;
    double amplitude_mhz = 0.0;
    double rotary_amplitude_mhz = 0.0;
    std::string status;       // "ok", "zz_flagged", "calibration_failed"
};

/// Sweeps the control frequency over f_t + detuning for each grid value;
/// per-point calibration failures are recorded in the curve and the sweep
/// continues. Deterministic; points are independent.
std::vector<SweepPoint> error_vs_detuning_sweep(const TransmonPair& base,
                                                const std::vector<double>& detunings_mhz,
                                                double gate_time_ns, std::uint64_t seed,
                                                double solver_tol = 1e-8);

}  // namespace lasiq
