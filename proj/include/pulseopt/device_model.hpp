// device_model.hpp — drift and control Hamiltonians for 1-3 coupled transmons
//
// Units: angular frequencies in rad/ns, time in ns, hbar = 1. Site 0 is the
// least-significant tensor factor: basis label |q_{n-1} ... q_1 q_0> maps to
// index sum_s q_s * levels^s.
#pragma once

#include "pulseopt/common.hpp"

#include <vector>

namespace pulseopt {

struct TransmonParams {
    double omega{0.0};           // |0> -> |1> transition frequency (rad/ns)
    double alpha{0.0};           // anharmonicity (rad/ns, negative)
    double drive_strength{0.0};  // drive prefactor Omega_d (rad/ns)

    void validate() const;
};

struct Coupling {
    int site_a{0};
    int site_b{1};
    double strength{0.0};  // exchange coupling J (rad/ns)
};

struct DeviceModel {
    std::vector<TransmonParams> transmons;
    std::vector<Coupling> couplings;
    int levels{2};  // per-site truncation, 2 or 3

    int sites() const { return static_cast<int>(transmons.size()); }
    Eigen::Index dim() const;
    void validate() const;
};

// Single-qubit rotating-frame model used for analytic tests.
struct RwaParams {
    double detuning{0.0};        // Delta = omega - omega_d (rad/ns)
    double drive_strength{0.0};  // Omega_d (rad/ns)
};

// Annihilation operator b with b[i, i+1] = sqrt(i+1). Throws
// InvalidTruncationError for levels < 2.
OperatorMatrix ladder_op(int levels);

// b^dagger b
OperatorMatrix number_op(int levels);

// Embeds a single-site operator into the n-site tensor space (site 0 least
// significant).
OperatorMatrix embed_site_op(const OperatorMatrix& op, int site, int sites, int levels);

// H_sys = sum_i (omega_i n_i + alpha_i/2 b_i^+ b_i^+ b_i b_i)
//       + sum_{ab} J_ab (b_a b_b^+ + b_a^+ b_b)
OperatorMatrix build_drift(const DeviceModel& device);

// (b_site^+ + b_site) embedded in the full space. The Omega_d prefactor and
// the time-dependent carrier are applied by the dynamics module.
OperatorMatrix build_control_op(const DeviceModel& device, int site);

// (Delta/2) sigma_z + (Omega_d/2)(mu_re sigma_x + mu_im sigma_y)
OperatorMatrix rwa_hamiltonian(const RwaParams& p, double mu_re, double mu_im);

}  // namespace pulseopt
