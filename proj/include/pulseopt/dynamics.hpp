// dynamics.hpp — time-dependent Schrödinger integration in the lab frame
#pragma once

#include "pulseopt/device_model.hpp"
#include "pulseopt/pulse_schedule.hpp"

#include <span>
#include <vector>

namespace pulseopt {

struct StateVector {
    ComplexVector amplitudes;

    Eigen::Index dim() const { return amplitudes.size(); }

    // |0...0>
    static StateVector ground(Eigen::Index dim);
    // rescales to unit norm; throws NormalizationError on a (near-)zero vector
    static StateVector normalized(ComplexVector v);
    // requires | ||v|| - 1 | <= 1e-9
    static StateVector checked(ComplexVector v);
};

struct SolverConfig {
    double rtol{1e-8};
    double atol{1e-10};
    double max_step{0.0};     // ns; <= 0 selects dt/4
    double frame_freq{-1.0};  // rad/ns; < 0 selects the device mean omega, 0 = plain lab frame
    long max_steps{200000000};
    std::string method{"dopri5"};
};

struct EvolveResult {
    StateVector state;  // lab frame, not renormalized
    double norm_drift{0.0};
    long steps{0};
    long rhs_evaluations{0};
    double wall_seconds{0.0};
};

// Lab-frame H(t) = H_drift + sum over active segments of
// Omega_{d, drive_site} * drive_signal(seg, t) * (b^+ + b)_{drive_site}.
OperatorMatrix hamiltonian_at(const DeviceModel& device, const PulseSchedule& schedule, double t);

// Integrates i d/dt psi = H(t) psi from t = 0 to the schedule end with an
// embedded Dormand-Prince 5(4) pair under PI step control. Internally the
// state is propagated in a frame rotating at frame_freq per excitation (an
// exact change of variables; the counter-rotating terms are kept) and mapped
// back to the lab frame at the end. Norm is never renormalized; the drift
// | ||psi(T)|| - 1 | is reported. Throws StiffnessError on step underflow.
EvolveResult evolve(const DeviceModel& device, const PulseSchedule& schedule,
                    const StateVector& psi0, const SolverConfig& cfg = {});

// Piecewise-constant complex envelope for the single-qubit RWA model.
struct RwaPiece {
    double start{0.0};
    double duration{0.0};
    Complex mu{0.0, 0.0};
};

// As evolve, on H = (Delta/2) sigma_z + (Omega_d/2)(Re mu sigma_x + Im mu sigma_y).
EvolveResult evolve_rwa(const RwaParams& p, std::span<const RwaPiece> mu, double t_final,
                        const StateVector& psi0, const SolverConfig& cfg = {});

struct ProjectionResult {
    StateVector state;  // 2^sites amplitudes, renormalized
    double leakage{0.0};
};

// Keeps amplitudes whose every site occupation is 0 or 1 and renormalizes.
// Relative phases of kept amplitudes are preserved exactly. Throws
// DegenerateProjectionError when the kept weight is below 1e-6.
ProjectionResult project_to_qubits(const StateVector& psi, int levels, int sites);

}  // namespace pulseopt
