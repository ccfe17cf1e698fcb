// metrics.hpp — entanglement and distance measures on 2- and 3-qubit states
#pragma once

#include "pulseopt/dynamics.hpp"

#include <string>
#include <vector>

namespace pulseopt {

struct DensityMatrix {
    OperatorMatrix entries;

    Eigen::Index dim() const { return entries.rows(); }
    // Hermitian within 1e-10, unit trace within 1e-10, eigenvalues >= -1e-10
    void validate() const;
};

DensityMatrix density_from_state(const StateVector& psi);

// Reduced density matrix over `keep` (site indices, site 0 least significant).
DensityMatrix partial_trace(const StateVector& psi, const std::vector<int>& keep,
                            const std::vector<int>& dims);
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep,
                            const std::vector<int>& dims);

// N(rho) = sum |negative eigenvalues of rho^{T_A}| where A = transposed_sites.
// rho must live on qubits (dim a power of two).
double negativity(const DensityMatrix& rho, const std::vector<int>& transposed_sites);

// Wootters concurrence of a two-qubit density matrix.
double concurrence(const DensityMatrix& rho);

// Residual entanglement tau_3 via the degree-4 invariant of the eight
// amplitudes; 1 for GHZ, 0 for W-class and products.
double three_tangle(const StateVector& psi);

// C_{site(rest)} = sqrt(2 (1 - Tr rho_site^2)) for pure 3-qubit states.
double one_vs_rest_concurrence(const StateVector& psi, int site);

// sqrt(sum_{i<j} (C_ij - 2/3)^2) over the three pairwise reductions.
double w_cost(const StateVector& psi);

// D_B = sqrt(2 - 2 |<psi|phi>|)
double bures_distance(const StateVector& psi, const StateVector& phi);

// |amplitude|^2 per computational basis index.
Eigen::VectorXd probabilities(const StateVector& psi);

// labels in |q_{n-1} ... q_0> order for index = sum q_s levels^s
std::vector<std::string> basis_labels(int sites, int levels);

StateVector canonical_bell();  // (|00> + |11>)/sqrt(2)
StateVector canonical_ghz();   // (|000> + |111>)/sqrt(2)
StateVector canonical_w();     // (|001> + |010> + |100>)/sqrt(3)

// Everything the experiment reports about a final qubit state (dim 4 or 8).
struct MetricReport {
    int qubits{0};
    std::vector<double> negativities;            // per single-site cut, site order
    std::vector<std::string> negativity_cuts;    // e.g. "0|1", "0|12"
    std::vector<double> concurrences;            // pairwise, (01), (02), (12) order
    std::vector<double> squared_concurrences;
    std::vector<std::string> concurrence_pairs;
    double three_tangle{0.0};  // 3 qubits only
    double w_cost{0.0};        // 3 qubits only
    std::vector<double> probability;
    std::vector<std::string> labels;
};

MetricReport compute_metrics(const StateVector& qubit_state);

}  // namespace pulseopt
