#include "pulseopt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pulseopt {

namespace {

// symmetrize before diagonalizing to kill solver asymmetry noise
Eigen::VectorXd hermitian_eigenvalues(const OperatorMatrix& m) {
    const OperatorMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<OperatorMatrix> solver(h);
    if (solver.info() != Eigen::Success) throw Error("eigenvalue decomposition failed");
    return solver.eigenvalues();
}

OperatorMatrix hermitian_sqrt(const OperatorMatrix& m) {
    const OperatorMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<OperatorMatrix> solver(h);
    if (solver.info() != Eigen::Success) throw Error("eigenvalue decomposition failed");
    Eigen::VectorXd ev = solver.eigenvalues().cwiseMax(0.0);
    // true zeros come back as O(eps) noise; snap them so the sqrt does not
    // turn 1e-16 into 1e-8
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() * ev.maxCoeff();
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev[i] < floor) ev[i] = 0.0;
    return solver.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
           solver.eigenvectors().adjoint();
}

int qubit_count_of(Eigen::Index dim) {
    int n = 0;
    Eigen::Index d = 1;
    while (d < dim) {
        d <<= 1;
        ++n;
    }
    if (d != dim) throw DimensionError("dimension is not a power of two");
    return n;
}

}  // namespace

void DensityMatrix::validate() const {
    if (entries.rows() != entries.cols()) throw DimensionError("density matrix must be square");
    if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw Error("density matrix is not Hermitian");
    if (std::abs(entries.trace().real() - 1.0) > 1e-10 || std::abs(entries.trace().imag()) > 1e-10)
        throw Error("density matrix trace differs from one");
    const Eigen::VectorXd ev = hermitian_eigenvalues(entries);
    if (ev.minCoeff() < -1e-10) throw Error("density matrix has a negative eigenvalue");
}

DensityMatrix density_from_state(const StateVector& psi) {
    const ComplexVector v = psi.amplitudes / psi.amplitudes.norm();
    return {v * v.adjoint()};
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep,
                            const std::vector<int>& dims) {
    Eigen::Index full = 1;
    for (int d : dims) full *= d;
    if (rho.dim() != full) throw DimensionError("partial_trace: dims product mismatch");
    const int n = static_cast<int>(dims.size());
    for (int s : keep)
        if (s < 0 || s >= n) throw DimensionError("partial_trace: keep site out of range");

    std::vector<int> keep_sorted(keep);
    std::sort(keep_sorted.begin(), keep_sorted.end());
    std::vector<int> traced;
    for (int s = 0; s < n; ++s)
        if (!std::binary_search(keep_sorted.begin(), keep_sorted.end(), s)) traced.push_back(s);

    Eigen::Index kdim = 1;
    for (int s : keep_sorted) kdim *= dims[s];
    Eigen::Index tdim = 1;
    for (int s : traced) tdim *= dims[s];

    std::vector<Eigen::Index> stride(n);
    Eigen::Index acc = 1;
    for (int s = 0; s < n; ++s) {
        stride[s] = acc;
        acc *= dims[s];
    }
    // full index for (kept sub-index k, traced sub-index m); kept site order
    // preserves relative significance (lowest kept site least significant)
    auto full_index = [&](Eigen::Index k, Eigen::Index m) {
        Eigen::Index idx = 0;
        Eigen::Index kk = k;
        for (int s : keep_sorted) {
            idx += (kk % dims[s]) * stride[s];
            kk /= dims[s];
        }
        Eigen::Index mm = m;
        for (int s : traced) {
            idx += (mm % dims[s]) * stride[s];
            mm /= dims[s];
        }
        return idx;
    };

    OperatorMatrix out = OperatorMatrix::Zero(kdim, kdim);
    for (Eigen::Index r = 0; r < kdim; ++r)
        for (Eigen::Index c = 0; c < kdim; ++c)
            for (Eigen::Index m = 0; m < tdim; ++m)
                out(r, c) += rho.entries(full_index(r, m), full_index(c, m));
    return {std::move(out)};
}

DensityMatrix partial_trace(const StateVector& psi, const std::vector<int>& keep,
                            const std::vector<int>& dims) {
    return partial_trace(density_from_state(psi), keep, dims);
}

double negativity(const DensityMatrix& rho, const std::vector<int>& transposed_sites) {
    const int n = qubit_count_of(rho.dim());
    for (int s : transposed_sites)
        if (s < 0 || s >= n) throw DimensionError("negativity: site out of range");

    OperatorMatrix pt = rho.entries;
    // transpose one qubit at a time: swap the site's ket and bra digits
    for (int s : transposed_sites) {
        OperatorMatrix next(pt.rows(), pt.cols());
        const Eigen::Index mask = Eigen::Index(1) << s;
        for (Eigen::Index r = 0; r < pt.rows(); ++r) {
            for (Eigen::Index c = 0; c < pt.cols(); ++c) {
                const Eigen::Index rs = (r & ~mask) | (c & mask);
                const Eigen::Index cs = (c & ~mask) | (r & mask);
                next(rs, cs) = pt(r, c);
            }
        }
        pt = std::move(next);
    }
    const Eigen::VectorXd ev = hermitian_eigenvalues(pt);
    double total = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev[i] < 0.0) total -= ev[i];
    return total;
}

double concurrence(const DensityMatrix& rho) {
    if (rho.dim() != 4) throw DimensionError("concurrence expects a 4x4 density matrix");
    OperatorMatrix yy = OperatorMatrix::Zero(4, 4);
    // sigma_y (x) sigma_y
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    // The lambda_i = sqrt(eig(rho rho_tilde)) are the singular values of the
    // complex-symmetric matrix sqrt(rho) YY conj(sqrt(rho)); the SVD keeps
    // the near-zero lambdas at machine precision where the sqrt-of-eigenvalue
    // route loses half the digits.
    const OperatorMatrix root = hermitian_sqrt(rho.entries);
    const OperatorMatrix m = root * yy * root.conjugate();
    Eigen::JacobiSVD<OperatorMatrix> svd(m);
    const Eigen::VectorXd lam = svd.singularValues();  // descending
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

double three_tangle(const StateVector& psi) {
    if (psi.dim() != 8) throw DimensionError("three_tangle expects an 8-dimensional state");
    const double nrm = psi.amplitudes.norm();
    if (std::abs(nrm - 1.0) > 1e-6)
        throw NormalizationError("three_tangle requires a normalized state");
    const ComplexVector a = psi.amplitudes / nrm;
    auto at = [&](int q2, int q1, int q0) { return a[4 * q2 + 2 * q1 + q0]; };

    const Complex d1 = at(0, 0, 0) * at(0, 0, 0) * at(1, 1, 1) * at(1, 1, 1) +
                       at(0, 0, 1) * at(0, 0, 1) * at(1, 1, 0) * at(1, 1, 0) +
                       at(0, 1, 0) * at(0, 1, 0) * at(1, 0, 1) * at(1, 0, 1) +
                       at(1, 0, 0) * at(1, 0, 0) * at(0, 1, 1) * at(0, 1, 1);
    const Complex d2 = at(0, 0, 0) * at(1, 1, 1) * at(0, 1, 1) * at(1, 0, 0) +
                       at(0, 0, 0) * at(1, 1, 1) * at(1, 0, 1) * at(0, 1, 0) +
                       at(0, 0, 0) * at(1, 1, 1) * at(1, 1, 0) * at(0, 0, 1) +
                       at(0, 1, 1) * at(1, 0, 0) * at(1, 0, 1) * at(0, 1, 0) +
                       at(0, 1, 1) * at(1, 0, 0) * at(1, 1, 0) * at(0, 0, 1) +
                       at(1, 0, 1) * at(0, 1, 0) * at(1, 1, 0) * at(0, 0, 1);
    const Complex d3 = at(0, 0, 0) * at(1, 1, 0) * at(1, 0, 1) * at(0, 1, 1) +
                       at(1, 1, 1) * at(0, 0, 1) * at(0, 1, 0) * at(1, 0, 0);
    return 4.0 * std::abs(d1 - 2.0 * d2 + 4.0 * d3);
}

double one_vs_rest_concurrence(const StateVector& psi, int site) {
    if (psi.dim() != 8) throw DimensionError("expects an 8-dimensional state");
    const DensityMatrix r = partial_trace(psi, {site}, {2, 2, 2});
    const double purity = (r.entries * r.entries).trace().real();
    return std::sqrt(std::max(0.0, 2.0 * (1.0 - purity)));
}

double w_cost(const StateVector& psi) {
    if (psi.dim() != 8) throw DimensionError("w_cost expects an 8-dimensional state");
    const double nrm = psi.amplitudes.norm();
    if (std::abs(nrm - 1.0) > 1e-6)
        throw NormalizationError("w_cost requires a normalized state");
    double sum = 0.0;
    const std::vector<std::vector<int>> pairs = {{0, 1}, {0, 2}, {1, 2}};
    for (const auto& pr : pairs) {
        const double c = concurrence(partial_trace(psi, pr, {2, 2, 2}));
        sum += (c - 2.0 / 3.0) * (c - 2.0 / 3.0);
    }
    return std::sqrt(sum);
}

double bures_distance(const StateVector& psi, const StateVector& phi) {
    if (psi.dim() != phi.dim()) throw DimensionError("bures_distance: dimension mismatch");
    const double overlap =
        std::abs((psi.amplitudes.adjoint() * phi.amplitudes)(0, 0)) /
        (psi.amplitudes.norm() * phi.amplitudes.norm());
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * overlap));
}

Eigen::VectorXd probabilities(const StateVector& psi) {
    Eigen::VectorXd p = psi.amplitudes.cwiseAbs2();
    return p;
}

std::vector<std::string> basis_labels(int sites, int levels) {
    Eigen::Index dim = 1;
    for (int s = 0; s < sites; ++s) dim *= levels;
    std::vector<std::string> labels(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        std::string lab(sites, '0');
        Eigen::Index rest = i;
        for (int s = 0; s < sites; ++s) {
            lab[sites - 1 - s] = static_cast<char>('0' + rest % levels);
            rest /= levels;
        }
        labels[i] = lab;
    }
    return labels;
}

StateVector canonical_bell() {
    ComplexVector v = ComplexVector::Zero(4);
    v[0] = v[3] = 1.0 / std::sqrt(2.0);
    return {std::move(v)};
}

StateVector canonical_ghz() {
    ComplexVector v = ComplexVector::Zero(8);
    v[0] = v[7] = 1.0 / std::sqrt(2.0);
    return {std::move(v)};
}

StateVector canonical_w() {
    ComplexVector v = ComplexVector::Zero(8);
    v[1] = v[2] = v[4] = 1.0 / std::sqrt(3.0);
    return {std::move(v)};
}

MetricReport compute_metrics(const StateVector& qubit_state) {
    MetricReport report;
    const StateVector psi = StateVector::normalized(qubit_state.amplitudes);
    if (psi.dim() == 4) {
        report.qubits = 2;
        const DensityMatrix rho = density_from_state(psi);
        report.negativities = {negativity(rho, {0})};
        report.negativity_cuts = {"0|1"};
        report.concurrences = {concurrence(rho)};
        report.concurrence_pairs = {"01"};
    } else if (psi.dim() == 8) {
        report.qubits = 3;
        const DensityMatrix rho = density_from_state(psi);
        report.negativities = {negativity(rho, {0}), negativity(rho, {1}), negativity(rho, {2})};
        report.negativity_cuts = {"0|12", "1|02", "2|01"};
        const std::vector<std::vector<int>> pairs = {{0, 1}, {0, 2}, {1, 2}};
        for (const auto& pr : pairs) {
            report.concurrences.push_back(concurrence(partial_trace(psi, pr, {2, 2, 2})));
            report.concurrence_pairs.push_back(std::to_string(pr[0]) + std::to_string(pr[1]));
        }
        report.three_tangle = three_tangle(psi);
        report.w_cost = w_cost(psi);
    } else {
        throw DimensionError("compute_metrics expects a 2- or 3-qubit state");
    }
    for (double c : report.concurrences) report.squared_concurrences.push_back(c * c);
    const Eigen::VectorXd p = probabilities(psi);
    report.probability.assign(p.data(), p.data() + p.size());
    report.labels = basis_labels(report.qubits, 2);
    return report;
}

}  // namespace pulseopt
