#include "pulseopt/device_model.hpp"

#include <cmath>
#include <string>

namespace pulseopt {

void TransmonParams::validate() const {
    if (!(omega > 0.0)) throw ConfigError("transmon omega must be positive");
    if (!(alpha < 0.0)) throw ConfigError("transmon alpha must be negative");
    if (!(drive_strength > 0.0)) throw ConfigError("transmon drive_strength must be positive");
}

Eigen::Index DeviceModel::dim() const {
    Eigen::Index d = 1;
    for (int s = 0; s < sites(); ++s) d *= levels;
    return d;
}

void DeviceModel::validate() const {
    if (levels != 2 && levels != 3)
        throw ConfigError("levels must be 2 or 3, got " + std::to_string(levels));
    if (sites() < 1 || sites() > 3)
        throw ConfigError("device must have 1 to 3 transmons, got " + std::to_string(sites()));
    for (const auto& t : transmons) t.validate();
    for (const auto& c : couplings) {
        if (c.site_a == c.site_b) throw ConfigError("coupling must join distinct sites");
        if (c.site_a < 0 || c.site_a >= sites() || c.site_b < 0 || c.site_b >= sites())
            throw ConfigError("coupling site index out of range");
        if (!std::isfinite(c.strength)) throw ConfigError("coupling strength must be finite");
    }
}

OperatorMatrix ladder_op(int levels) {
    if (levels < 2)
        throw InvalidTruncationError("ladder_op requires levels >= 2, got " +
                                     std::to_string(levels));
    OperatorMatrix b = OperatorMatrix::Zero(levels, levels);
    for (int i = 0; i + 1 < levels; ++i) b(i, i + 1) = std::sqrt(static_cast<double>(i + 1));
    return b;
}

OperatorMatrix number_op(int levels) {
    const OperatorMatrix b = ladder_op(levels);
    return b.adjoint() * b;
}

OperatorMatrix embed_site_op(const OperatorMatrix& op, int site, int sites, int levels) {
    if (site < 0 || site >= sites) throw DimensionError("embed_site_op: site out of range");
    OperatorMatrix out = OperatorMatrix::Identity(1, 1);
    // site 0 is least significant, so it is the rightmost Kronecker factor
    for (int s = sites - 1; s >= 0; --s) {
        const OperatorMatrix& factor =
            (s == site) ? op : OperatorMatrix::Identity(levels, levels);
        OperatorMatrix next(out.rows() * factor.rows(), out.cols() * factor.cols());
        for (Eigen::Index i = 0; i < out.rows(); ++i)
            for (Eigen::Index j = 0; j < out.cols(); ++j)
                next.block(i * factor.rows(), j * factor.cols(), factor.rows(), factor.cols()) =
                    out(i, j) * factor;
        out = std::move(next);
    }
    return out;
}

OperatorMatrix build_drift(const DeviceModel& device) {
    device.validate();
    const int L = device.levels;
    const int n = device.sites();
    const OperatorMatrix b = ladder_op(L);
    const OperatorMatrix num = b.adjoint() * b;
    // b^+ b^+ b b = n(n-1) on Fock states
    const OperatorMatrix anh = b.adjoint() * b.adjoint() * b * b;

    OperatorMatrix h = OperatorMatrix::Zero(device.dim(), device.dim());
    for (int s = 0; s < n; ++s) {
        const auto& t = device.transmons[s];
        h += embed_site_op(t.omega * num + 0.5 * t.alpha * anh, s, n, L);
    }
    for (const auto& c : device.couplings) {
        const OperatorMatrix ba = embed_site_op(b, c.site_a, n, L);
        const OperatorMatrix bb = embed_site_op(b, c.site_b, n, L);
        h += c.strength * (ba * bb.adjoint() + ba.adjoint() * bb);
    }
    return h;
}

OperatorMatrix build_control_op(const DeviceModel& device, int site) {
    device.validate();
    if (site < 0 || site >= device.sites())
        throw DimensionError("build_control_op: site out of range");
    const OperatorMatrix b = ladder_op(device.levels);
    return embed_site_op(OperatorMatrix(b + b.adjoint()), site, device.sites(), device.levels);
}

OperatorMatrix rwa_hamiltonian(const RwaParams& p, double mu_re, double mu_im) {
    OperatorMatrix h(2, 2);
    const double hx = 0.5 * p.drive_strength * mu_re;
    const double hy = 0.5 * p.drive_strength * mu_im;
    const double hz = 0.5 * p.detuning;
    h << Complex{hz, 0.0}, Complex{hx, -hy},  //
        Complex{hx, hy}, Complex{-hz, 0.0};
    return h;
}

}  // namespace pulseopt
