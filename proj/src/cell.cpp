#include "qread/cell.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace qread {

ProbeState::ProbeState(double x, double y, double z) : rx(x), ry(y), rz(z) {
    if (radius() > 1.0 + 1e-12) {
        throw std::invalid_argument("ProbeState: Bloch vector has norm " +
                                    std::to_string(radius()) + " > 1");
    }
}

double ProbeState::radius() const {
    return std::sqrt(rx * rx + ry * ry + rz * rz);
}

DensityOperator ProbeState::density() const {
    Matrix m(2, 2);
    m(0, 0) = Complex(0.5 * (1.0 + rz), 0.0);
    m(0, 1) = Complex(0.5 * rx, -0.5 * ry);
    m(1, 0) = Complex(0.5 * rx, 0.5 * ry);
    m(1, 1) = Complex(0.5 * (1.0 - rz), 0.0);
    return DensityOperator(m);
}

KrausChannel::KrausChannel(std::vector<Matrix> kraus_ops) : ops_(std::move(kraus_ops)) {
    if (ops_.empty()) {
        throw std::invalid_argument("KrausChannel: empty operator list");
    }
    out_dim_ = static_cast<int>(ops_.front().rows());
    in_dim_ = static_cast<int>(ops_.front().cols());
    Matrix sum = Matrix::Zero(in_dim_, in_dim_);
    for (const Matrix& a : ops_) {
        if (a.rows() != out_dim_ || a.cols() != in_dim_) {
            throw std::invalid_argument("KrausChannel: operators have inconsistent shapes");
        }
        sum += a.adjoint() * a;
    }
    if ((sum - Matrix::Identity(in_dim_, in_dim_)).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument("KrausChannel: sum A_k^dagger A_k != I (not trace preserving)");
    }
}

MemoryCell::MemoryCell(KrausChannel c0, KrausChannel c1, double p)
    : channel0(std::move(c0)), channel1(std::move(c1)), prior_p(p) {
    if (channel0.in_dim() != channel1.in_dim() || channel0.out_dim() != channel1.out_dim()) {
        throw std::invalid_argument("MemoryCell: channels must share input/output dimensions");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("MemoryCell: prior_p must lie strictly inside (0,1)");
    }
}

CqEnsemble::CqEnsemble(double p, DensityOperator s0, DensityOperator s1)
    : prior_p(p), state0(std::move(s0)), state1(std::move(s1)) {
    if (state0.dim() != state1.dim()) {
        throw std::invalid_argument("CqEnsemble: states must share a dimension");
    }
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("CqEnsemble: prior_p must lie strictly inside (0,1)");
    }
}

MemoryCell ad_cell(double gamma0, double gamma1, double prior_p) {
    auto make = [](double g) {
        if (g < 0.0 || g > 1.0) {
            throw std::invalid_argument("ad_cell: damping parameter " + std::to_string(g) +
                                        " outside [0,1]");
        }
        Matrix a0 = Matrix::Zero(2, 2);
        a0(0, 0) = 1.0;
        a0(1, 1) = std::sqrt(1.0 - g);
        Matrix a1 = Matrix::Zero(2, 2);
        a1(0, 1) = std::sqrt(g);
        return KrausChannel({a0, a1});
    };
    return MemoryCell(make(gamma0), make(gamma1), prior_p);
}

DensityOperator apply_channel(const KrausChannel& ch, const DensityOperator& rho) {
    if (rho.dim() != ch.in_dim()) {
        throw std::invalid_argument("apply_channel: state dimension " + std::to_string(rho.dim()) +
                                    " does not match channel input " +
                                    std::to_string(ch.in_dim()));
    }
    return DensityOperator::trusted(detail::apply_channel_m(ch, rho.matrix()));
}

CqEnsemble cq_view(const MemoryCell& cell, const ProbeState& probe) {
    const DensityOperator rho = probe.density();
    return CqEnsemble(cell.prior_p, apply_channel(cell.channel0, rho),
                      apply_channel(cell.channel1, rho));
}

DensityOperator joint_state(const CqEnsemble& e) {
    const int d = e.dim();
    Matrix m = Matrix::Zero(2 * d, 2 * d);
    m.topLeftCorner(d, d) = e.prior_p * e.state0.matrix();
    m.bottomRightCorner(d, d) = (1.0 - e.prior_p) * e.state1.matrix();
    return DensityOperator::trusted(std::move(m));
}

double rate(const CqEnsemble& e) {
    const double p = e.prior_p;
    const Matrix avg = p * e.state0.matrix() + (1.0 - p) * e.state1.matrix();
    return detail::entropy_bits(avg) - p * detail::entropy_bits(e.state0.matrix()) -
           (1.0 - p) * detail::entropy_bits(e.state1.matrix());
}

double reliability(const CqEnsemble& e) {
    const double p = e.prior_p;
    return 2.0 * std::sqrt(p * (1.0 - p)) * fidelity(e.state0, e.state1);
}

namespace detail {

Matrix apply_channel_m(const KrausChannel& ch, const Matrix& rho) {
    Matrix out = Matrix::Zero(ch.out_dim(), ch.out_dim());
    for (const Matrix& a : ch.kraus_ops()) {
        out += a * rho * a.adjoint();
    }
    return out;
}

}  // namespace detail

}  // namespace qread
