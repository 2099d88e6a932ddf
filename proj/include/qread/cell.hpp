#pragma once

#include <vector>

#include "qread/qmat.hpp"

namespace qread {

/// Qubit state given by its Bloch vector; rho = (I + r.sigma)/2.
struct ProbeState {
    double rx = 0.0;
    double ry = 0.0;
    double rz = 0.0;

    ProbeState() = default;
    ProbeState(double x, double y, double z);

    double radius() const;
    DensityOperator density() const;
};

/// Quantum channel in Kraus form; trace preservation checked at construction.
class KrausChannel {
  public:
    explicit KrausChannel(std::vector<Matrix> kraus_ops);

    int in_dim() const { return in_dim_; }
    int out_dim() const { return out_dim_; }
    const std::vector<Matrix>& kraus_ops() const { return ops_; }

  private:
    std::vector<Matrix> ops_;
    int in_dim_ = 0;
    int out_dim_ = 0;
};

/// Binary-labeled pair of channels plus the label prior p = P_X(0).
struct MemoryCell {
    KrausChannel channel0;
    KrausChannel channel1;
    double prior_p;

    MemoryCell(KrausChannel c0, KrausChannel c1, double p);
};

/// The cell seen as a classical-quantum channel for a fixed probe:
/// a prior together with the two possible output states.
struct CqEnsemble {
    double prior_p;
    DensityOperator state0;
    DensityOperator state1;

    CqEnsemble(double p, DensityOperator s0, DensityOperator s1);
    int dim() const { return state0.dim(); }
};

/// Amplitude damping memory cell; label x carries damping gamma_x.
/// Kraus operators: A0 = diag(1, sqrt(1-g)), A1 = sqrt(g) |0><1|.
MemoryCell ad_cell(double gamma0, double gamma1, double prior_p);

DensityOperator apply_channel(const KrausChannel& ch, const DensityOperator& rho);

CqEnsemble cq_view(const MemoryCell& cell, const ProbeState& probe);

/// Joint classical-quantum state p|0><0| (x) rho0 + (1-p)|1><1| (x) rho1.
DensityOperator joint_state(const CqEnsemble& e);

/// Rate I(W) = H(p rho0 + (1-p) rho1) - p H(rho0) - (1-p) H(rho1), in bits.
double rate(const CqEnsemble& e);

/// Reliability Z(W) = 2 sqrt(p(1-p)) F(rho0, rho1).
double reliability(const CqEnsemble& e);

namespace detail {
Matrix apply_channel_m(const KrausChannel& ch, const Matrix& rho);
}

}  // namespace qread
