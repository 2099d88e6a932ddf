#include "qread/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qread {

namespace {

struct PrefixBlocks {
    double joint0 = 0.0;  // p(prefix, u_i = 0)
    double joint1 = 0.0;
    Matrix cond0;  // normalized conditional states
    Matrix cond1;
};

BitVector prefix_from_counter(std::uint32_t c, int len) {
    BitVector prefix(len, 0);
    for (int j = 0; j < len; ++j) {
        prefix[j] = (c >> (len - 1 - j)) & 1u;
    }
    return prefix;
}

std::vector<PrefixBlocks> collect_prefix_blocks(const Matrix& s0, const Matrix& s1,
                                                const SourceModel& model, int block_length,
                                                int index) {
    std::vector<PrefixBlocks> out;
    const int len = index - 1;
    out.reserve(std::size_t{1} << len);
    for (std::uint32_t c = 0; c < (1u << len); ++c) {
        const SynthesizedChannelView view =
            synthesize_pair(s0, s1, model, block_length, index, prefix_from_counter(c, len));
        PrefixBlocks blk;
        blk.joint0 = view.prefix_probability * view.cond_prior;
        blk.joint1 = view.prefix_probability * (1.0 - view.cond_prior);
        blk.cond0 = view.cond_state0.matrix();
        blk.cond1 = view.cond_state1.matrix();
        out.push_back(std::move(blk));
    }
    return out;
}

double rate_from_blocks(const std::vector<PrefixBlocks>& blocks) {
    // I(U_i ; U_1^{i-1} B^N) = H(U_i) + H(prefix, B) - H(U_i, prefix, B),
    // each entropy taken on the block-diagonal classical-quantum state.
    double p_ui0 = 0.0;
    double h_joint = 0.0;
    double h_prefix = 0.0;
    for (const PrefixBlocks& blk : blocks) {
        p_ui0 += blk.joint0;
        for (int b = 0; b < 2; ++b) {
            const double w = b == 0 ? blk.joint0 : blk.joint1;
            if (w <= 0.0) {
                continue;
            }
            const RealVector vals = detail::eigenvalues_herm(b == 0 ? blk.cond0 : blk.cond1);
            for (int k = 0; k < vals.size(); ++k) {
                const double lam = w * vals[k];
                if (lam > 0.0) {
                    h_joint -= lam * std::log2(lam);
                }
            }
        }
        const Matrix mix = blk.joint0 * blk.cond0 + blk.joint1 * blk.cond1;
        const RealVector vals = detail::eigenvalues_herm(mix);
        for (int k = 0; k < vals.size(); ++k) {
            if (vals[k] > 0.0) {
                h_prefix -= vals[k] * std::log2(vals[k]);
            }
        }
    }
    return detail::binary_entropy(p_ui0) + h_prefix - h_joint;
}

double reliability_from_blocks(const std::vector<PrefixBlocks>& blocks) {
    double z = 0.0;
    for (const PrefixBlocks& blk : blocks) {
        z += 2.0 * std::sqrt(blk.joint0 * blk.joint1) * detail::fidelity_m(blk.cond0, blk.cond1);
    }
    return z;
}

}  // namespace

double synthesized_rate(const std::vector<SynthesizedChannelView>& views) {
    if (views.empty()) {
        throw std::invalid_argument("synthesized_rate: no views supplied");
    }
    double total = 0.0;
    std::vector<PrefixBlocks> blocks;
    blocks.reserve(views.size());
    for (const SynthesizedChannelView& v : views) {
        total += v.prefix_probability;
        PrefixBlocks blk;
        blk.joint0 = v.prefix_probability * v.cond_prior;
        blk.joint1 = v.prefix_probability * (1.0 - v.cond_prior);
        blk.cond0 = v.cond_state0.matrix();
        blk.cond1 = v.cond_state1.matrix();
        blocks.push_back(std::move(blk));
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument(
            "synthesized_rate: prefix coverage incomplete, probabilities sum to " +
            std::to_string(total));
    }
    return rate_from_blocks(blocks);
}

double synthesized_rate(const MemoryCell& cell, const ProbeState& probe, const SourceModel& model,
                        int block_length, int index) {
    const CqEnsemble e = cq_view(cell, probe);
    return rate_from_blocks(
        collect_prefix_blocks(e.state0.matrix(), e.state1.matrix(), model, block_length, index));
}

double synthesized_reliability(const MemoryCell& cell, const ProbeState& probe,
                               const SourceModel& model, int block_length, int index) {
    const CqEnsemble e = cq_view(cell, probe);
    return synthesized_reliability_pair(e.state0.matrix(), e.state1.matrix(), model, block_length,
                                        index);
}

double synthesized_reliability_pair(const Matrix& s0, const Matrix& s1, const SourceModel& model,
                                    int block_length, int index) {
    return reliability_from_blocks(collect_prefix_blocks(s0, s1, model, block_length, index));
}

OneStepReport one_step_report(const CqEnsemble& e) {
    const OneStepPair pair = one_step_transform(e);
    OneStepReport r;
    r.rate = rate(e);
    r.rate_minus = rate(pair.minus);
    r.rate_plus = rate(pair.plus);
    r.z = reliability(e);
    r.z_minus = reliability(pair.minus);
    r.z_plus = reliability(pair.plus);
    return r;
}

double holevo_lower_bound(const CqEnsemble& e) {
    const double p = e.prior_p;
    const Matrix mix =
        p * detail::sqrt_psd(e.state0.matrix()) + (1.0 - p) * detail::sqrt_psd(e.state1.matrix());
    const double tr = (mix * mix).trace().real();
    return -std::log2(tr);
}

double roga_upper_bound(double p, double z) {
    if (z < 0.0 || z > 2.0 * std::sqrt(p * (1.0 - p)) + 1e-12) {
        throw std::invalid_argument("roga_upper_bound: Z = " + std::to_string(z) +
                                    " outside [0, 2 sqrt(p(1-p))]");
    }
    const double disc = std::sqrt((2.0 * p - 1.0) * (2.0 * p - 1.0) + z * z);
    return detail::binary_entropy(0.5 * (1.0 + disc));
}

RateBounds rate_reliability_bounds(double p, double z) {
    const double cap = 4.0 * p * (1.0 - p);
    if (z < 0.0 || z * z > cap + 1e-12) {
        throw std::invalid_argument("rate_reliability_bounds: Z^2 exceeds 4p(1-p)");
    }
    RateBounds b;
    b.lower = detail::binary_entropy(p) - std::log2(1.0 + z);
    b.upper = std::sqrt(std::max(0.0, cap - z * z));
    return b;
}

SymmetricLift symmetric_lift(const CqEnsemble& e) {
    const int d = e.dim();
    const Matrix* sig[2] = {&e.state0.matrix(), &e.state1.matrix()};
    Matrix lifted[2];
    for (int u_tilde = 0; u_tilde < 2; ++u_tilde) {
        Matrix m = Matrix::Zero(2 * d, 2 * d);
        for (int u = 0; u < 2; ++u) {
            const double w = u == 0 ? e.prior_p : 1.0 - e.prior_p;
            const int z = u_tilde ^ u;
            m.block(z * d, z * d, d, d) = w * (*sig[u]);
        }
        lifted[u_tilde] = std::move(m);
    }
    return SymmetricLift{e, CqEnsemble(0.5, DensityOperator::trusted(std::move(lifted[0])),
                                       DensityOperator::trusted(std::move(lifted[1])))};
}

TraceOutReport trace_out_correspondence(const MemoryCell& cell, const ProbeState& probe,
                                        const SourceModel& model, int block_length, int index) {
    if (block_length > 4) {
        throw std::invalid_argument("trace_out_correspondence: block length capped at 4");
    }
    if (model.kind != SourceKind::InducedFromIidX && model.prior_p != 0.5) {
        throw std::invalid_argument(
            "trace_out_correspondence: the lift has i.i.d. per-copy labels; use the induced "
            "source model (or p = 1/2, where the models coincide)");
    }
    const CqEnsemble e = cq_view(cell, probe);
    const SymmetricLift lift = symmetric_lift(e);
    const SourceModel induced{SourceKind::InducedFromIidX, model.prior_p};
    const SourceModel uniform{SourceKind::IidU, 0.5};

    const int d = e.dim();
    const int N = block_length;
    const int i = index;
    const int len = i - 1;

    // kept lift indices: per-copy digit in base 2d below d (Z~ register = |0>)
    const int lift_dim = static_cast<int>(std::pow(2 * d, N) + 0.5);
    const int asym_dim = static_cast<int>(std::pow(d, N) + 0.5);
    std::vector<int> keep;
    keep.reserve(asym_dim);
    for (int idx = 0; idx < lift_dim; ++idx) {
        int rem = idx;
        bool ok = true;
        for (int c = 0; c < N; ++c) {
            if (rem % (2 * d) >= d) {
                ok = false;
                break;
            }
            rem /= 2 * d;
        }
        if (ok) {
            keep.push_back(idx);
        }
    }

    TraceOutReport report;
    report.constant = std::pow(2.0, -N);
    for (std::uint32_t c = 0; c < (1u << len); ++c) {
        const BitVector prefix = prefix_from_counter(c, len);
        const SynthesizedChannelView asym =
            synthesize_pair(e.state0.matrix(), e.state1.matrix(), induced, N, i, prefix);
        const SynthesizedChannelView lifted = synthesize_pair(
            lift.lifted.state0.matrix(), lift.lifted.state1.matrix(), uniform, N, i, prefix);
        for (int b = 0; b < 2; ++b) {
            const double asym_w =
                asym.prefix_probability * (b == 0 ? asym.cond_prior : 1.0 - asym.cond_prior);
            const double lift_w =
                lifted.prefix_probability * (b == 0 ? lifted.cond_prior : 1.0 - lifted.cond_prior);
            const Matrix& asym_state = b == 0 ? asym.cond_state0.matrix() : asym.cond_state1.matrix();
            const Matrix& lift_state =
                b == 0 ? lifted.cond_state0.matrix() : lifted.cond_state1.matrix();
            Matrix projected(asym_dim, asym_dim);
            for (int r = 0; r < asym_dim; ++r) {
                for (int s = 0; s < asym_dim; ++s) {
                    projected(r, s) = lift_w * lift_state(keep[r], keep[s]);
                }
            }
            const Matrix target = (report.constant * asym_w) * asym_state;
            const double denom = target.norm();
            const double dev = denom > 0.0 ? (projected - target).norm() / denom : projected.norm();
            report.max_relative_deviation = std::max(report.max_relative_deviation, dev);
        }
    }
    return report;
}

double source_reliability(const SourceModel& model, int block_length, int index) {
    if (block_length > kMaxExactBlock) {
        throw std::invalid_argument("source_reliability: block length exceeds table cap");
    }
    if (index < 1 || index > block_length) {
        throw std::invalid_argument("source_reliability: index out of range");
    }
    int n = 0;
    while ((1 << n) < block_length) {
        ++n;
    }
    const PolarTransform t = polar_transform(n);
    const int len = index - 1;
    double z = 0.0;
    for (std::uint32_t c = 0; c < (1u << len); ++c) {
        BitVector prefix = prefix_from_counter(c, len);
        prefix.push_back(0);
        const double p0 = prefix_prob(model, t, prefix);
        prefix.back() = 1;
        const double p1 = prefix_prob(model, t, prefix);
        z += 2.0 * std::sqrt(p0 * p1);
    }
    return z;
}

PolarizationProfile polarization_profile(const MemoryCell& cell, const ProbeState& probe,
                                         const SourceModel& model, int block_length, double beta) {
    if (!(beta < 0.5)) {
        throw std::invalid_argument("polarization_profile: beta must be < 1/2");
    }
    const CqEnsemble e = cq_view(cell, probe);
    int n = 0;
    while ((1 << n) < block_length) {
        ++n;
    }
    const double log2_eps = beta_threshold_log2(n, beta);
    const double eps = std::exp2(log2_eps);
    // At p = 1/2 the source is symmetric and Z(U_i|prefix) == 1, so the
    // source-side constraint is vacuous and dropped.
    const bool symmetric = model.prior_p == 0.5;

    PolarizationProfile profile;
    profile.block_length = block_length;
    profile.beta = beta;
    for (int i = 1; i <= block_length; ++i) {
        const std::vector<PrefixBlocks> blocks =
            collect_prefix_blocks(e.state0.matrix(), e.state1.matrix(), model, block_length, i);
        ProfileRow row;
        row.index = i;
        row.rate_bits = rate_from_blocks(blocks);
        row.z_reliability = reliability_from_blocks(blocks);
        row.z_source = source_reliability(model, block_length, i);

        const bool z_small =
            row.z_reliability <= 0.0 || std::log2(row.z_reliability) <= log2_eps;
        const bool z_large = row.z_reliability >= 1.0 - eps;
        const bool zsrc_small = row.z_source <= 0.0 || std::log2(row.z_source) <= log2_eps;
        const bool zsrc_large = row.z_source >= 1.0 - eps;
        row.is_good = z_small && (symmetric || zsrc_large);
        row.is_bad = z_large && (symmetric || zsrc_small);
        profile.good_count += row.is_good ? 1 : 0;
        profile.bad_count += row.is_bad ? 1 : 0;
        profile.rows.push_back(row);
    }
    return profile;
}

double beta_threshold_log2(int n, double beta) {
    return -std::pow(2.0, n * beta);
}

}  // namespace qread
