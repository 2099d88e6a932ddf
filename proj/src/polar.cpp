#include "qread/polar.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qread {

namespace {

constexpr int kMaxTransformLevel = 12;

bool is_power_of_two(int v) {
    return v > 0 && (v & (v - 1)) == 0;
}

int level_of(int block_length) {
    if (!is_power_of_two(block_length)) {
        throw std::invalid_argument("block length must be a power of two, got " +
                                    std::to_string(block_length));
    }
    int n = 0;
    while ((1 << n) < block_length) {
        ++n;
    }
    return n;
}

std::uint32_t bit_reverse(std::uint32_t v, int n) {
    std::uint32_t out = 0;
    for (int b = 0; b < n; ++b) {
        out = (out << 1) | ((v >> b) & 1u);
    }
    return out;
}

void check_index(int block_length, int index) {
    if (index < 1 || index > block_length) {
        throw std::invalid_argument("synthesized channel index " + std::to_string(index) +
                                    " outside 1.." + std::to_string(block_length));
    }
}

}  // namespace

PolarTransform polar_transform(int n) {
    if (n < 0) {
        throw std::invalid_argument("polar_transform: level must be >= 0");
    }
    if (n > kMaxTransformLevel) {
        throw std::invalid_argument("polar_transform: level " + std::to_string(n) +
                                    " exceeds configured cap " +
                                    std::to_string(kMaxTransformLevel));
    }
    const int N = 1 << n;
    PolarTransform t;
    t.n = n;
    t.rows.assign(N, BitVector(N, 0));
    for (int j = 0; j < N; ++j) {
        // Row j of G_N is row bitrev(j) of F^{(x)n}; entry k of that row is
        // 1 exactly when the bits of k are contained in the bits of bitrev(j).
        const std::uint32_t rj = bit_reverse(static_cast<std::uint32_t>(j), n);
        for (int k = 0; k < N; ++k) {
            t.rows[j][k] = ((static_cast<std::uint32_t>(k) & ~rj) == 0) ? 1 : 0;
        }
    }
    return t;
}

BitVector encode_bits(const BitVector& u, const PolarTransform& t) {
    const int N = t.block_length();
    if (static_cast<int>(u.size()) != N) {
        throw std::invalid_argument("encode_bits: input length " + std::to_string(u.size()) +
                                    " does not match block length " + std::to_string(N));
    }
    BitVector x(N, 0);
    for (int j = 0; j < N; ++j) {
        if (u[j]) {
            for (int k = 0; k < N; ++k) {
                x[k] ^= t.rows[j][k];
            }
        }
    }
    return x;
}

double source_prob(const SourceModel& model, const PolarTransform& t, const BitVector& u) {
    const double p = model.prior_p;
    if (model.kind == SourceKind::IidU) {
        double prob = 1.0;
        for (std::uint8_t b : u) {
            prob *= b ? (1.0 - p) : p;
        }
        return prob;
    }
    const BitVector x = encode_bits(u, t);
    double prob = 1.0;
    for (std::uint8_t b : x) {
        prob *= b ? (1.0 - p) : p;
    }
    return prob;
}

double prefix_prob(const SourceModel& model, const PolarTransform& t, const BitVector& prefix) {
    const int N = t.block_length();
    const int k = static_cast<int>(prefix.size());
    if (k > N) {
        throw std::invalid_argument("prefix longer than block length");
    }
    if (model.kind == SourceKind::IidU) {
        double prob = 1.0;
        for (std::uint8_t b : prefix) {
            prob *= b ? (1.0 - model.prior_p) : model.prior_p;
        }
        return prob;
    }
    double prob = 0.0;
    BitVector u(N, 0);
    std::copy(prefix.begin(), prefix.end(), u.begin());
    const int suffix_len = N - k;
    for (std::uint32_t s = 0; s < (1u << suffix_len); ++s) {
        for (int j = 0; j < suffix_len; ++j) {
            u[k + j] = (s >> (suffix_len - 1 - j)) & 1u;
        }
        prob += source_prob(model, t, u);
    }
    return prob;
}

double cond_bit_prob(const SourceModel& model, const PolarTransform& t, const BitVector& prefix,
                     int bit) {
    if (model.kind == SourceKind::IidU) {
        return bit ? (1.0 - model.prior_p) : model.prior_p;
    }
    BitVector with_bit = prefix;
    with_bit.push_back(static_cast<std::uint8_t>(bit));
    const double denom = prefix_prob(model, t, prefix);
    if (denom <= 0.0) {
        throw std::invalid_argument("cond_bit_prob: conditioning prefix has probability zero");
    }
    return prefix_prob(model, t, with_bit) / denom;
}

std::vector<double> source_distribution(const SourceModel& model, int n, int max_block) {
    const int N = 1 << n;
    if (n < 0 || N > max_block) {
        throw std::invalid_argument("source_distribution: block length " + std::to_string(N) +
                                    " exceeds table cap " + std::to_string(max_block));
    }
    const PolarTransform t = polar_transform(n);
    std::vector<double> table(std::size_t{1} << N);
    BitVector u(N, 0);
    for (std::uint32_t v = 0; v < (1u << N); ++v) {
        for (int j = 0; j < N; ++j) {
            u[j] = (v >> (N - 1 - j)) & 1u;
        }
        table[v] = source_prob(model, t, u);
    }
    return table;
}

DensityOperator channel_output(const MemoryCell& cell, const ProbeState& probe,
                               const BitVector& x) {
    const DensityOperator rho = probe.density();
    const Matrix s0 = detail::apply_channel_m(cell.channel0, rho.matrix());
    const Matrix s1 = detail::apply_channel_m(cell.channel1, rho.matrix());
    return DensityOperator::trusted(detail::product_output(s0, s1, x));
}

SynthesizedChannelView synthesize(const MemoryCell& cell, const ProbeState& probe,
                                  const SourceModel& model, int block_length, int index,
                                  const BitVector& prefix) {
    const CqEnsemble e = cq_view(cell, probe);
    return synthesize_pair(e.state0.matrix(), e.state1.matrix(), model, block_length, index,
                           prefix);
}

SynthesizedChannelView synthesize_pair(const Matrix& s0, const Matrix& s1,
                                       const SourceModel& model, int block_length, int index,
                                       const BitVector& prefix) {
    const int n = level_of(block_length);
    check_index(block_length, index);
    if (static_cast<int>(prefix.size()) != index - 1) {
        throw std::invalid_argument("synthesize: prefix length " + std::to_string(prefix.size()) +
                                    " does not match index " + std::to_string(index));
    }
    if (block_length > kMaxExactBlock) {
        throw std::invalid_argument("synthesize: block length " + std::to_string(block_length) +
                                    " exceeds exact cap " + std::to_string(kMaxExactBlock));
    }
    const int d = static_cast<int>(s0.rows());
    double out_dim = std::pow(static_cast<double>(d), block_length);
    if (out_dim > static_cast<double>(kMaxSynthDim)) {
        throw std::invalid_argument("synthesize: output dimension exceeds cap");
    }
    const int dim = static_cast<int>(out_dim + 0.5);
    const PolarTransform t = polar_transform(n);

    const int N = block_length;
    const int i = index;
    BitVector u(N, 0);
    std::copy(prefix.begin(), prefix.end(), u.begin());

    Matrix block0 = Matrix::Zero(dim, dim);
    Matrix block1 = Matrix::Zero(dim, dim);
    const int suffix_len = N - i;
    for (int b = 0; b < 2; ++b) {
        Matrix& block = b == 0 ? block0 : block1;
        u[i - 1] = static_cast<std::uint8_t>(b);
        for (std::uint32_t s = 0; s < (1u << suffix_len); ++s) {
            for (int j = 0; j < suffix_len; ++j) {
                u[i + j] = (s >> (suffix_len - 1 - j)) & 1u;
            }
            const double pu = source_prob(model, t, u);
            if (pu == 0.0) {
                continue;
            }
            block += pu * detail::product_output(s0, s1, encode_bits(u, t));
        }
    }

    const double tr0 = block0.trace().real();
    const double tr1 = block1.trace().real();
    const double pprefix = tr0 + tr1;
    if (pprefix <= 0.0) {
        throw std::invalid_argument("synthesize: prefix has probability zero under the model");
    }
    if (tr0 <= 0.0 || tr1 <= 0.0) {
        throw std::invalid_argument("synthesize: conditional bit law is degenerate");
    }

    return SynthesizedChannelView(N, i, prefix, DensityOperator::trusted(block0 / tr0),
                                  DensityOperator::trusted(block1 / tr1), tr0 / pprefix,
                                  pprefix);
}

OneStepPair one_step_transform(const CqEnsemble& e) {
    const double p = e.prior_p;
    const int d = e.dim();
    const Matrix* sig[2] = {&e.state0.matrix(), &e.state1.matrix()};

    // W^{-,u1} = sum_{u2} p(u2) W^{u1+u2} (x) W^{u2}
    Matrix minus[2];
    for (int u1 = 0; u1 < 2; ++u1) {
        Matrix m = Matrix::Zero(d * d, d * d);
        for (int u2 = 0; u2 < 2; ++u2) {
            const double w = u2 == 0 ? p : 1.0 - p;
            m += w * detail::kron(*sig[u1 ^ u2], *sig[u2]);
        }
        minus[u1] = std::move(m);
    }

    // W^{+,u2} = sum_{u1} p(u1) |u1><u1| (x) W^{u1+u2} (x) W^{u2}
    Matrix plus[2];
    for (int u2 = 0; u2 < 2; ++u2) {
        Matrix m = Matrix::Zero(2 * d * d, 2 * d * d);
        for (int u1 = 0; u1 < 2; ++u1) {
            const double w = u1 == 0 ? p : 1.0 - p;
            m.block(u1 * d * d, u1 * d * d, d * d, d * d) =
                w * detail::kron(*sig[u1 ^ u2], *sig[u2]);
        }
        plus[u2] = std::move(m);
    }

    return OneStepPair{
        CqEnsemble(p, DensityOperator::trusted(std::move(minus[0])),
                   DensityOperator::trusted(std::move(minus[1]))),
        CqEnsemble(p, DensityOperator::trusted(std::move(plus[0])),
                   DensityOperator::trusted(std::move(plus[1]))),
    };
}

namespace detail {

std::uint64_t pack_bits(const BitVector& bits) {
    std::uint64_t packed = 1;  // leading 1 marks the length
    for (std::uint8_t b : bits) {
        packed = (packed << 1) | (b & 1u);
    }
    return packed;
}

Matrix product_output(const Matrix& s0, const Matrix& s1, const BitVector& x) {
    Matrix out = Matrix::Identity(1, 1);
    for (std::uint8_t b : x) {
        out = kron(out, b ? s1 : s0);
    }
    return out;
}

}  // namespace detail

}  // namespace qread
