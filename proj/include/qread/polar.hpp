#pragma once

#include <cstdint>
#include <vector>

#include "qread/cell.hpp"
#include "qread/qmat.hpp"

namespace qread {

using BitVector = std::vector<std::uint8_t>;

/// Largest block length for which exact synthesized channels are built.
inline constexpr int kMaxExactBlock = 8;
/// Largest output dimension a synthesized block may reach.
inline constexpr int kMaxSynthDim = 1 << 10;

/// The combining matrix G_N = R_N F^{(x)n} over GF(2), with
/// F = (1 0; 1 1) and R_N the bit-reversal permutation.
struct PolarTransform {
    int n = 0;  // N = 2^n
    std::vector<BitVector> rows;

    int block_length() const { return 1 << n; }
};

PolarTransform polar_transform(int n);

/// x = u G_N over GF(2).
BitVector encode_bits(const BitVector& u, const PolarTransform& t);

enum class SourceKind {
    IidU,             // U_j i.i.d. with P(U_j = 0) = prior_p
    InducedFromIidX,  // p(u^N) = prod_j p_X([u G_N]_j), X i.i.d.
};

struct SourceModel {
    SourceKind kind = SourceKind::IidU;
    double prior_p = 0.5;
};

/// Probability of a full source vector u under the model.
double source_prob(const SourceModel& model, const PolarTransform& t, const BitVector& u);

/// Marginal probability of a prefix u_1^k (sum over completions).
double prefix_prob(const SourceModel& model, const PolarTransform& t, const BitVector& prefix);

/// P(U_{k+1} = bit | u_1^k = prefix).
double cond_bit_prob(const SourceModel& model, const PolarTransform& t, const BitVector& prefix,
                     int bit);

/// Full probability table over all 2^N source vectors, indexed by the
/// integer with u_1 as most significant bit.
std::vector<double> source_distribution(const SourceModel& model, int n,
                                        int max_block = kMaxExactBlock);

/// Product output state W^{x_1}(rho) (x) ... (x) W^{x_N}(rho).
DensityOperator channel_output(const MemoryCell& cell, const ProbeState& probe,
                               const BitVector& x);

/// The i-th synthesized channel conditioned on a decoded prefix:
/// normalized conditional outputs for u_i = 0/1, the conditional bit
/// prior, and the scalar prefix probability kept separately.
struct SynthesizedChannelView {
    int block_length;
    int index;  // 1-based
    BitVector prefix;
    DensityOperator cond_state0;
    DensityOperator cond_state1;
    double cond_prior;         // P(U_i = 0 | prefix)
    double prefix_probability;

    SynthesizedChannelView(int block_length_, int index_, BitVector prefix_,
                           DensityOperator cond0, DensityOperator cond1, double prior,
                           double prefix_prob)
        : block_length(block_length_),
          index(index_),
          prefix(std::move(prefix_)),
          cond_state0(std::move(cond0)),
          cond_state1(std::move(cond1)),
          cond_prior(prior),
          prefix_probability(prefix_prob) {}
};

/// Brute-force synthesis by suffix enumeration (the oracle path).
SynthesizedChannelView synthesize(const MemoryCell& cell, const ProbeState& probe,
                                  const SourceModel& model, int block_length, int index,
                                  const BitVector& prefix);

/// Same construction for an arbitrary per-copy cq output pair. Used to
/// polar-process lifted channels whose outputs are not qubit states.
SynthesizedChannelView synthesize_pair(const Matrix& s0, const Matrix& s1,
                                       const SourceModel& model, int block_length, int index,
                                       const BitVector& prefix);

/// One polarization step (W, W) -> (W^-, W^+) with U_1, U_2 i.i.d. per the
/// cell prior. The minus channel outputs on B1B2; the plus channel carries
/// the classical U1 register, outputting on U1 (x) B1 (x) B2.
struct OneStepPair {
    CqEnsemble minus;
    CqEnsemble plus;
};

OneStepPair one_step_transform(const CqEnsemble& e);

namespace detail {
std::uint64_t pack_bits(const BitVector& bits);
Matrix product_output(const Matrix& s0, const Matrix& s1, const BitVector& x);
}

}  // namespace qread
