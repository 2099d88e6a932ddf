#pragma once

#include <cstdint>
#include <vector>

#include "qread/analysis.hpp"
#include "qread/polar.hpp"

namespace qread {

/// Information set chosen by smallest reliabilities under the asymmetric
/// double criterion (Z small on A, Z(U_i|prefix) large on A).
struct CodeConstruction {
    int block_length = 0;
    std::vector<int> info_set;  // sorted, 1-based
    double target_rate = 0.0;
    double z_threshold = 1.0;
    double zsrc_threshold = 0.0;
    std::uint64_t frozen_seed = 0;

    double achieved_rate() const {
        return static_cast<double>(info_set.size()) / block_length;
    }
    bool is_info(int index) const;
};

/// Default zsrc threshold 1 - 2^{-2^{n beta}} mirroring the good-set
/// definition; beta = 0.49.
double default_zsrc_threshold(int n, double beta = 0.49);

CodeConstruction select_information_set(const PolarizationProfile& profile, double target_rate,
                                        double z_threshold, double zsrc_threshold,
                                        std::uint64_t frozen_seed);

/// Frozen-bit maps lambda_j: prefix -> bit, realized by a seeded hash of
/// (seed, j, prefix) compared against the conditional source law, so the
/// encoder and decoder share them without transmission.
class FrozenMaps {
  public:
    FrozenMaps(SourceModel model, int block_length, std::uint64_t seed);

    /// lambda_j(prefix); j is 1-based, prefix = u_1^{j-1}.
    std::uint8_t evaluate(int index, const BitVector& prefix) const;

    std::uint64_t seed() const { return seed_; }
    const SourceModel& model() const { return model_; }

  private:
    SourceModel model_;
    PolarTransform transform_;
    std::uint64_t seed_;
};

FrozenMaps sample_frozen_maps(const SourceModel& model, const CodeConstruction& construction);

struct EncodeResult {
    BitVector u;
    BitVector x;
};

/// Ascending-order fill: message bits into A, frozen bits from the maps;
/// x = u G_N.
EncodeResult encode_message(const BitVector& msg, const CodeConstruction& construction,
                            const FrozenMaps& maps);

}  // namespace qread
