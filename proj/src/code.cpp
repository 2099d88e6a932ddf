#include "qread/code.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qread/rng.hpp"

namespace qread {

bool CodeConstruction::is_info(int index) const {
    return std::binary_search(info_set.begin(), info_set.end(), index);
}

double default_zsrc_threshold(int n, double beta) {
    return 1.0 - std::exp2(beta_threshold_log2(n, beta));
}

CodeConstruction select_information_set(const PolarizationProfile& profile, double target_rate,
                                        double z_threshold, double zsrc_threshold,
                                        std::uint64_t frozen_seed) {
    if (!(target_rate > 0.0 && target_rate <= 1.0)) {
        throw std::invalid_argument("select_information_set: target rate must lie in (0,1]");
    }
    const int N = profile.block_length;
    const int k = static_cast<int>(std::floor(target_rate * N));

    // Order by Z ascending; ties broken by larger Zsrc, then smaller index.
    std::vector<int> order(N);
    for (int j = 0; j < N; ++j) {
        order[j] = j;
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const ProfileRow& ra = profile.rows[a];
        const ProfileRow& rb = profile.rows[b];
        if (ra.z_reliability != rb.z_reliability) {
            return ra.z_reliability < rb.z_reliability;
        }
        if (ra.z_source != rb.z_source) {
            return ra.z_source > rb.z_source;
        }
        return ra.index < rb.index;
    });

    std::vector<int> selected(order.begin(), order.begin() + std::min(k, N));

    // Shrink rule: drop the worst violator of either threshold until the
    // remaining set satisfies both.
    for (;;) {
        int worst = -1;
        double worst_score = 0.0;
        for (std::size_t s = 0; s < selected.size(); ++s) {
            const ProfileRow& row = profile.rows[selected[s]];
            double score = 0.0;
            if (row.z_reliability > z_threshold) {
                score = std::max(score, row.z_reliability - z_threshold);
            }
            if (row.z_source < zsrc_threshold) {
                score = std::max(score, zsrc_threshold - row.z_source);
            }
            if (score > worst_score) {
                worst_score = score;
                worst = static_cast<int>(s);
            }
        }
        if (worst < 0) {
            break;
        }
        selected.erase(selected.begin() + worst);
    }

    if (selected.empty()) {
        throw std::runtime_error(
            "select_information_set: construction infeasible, no index satisfies the "
            "thresholds at the requested rate");
    }

    CodeConstruction c;
    c.block_length = N;
    c.target_rate = target_rate;
    c.z_threshold = z_threshold;
    c.zsrc_threshold = zsrc_threshold;
    c.frozen_seed = frozen_seed;
    for (int j : selected) {
        c.info_set.push_back(profile.rows[j].index);
    }
    std::sort(c.info_set.begin(), c.info_set.end());
    return c;
}

FrozenMaps::FrozenMaps(SourceModel model, int block_length, std::uint64_t seed)
    : model_(model), seed_(seed) {
    int n = 0;
    while ((1 << n) < block_length) {
        ++n;
    }
    transform_ = polar_transform(n);
}

std::uint8_t FrozenMaps::evaluate(int index, const BitVector& prefix) const {
    if (static_cast<int>(prefix.size()) != index - 1) {
        throw std::invalid_argument("FrozenMaps::evaluate: prefix length does not match index");
    }
    const double p1 = cond_bit_prob(model_, transform_, prefix, 1);
    const double u = hash_uniform(seed_, static_cast<std::uint64_t>(index),
                                  detail::pack_bits(prefix));
    return u < p1 ? 1 : 0;
}

FrozenMaps sample_frozen_maps(const SourceModel& model, const CodeConstruction& construction) {
    return FrozenMaps(model, construction.block_length, construction.frozen_seed);
}

EncodeResult encode_message(const BitVector& msg, const CodeConstruction& construction,
                            const FrozenMaps& maps) {
    const int N = construction.block_length;
    if (msg.size() != construction.info_set.size()) {
        throw std::invalid_argument("encode_message: message length " + std::to_string(msg.size()) +
                                    " does not match |A| = " +
                                    std::to_string(construction.info_set.size()));
    }
    EncodeResult out;
    out.u.resize(N);
    std::size_t next_msg = 0;
    BitVector prefix;
    prefix.reserve(N);
    for (int i = 1; i <= N; ++i) {
        std::uint8_t bit;
        if (construction.is_info(i)) {
            bit = msg[next_msg++];
        } else {
            bit = maps.evaluate(i, prefix);
        }
        out.u[i - 1] = bit;
        prefix.push_back(bit);
    }
    int n = 0;
    while ((1 << n) < N) {
        ++n;
    }
    out.x = encode_bits(out.u, polar_transform(n));
    return out;
}

}  // namespace qread
