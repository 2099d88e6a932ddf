#pragma once

#include <vector>

#include "qread/cell.hpp"
#include "qread/polar.hpp"

namespace qread {

struct ProfileRow {
    int index = 0;  // 1-based synthesized channel index
    double rate_bits = 0.0;
    double z_reliability = 0.0;
    double z_source = 0.0;
    bool is_good = false;
    bool is_bad = false;
};

struct PolarizationProfile {
    int block_length = 0;
    double beta = 0.0;
    std::vector<ProfileRow> rows;
    int good_count = 0;
    int bad_count = 0;
};

/// I(U_i ; U_1^{i-1} B^N) from views covering every positive-probability
/// prefix of index i, in bits.
double synthesized_rate(const std::vector<SynthesizedChannelView>& views);
double synthesized_rate(const MemoryCell& cell, const ProbeState& probe, const SourceModel& model,
                        int block_length, int index);

/// Z of the i-th synthesized channel in the conditional-joint form
/// 2 sum_prefix sqrt(p(prefix,0) p(prefix,1)) F(cond0, cond1).
double synthesized_reliability(const MemoryCell& cell, const ProbeState& probe,
                               const SourceModel& model, int block_length, int index);
double synthesized_reliability_pair(const Matrix& s0, const Matrix& s1, const SourceModel& model,
                                    int block_length, int index);

struct OneStepReport {
    double rate = 0.0;
    double rate_minus = 0.0;
    double rate_plus = 0.0;
    double z = 0.0;
    double z_minus = 0.0;
    double z_plus = 0.0;
};

/// All six one-step quantities with the i.i.d.-U convention.
OneStepReport one_step_report(const CqEnsemble& e);

/// I(W) >= -log2 Tr{(p sqrt(rho0) + (1-p) sqrt(rho1))^2}.
double holevo_lower_bound(const CqEnsemble& e);

/// I(W) <= H(sigma) with sigma = ((p, Z/2), (Z/2, 1-p)).
double roga_upper_bound(double p, double z);

struct RateBounds {
    double lower = 0.0;  // h(p) - log2(1 + Z); informative only when >= 0
    double upper = 0.0;  // sqrt(4p(1-p) - Z^2)
};

RateBounds rate_reliability_bounds(double p, double z);

/// The symmetric channel W~ with W~^u(rho) = sum_v p(v)|u+v><u+v| (x) W^v(rho),
/// uniform input prior; its outputs live on Z~ (x) B.
struct SymmetricLift {
    CqEnsemble base;
    CqEnsemble lifted;
};

SymmetricLift symmetric_lift(const CqEnsemble& e);

/// Checks W_N^{(i)} against the Z~-projected lift channel: the projected
/// lifted synthesized blocks must be proportional to the asymmetric ones.
struct TraceOutReport {
    double max_relative_deviation = 0.0;
    double constant = 0.0;  // measured lift/asym block ratio; 2^-N exactly
};

TraceOutReport trace_out_correspondence(const MemoryCell& cell, const ProbeState& probe,
                                        const SourceModel& model, int block_length, int index);

/// Z(U_i | U_1^{i-1}) = 2 sum_prefix sqrt(p(prefix,0) p(prefix,1)).
double source_reliability(const SourceModel& model, int block_length, int index);

/// Per-index rate/reliability table plus good/bad counts at the
/// 2^{-2^{n beta}} thresholds.
PolarizationProfile polarization_profile(const MemoryCell& cell, const ProbeState& probe,
                                         const SourceModel& model, int block_length, double beta);

/// log2 of the polarization threshold 2^{-2^{n beta}}.
double beta_threshold_log2(int n, double beta);

}  // namespace qread
