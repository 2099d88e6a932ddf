#pragma once

#include <cstdint>
#include <vector>

#include "qread/analysis.hpp"
#include "qread/cell.hpp"
#include "qread/code.hpp"
#include "qread/polar.hpp"

namespace qread {

struct Povm {
    std::vector<HermitianOperator> elements;
};

/// Square-root ("pretty good") measurement: Lambda_u = S^{-1/2} p_u rho_u
/// S^{-1/2} with S the average state. The residue on the orthocomplement of
/// supp(S) is assigned to the largest-prior element.
Povm square_root_measurement(const std::vector<double>& priors,
                             const std::vector<DensityOperator>& states);

/// Average success probability of a POVM on an ensemble.
double povm_success_probability(const Povm& povm, const std::vector<double>& priors,
                                const std::vector<DensityOperator>& states);

/// P_err <= sum_{u != v} sqrt(p_u p_v) F(rho_u, rho_v); equals Z for binary.
double barnum_knill_bound(const std::vector<double>& priors,
                          const std::vector<DensityOperator>& states);

enum class StepKind { Info, Frozen };

struct DecodeStep {
    int index = 0;
    StepKind kind = StepKind::Frozen;
    double prob0 = 1.0;  // outcome probabilities at this step
    double prob1 = 0.0;
    int outcome = 0;
};

struct DecodeTrace {
    BitVector decoded;
    std::vector<DecodeStep> steps;
    bool success = false;
    bool used_prior_fallback = false;
    bool aborted = false;
    int first_error_index = 0;      // 0 when no error
    double path_probability = 1.0;  // product of sampled-branch probabilities
};

struct DecodeOptions {
    bool strict_priors = false;  // abort instead of falling back to prior 1/2
};

/// Quantum successive-cancellation decoder with square-root measurements at
/// information indices and post-measurement state updates
/// rho -> sqrt(Lambda) rho sqrt(Lambda) / Tr{Lambda rho}.
DecodeTrace sc_decode(const MemoryCell& cell, const ProbeState& probe, const SourceModel& model,
                      const CodeConstruction& construction, const FrozenMaps& maps,
                      const BitVector& true_u, std::uint64_t rng_seed,
                      const DecodeOptions& options = {});

/// (1 + c + 1/c)/2 * sum_{i in A} Z_i; minimized at c = 1.
double union_bound_rhs(const PolarizationProfile& profile, const std::vector<int>& info_set,
                       double c);

struct TrialRecord {
    int trial = 0;
    bool success = false;
    int first_error_index = 0;
};

struct MonteCarloResult {
    int trials = 0;
    int errors = 0;
    double error_rate = 0.0;
    double wilson_low = 0.0;
    double wilson_high = 0.0;
    std::vector<TrialRecord> per_trial;
};

/// Seeded block-error simulation; per-trial seeds are derived from
/// master_seed by counter, so results are reproducible and independent of
/// the worker thread count.
MonteCarloResult monte_carlo_error(const MemoryCell& cell, const ProbeState& probe,
                                   const SourceModel& model,
                                   const CodeConstruction& construction, const FrozenMaps& maps,
                                   int trials, std::uint64_t master_seed);

/// Wilson 95% score interval for a binomial proportion.
std::pair<double, double> wilson_interval(int errors, int trials);

/// Worker threads used by trial-parallel loops; capped by the
/// POLAR_READING_THREADS environment variable.
int worker_thread_count();

}  // namespace qread
