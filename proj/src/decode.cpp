#include "qread/decode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <thread>

#include "qread/rng.hpp"

namespace qread {

namespace {

constexpr double kRelativeSupportCut = 1e-12;
constexpr std::size_t kMeasurementCacheCap = 256;

struct BinaryMeasurement {
    Matrix lambda0, lambda1;
    Matrix sqrt0, sqrt1;
    double prior0 = 0.5;
    bool fallback = false;
};

Matrix completed_residue(const Matrix& sum, int dim) {
    return Matrix::Identity(dim, dim) - sum;
}

BinaryMeasurement build_measurement(const Matrix& s0, const Matrix& s1, const SourceModel& model,
                                    int block_length, int index, const BitVector& prefix,
                                    bool strict) {
    BinaryMeasurement m;
    const SynthesizedChannelView view = [&]() {
        try {
            return synthesize_pair(s0, s1, model, block_length, index, prefix);
        } catch (const std::invalid_argument&) {
            if (strict) {
                throw;
            }
            // Decoded prefix has probability zero under the model; keep the
            // run alive with a uniform conditional law and record the fallback.
            m.fallback = true;
            return synthesize_pair(s0, s1, SourceModel{SourceKind::IidU, 0.5}, block_length,
                                   index, prefix);
        }
    }();
    m.prior0 = view.cond_prior;
    const Matrix& r0 = view.cond_state0.matrix();
    const Matrix& r1 = view.cond_state1.matrix();
    const Matrix avg = m.prior0 * r0 + (1.0 - m.prior0) * r1;
    const double top = detail::eigenvalues_herm(avg).maxCoeff();
    const Matrix inv_sqrt = detail::pinv_sqrt_m(avg, kRelativeSupportCut * top);
    m.lambda0 = detail::sandwich_product(inv_sqrt, m.prior0 * r0);
    m.lambda1 = detail::sandwich_product(inv_sqrt, (1.0 - m.prior0) * r1);
    const Matrix residue = completed_residue(m.lambda0 + m.lambda1, static_cast<int>(r0.rows()));
    if (m.prior0 >= 0.5) {
        m.lambda0 += residue;
    } else {
        m.lambda1 += residue;
    }
    m.sqrt0 = detail::sqrt_psd(m.lambda0);
    m.sqrt1 = detail::sqrt_psd(m.lambda1);
    return m;
}

using MeasurementCache = std::map<std::pair<int, std::uint64_t>, BinaryMeasurement>;

/// Walks the reachable decoded-prefix tree and precomputes every binary
/// measurement the decoder can request. Reachable prefixes branch only at
/// information indices, so the tree stays small at low rates.
MeasurementCache precompute_measurements(const Matrix& s0, const Matrix& s1,
                                         const SourceModel& model,
                                         const CodeConstruction& construction,
                                         const FrozenMaps& maps, bool& usable) {
    MeasurementCache cache;
    usable = true;
    const int N = construction.block_length;
    std::vector<BitVector> reachable{BitVector{}};
    for (int i = 1; i <= N; ++i) {
        if (construction.is_info(i)) {
            if (cache.size() + reachable.size() > kMeasurementCacheCap) {
                usable = false;
                return {};
            }
            std::vector<BitVector> next;
            next.reserve(reachable.size() * 2);
            for (const BitVector& prefix : reachable) {
                cache.emplace(std::make_pair(i, detail::pack_bits(prefix)),
                              build_measurement(s0, s1, model, N, i, prefix, false));
                BitVector a = prefix;
                a.push_back(0);
                next.push_back(std::move(a));
                BitVector b = prefix;
                b.push_back(1);
                next.push_back(std::move(b));
            }
            reachable = std::move(next);
        } else {
            for (BitVector& prefix : reachable) {
                prefix.push_back(maps.evaluate(i, prefix));
            }
        }
    }
    return cache;
}

DecodeTrace decode_once(const Matrix& s0, const Matrix& s1, const SourceModel& model,
                        const CodeConstruction& construction, const FrozenMaps& maps,
                        const BitVector& true_u, std::uint64_t rng_seed,
                        const DecodeOptions& options, const MeasurementCache* cache) {
    const int N = construction.block_length;
    if (static_cast<int>(true_u.size()) != N) {
        throw std::invalid_argument("sc_decode: true_u length does not match block length");
    }
    if (N > kMaxExactBlock) {
        throw std::invalid_argument("sc_decode: block length exceeds exact cap " +
                                    std::to_string(kMaxExactBlock));
    }

    int n = 0;
    while ((1 << n) < N) {
        ++n;
    }
    const BitVector x = encode_bits(true_u, polar_transform(n));
    Matrix rho = detail::product_output(s0, s1, x);

    const int last_info =
        construction.info_set.empty() ? 0 : construction.info_set.back();

    SplitMix64 rng(rng_seed);
    DecodeTrace trace;
    trace.decoded.reserve(N);
    BitVector prefix;
    prefix.reserve(N);

    for (int i = 1; i <= N; ++i) {
        DecodeStep step;
        step.index = i;
        if (!construction.is_info(i)) {
            step.kind = StepKind::Frozen;
            const std::uint8_t bit = maps.evaluate(i, prefix);
            step.prob0 = bit == 0 ? 1.0 : 0.0;
            step.prob1 = 1.0 - step.prob0;
            step.outcome = bit;
        } else {
            step.kind = StepKind::Info;
            const BinaryMeasurement* m = nullptr;
            BinaryMeasurement local;
            if (cache != nullptr) {
                const auto it = cache->find({i, detail::pack_bits(prefix)});
                if (it != cache->end()) {
                    m = &it->second;
                }
            }
            if (m == nullptr) {
                try {
                    local = build_measurement(s0, s1, model, N, i, prefix, options.strict_priors);
                } catch (const std::invalid_argument&) {
                    trace.aborted = true;
                    trace.success = false;
                    if (trace.first_error_index == 0) {
                        trace.first_error_index = i;
                    }
                    return trace;
                }
                m = &local;
            }
            trace.used_prior_fallback = trace.used_prior_fallback || m->fallback;

            const double p0 = std::max(0.0, detail::trace_product_herm(m->lambda0, rho));
            const double p1 = std::max(0.0, detail::trace_product_herm(m->lambda1, rho));
            step.prob0 = p0;
            step.prob1 = p1;
            const double total = p0 + p1;
            const int outcome = rng.uniform() * total < p0 ? 0 : 1;
            step.outcome = outcome;
            // The post-measurement state only matters while measurements
            // remain ahead of us.
            if (i < last_info) {
                const Matrix& root = outcome == 0 ? m->sqrt0 : m->sqrt1;
                const double norm = outcome == 0 ? p0 : p1;
                rho = detail::sandwich_product(root, rho) / norm;
            }
        }
        trace.path_probability *= step.outcome == 0 ? step.prob0 : step.prob1;
        trace.decoded.push_back(static_cast<std::uint8_t>(step.outcome));
        prefix.push_back(static_cast<std::uint8_t>(step.outcome));
        if (trace.first_error_index == 0 && trace.decoded[i - 1] != true_u[i - 1]) {
            trace.first_error_index = i;
        }
        trace.steps.push_back(step);
    }
    trace.success = trace.first_error_index == 0;
    return trace;
}

}  // namespace

Povm square_root_measurement(const std::vector<double>& priors,
                             const std::vector<DensityOperator>& states) {
    if (priors.size() != states.size() || states.empty()) {
        throw std::invalid_argument("square_root_measurement: priors/states size mismatch");
    }
    double total = 0.0;
    for (double p : priors) {
        if (p < 0.0) {
            throw std::invalid_argument("square_root_measurement: negative prior");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("square_root_measurement: priors sum to " +
                                    std::to_string(total));
    }
    const int dim = states.front().dim();
    Matrix avg = Matrix::Zero(dim, dim);
    for (std::size_t u = 0; u < states.size(); ++u) {
        if (states[u].dim() != dim) {
            throw std::invalid_argument("square_root_measurement: state dimension mismatch");
        }
        avg += priors[u] * states[u].matrix();
    }
    const double top = detail::eigenvalues_herm(avg).maxCoeff();
    const Matrix inv_sqrt = detail::pinv_sqrt_m(avg, kRelativeSupportCut * std::max(top, 0.0));

    std::vector<Matrix> elements;
    elements.reserve(states.size());
    Matrix sum = Matrix::Zero(dim, dim);
    for (std::size_t u = 0; u < states.size(); ++u) {
        Matrix lam = inv_sqrt * (priors[u] * states[u].matrix()) * inv_sqrt;
        sum += lam;
        elements.push_back(std::move(lam));
    }
    const std::size_t largest =
        std::distance(priors.begin(), std::max_element(priors.begin(), priors.end()));
    elements[largest] += completed_residue(sum, dim);

    Povm povm;
    for (Matrix& lam : elements) {
        const double min_eig = detail::eigenvalues_herm(lam).minCoeff();
        if (min_eig < -1e-10) {
            throw std::runtime_error("square_root_measurement: element not PSD");
        }
        povm.elements.push_back(HermitianOperator::trusted(std::move(lam)));
    }
    Matrix check = Matrix::Zero(dim, dim);
    for (const HermitianOperator& el : povm.elements) {
        check += el.matrix();
    }
    if ((check - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-9) {
        throw std::runtime_error("square_root_measurement: elements do not sum to identity");
    }
    return povm;
}

double povm_success_probability(const Povm& povm, const std::vector<double>& priors,
                                const std::vector<DensityOperator>& states) {
    double succ = 0.0;
    for (std::size_t u = 0; u < states.size(); ++u) {
        succ += priors[u] * detail::trace_product_herm(povm.elements[u].matrix(),
                                                       states[u].matrix());
    }
    return succ;
}

double barnum_knill_bound(const std::vector<double>& priors,
                          const std::vector<DensityOperator>& states) {
    double bound = 0.0;
    for (std::size_t u = 0; u < states.size(); ++u) {
        for (std::size_t v = u + 1; v < states.size(); ++v) {
            bound += 2.0 * std::sqrt(priors[u] * priors[v]) * fidelity(states[u], states[v]);
        }
    }
    return bound;
}

DecodeTrace sc_decode(const MemoryCell& cell, const ProbeState& probe, const SourceModel& model,
                      const CodeConstruction& construction, const FrozenMaps& maps,
                      const BitVector& true_u, std::uint64_t rng_seed,
                      const DecodeOptions& options) {
    const CqEnsemble e = cq_view(cell, probe);
    return decode_once(e.state0.matrix(), e.state1.matrix(), model, construction, maps, true_u,
                       rng_seed, options, nullptr);
}

double union_bound_rhs(const PolarizationProfile& profile, const std::vector<int>& info_set,
                       double c) {
    if (!(c > 0.0)) {
        throw std::invalid_argument("union_bound_rhs: c must be positive");
    }
    const double gamma = 0.5 * (1.0 + c + 1.0 / c);
    double sum = 0.0;
    for (int i : info_set) {
        if (i < 1 || i > profile.block_length) {
            throw std::invalid_argument("union_bound_rhs: index outside profile");
        }
        sum += profile.rows[i - 1].z_reliability;
    }
    return gamma * sum;
}

MonteCarloResult monte_carlo_error(const MemoryCell& cell, const ProbeState& probe,
                                   const SourceModel& model,
                                   const CodeConstruction& construction, const FrozenMaps& maps,
                                   int trials, std::uint64_t master_seed) {
    if (trials < 1) {
        throw std::invalid_argument("monte_carlo_error: trials must be >= 1");
    }
    const CqEnsemble e = cq_view(cell, probe);
    const Matrix s0 = e.state0.matrix();
    const Matrix s1 = e.state1.matrix();

    bool cache_usable = false;
    const MeasurementCache cache =
        precompute_measurements(s0, s1, model, construction, maps, cache_usable);
    const MeasurementCache* cache_ptr = cache_usable ? &cache : nullptr;

    MonteCarloResult result;
    result.trials = trials;
    result.per_trial.resize(trials);

    const std::size_t msg_len = construction.info_set.size();
    auto run_range = [&](int begin, int end) {
        for (int t = begin; t < end; ++t) {
            const std::uint64_t trial_seed = mix_u64(master_seed, static_cast<std::uint64_t>(t));
            SplitMix64 rng(trial_seed);
            BitVector msg(msg_len);
            for (std::size_t k = 0; k < msg_len; ++k) {
                msg[k] = rng.uniform() < 0.5 ? 0 : 1;
            }
            const EncodeResult enc = encode_message(msg, construction, maps);
            const DecodeTrace trace =
                decode_once(s0, s1, model, construction, maps, enc.u,
                            mix_u64(trial_seed, 0x5C0DEull), DecodeOptions{}, cache_ptr);
            result.per_trial[t] = TrialRecord{t, trace.success, trace.first_error_index};
        }
    };

    const int workers = std::min(worker_thread_count(), trials);
    if (workers <= 1) {
        run_range(0, trials);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (trials + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int begin = w * chunk;
            const int end = std::min(trials, begin + chunk);
            if (begin < end) {
                pool.emplace_back(run_range, begin, end);
            }
        }
        for (std::thread& th : pool) {
            th.join();
        }
    }

    for (const TrialRecord& rec : result.per_trial) {
        result.errors += rec.success ? 0 : 1;
    }
    result.error_rate = static_cast<double>(result.errors) / trials;
    const auto [lo, hi] = wilson_interval(result.errors, trials);
    result.wilson_low = lo;
    result.wilson_high = hi;
    return result;
}

std::pair<double, double> wilson_interval(int errors, int trials) {
    const double z = 1.959963984540054;
    const double n = trials;
    const double phat = errors / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

int worker_thread_count() {
    int count = static_cast<int>(std::thread::hardware_concurrency());
    if (count < 1) {
        count = 1;
    }
    if (const char* env = std::getenv("POLAR_READING_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) {
            count = std::min(count, cap);
        }
    }
    return count;
}

}  // namespace qread
