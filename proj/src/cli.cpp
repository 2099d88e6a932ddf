#include "qread/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qread/analysis.hpp"
#include "qread/code.hpp"
#include "qread/decode.hpp"
#include "qread/random_instances.hpp"
#include "qread/rng.hpp"

namespace qread {

using json = nlohmann::ordered_json;

namespace {

void reject_unknown_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& item : obj.items()) {
        if (allowed.find(item.key()) == allowed.end()) {
            throw std::invalid_argument("config: unknown key \"" + item.key() + "\" in " + where);
        }
    }
}

Matrix parse_complex_matrix(const nlohmann::json& rows) {
    const int r = static_cast<int>(rows.size());
    if (r == 0) {
        throw std::invalid_argument("config: empty Kraus matrix");
    }
    const int c = static_cast<int>(rows.at(0).size());
    Matrix m(r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows.at(i).size()) != c) {
            throw std::invalid_argument("config: ragged Kraus matrix");
        }
        for (int j = 0; j < c; ++j) {
            const auto& entry = rows.at(i).at(j);
            if (!entry.is_array() || entry.size() != 2) {
                throw std::invalid_argument("config: matrix entries must be [re, im] pairs");
            }
            m(i, j) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
        }
    }
    return m;
}

std::vector<Matrix> parse_kraus_list(const nlohmann::json& list) {
    std::vector<Matrix> out;
    for (const auto& mat : list) {
        out.push_back(parse_complex_matrix(mat));
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    f << content;
}

std::filesystem::path prepare_out_dir(const ExperimentConfig& config) {
    std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

struct CheckResult {
    std::string name;
    int instances = 0;
    int failures = 0;
    double worst_margin = -1e300;
    double tolerance = 1e-9;

    bool pass() const { return failures == 0; }
    void record(double margin) {
        ++instances;
        worst_margin = std::max(worst_margin, margin);
        if (margin > tolerance) {
            ++failures;
        }
    }
};

json check_to_json(const CheckResult& c) {
    json j;
    j["name"] = c.name;
    j["instances"] = c.instances;
    j["failures"] = c.failures;
    j["worst_margin"] = c.worst_margin;
    j["tolerance"] = c.tolerance;
    j["pass"] = c.pass();
    return j;
}

}  // namespace

MemoryCell CellSpec::build() const {
    if (type == Type::Ad) {
        return ad_cell(gamma0, gamma1, prior_p);
    }
    return MemoryCell(KrausChannel(ops0), KrausChannel(ops1), prior_p);
}

double ExperimentConfig::resolved_zsrc_threshold() const {
    return zsrc_threshold ? *zsrc_threshold : default_zsrc_threshold(n, beta);
}

ExperimentConfig parse_config(const nlohmann::json& doc) {
    ExperimentConfig cfg;
    reject_unknown_keys(doc,
                        {"cell", "probe", "model", "n", "beta", "target_rate", "z_threshold",
                         "zsrc_threshold", "frozen_seed", "master_seed", "probe_seed",
                         "verify_seed", "trials", "objective", "grid_per_axis", "refine_iters",
                         "sweep_axis", "sweep_samples", "verify_instances", "out_dir"},
                        "config root");

    if (doc.contains("cell")) {
        const auto& cell = doc.at("cell");
        const std::string type = cell.at("type").get<std::string>();
        if (type == "ad") {
            reject_unknown_keys(cell, {"type", "gamma0", "gamma1", "prior_p"}, "cell");
            cfg.cell.type = CellSpec::Type::Ad;
            cfg.cell.gamma0 = cell.at("gamma0").get<double>();
            cfg.cell.gamma1 = cell.at("gamma1").get<double>();
            cfg.cell.prior_p = cell.at("prior_p").get<double>();
        } else if (type == "kraus") {
            reject_unknown_keys(cell, {"type", "ops0", "ops1", "prior_p"}, "cell");
            cfg.cell.type = CellSpec::Type::Kraus;
            cfg.cell.ops0 = parse_kraus_list(cell.at("ops0"));
            cfg.cell.ops1 = parse_kraus_list(cell.at("ops1"));
            cfg.cell.prior_p = cell.at("prior_p").get<double>();
        } else {
            throw std::invalid_argument("config: cell type must be \"ad\" or \"kraus\"");
        }
    }
    if (doc.contains("probe")) {
        const auto& probe = doc.at("probe");
        reject_unknown_keys(probe, {"bloch"}, "probe");
        const auto& bloch = probe.at("bloch");
        if (!bloch.is_array() || bloch.size() != 3) {
            throw std::invalid_argument("config: probe.bloch must be [x, y, z]");
        }
        cfg.probe = ProbeState(bloch.at(0).get<double>(), bloch.at(1).get<double>(),
                               bloch.at(2).get<double>());
    }
    if (doc.contains("model")) {
        const std::string kind = doc.at("model").get<std::string>();
        if (kind == "iid_u") {
            cfg.model = SourceKind::IidU;
        } else if (kind == "induced") {
            cfg.model = SourceKind::InducedFromIidX;
        } else {
            throw std::invalid_argument("config: model must be \"iid_u\" or \"induced\"");
        }
    }
    if (doc.contains("n")) cfg.n = doc.at("n").get<int>();
    if (doc.contains("beta")) cfg.beta = doc.at("beta").get<double>();
    if (doc.contains("target_rate")) cfg.target_rate = doc.at("target_rate").get<double>();
    if (doc.contains("z_threshold")) cfg.z_threshold = doc.at("z_threshold").get<double>();
    if (doc.contains("zsrc_threshold")) cfg.zsrc_threshold = doc.at("zsrc_threshold").get<double>();
    if (doc.contains("frozen_seed")) cfg.frozen_seed = doc.at("frozen_seed").get<std::uint64_t>();
    if (doc.contains("master_seed")) cfg.master_seed = doc.at("master_seed").get<std::uint64_t>();
    if (doc.contains("probe_seed")) cfg.probe_seed = doc.at("probe_seed").get<std::uint64_t>();
    if (doc.contains("verify_seed")) cfg.verify_seed = doc.at("verify_seed").get<std::uint64_t>();
    if (doc.contains("trials")) cfg.trials = doc.at("trials").get<int>();
    if (doc.contains("objective")) {
        const std::string obj = doc.at("objective").get<std::string>();
        if (obj == "rate") {
            cfg.objective = ProbeObjectiveKind::Rate;
        } else if (obj == "gap") {
            cfg.objective = ProbeObjectiveKind::Gap;
        } else {
            throw std::invalid_argument("config: objective must be \"rate\" or \"gap\"");
        }
    }
    if (doc.contains("grid_per_axis")) cfg.grid_per_axis = doc.at("grid_per_axis").get<int>();
    if (doc.contains("refine_iters")) cfg.refine_iters = doc.at("refine_iters").get<int>();
    if (doc.contains("sweep_axis")) {
        const std::string axis = doc.at("sweep_axis").get<std::string>();
        if (axis == "z") {
            cfg.sweep_axis = SweepAxis::Z;
        } else if (axis == "xz-plane") {
            cfg.sweep_axis = SweepAxis::XZPlane;
        } else {
            throw std::invalid_argument("config: sweep_axis must be \"z\" or \"xz-plane\"");
        }
    }
    if (doc.contains("sweep_samples")) cfg.sweep_samples = doc.at("sweep_samples").get<int>();
    if (doc.contains("verify_instances"))
        cfg.verify_instances = doc.at("verify_instances").get<int>();
    if (doc.contains("out_dir")) cfg.out_dir = doc.at("out_dir").get<std::string>();
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw std::runtime_error("cannot open config file " + path);
    }
    nlohmann::json doc;
    f >> doc;
    return parse_config(doc);
}

std::string format_double(double v) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) {
            break;
        }
    }
    return buf;
}

int cmd_transform(int n, std::ostream& out) {
    const PolarTransform t = polar_transform(n);
    for (const BitVector& row : t.rows) {
        std::string line;
        line.reserve(row.size());
        for (std::uint8_t b : row) {
            line.push_back(b ? '1' : '0');
        }
        out << line << "\n";
    }
    return 0;
}

int cmd_polarize(const ExperimentConfig& config, std::ostream& out) {
    const auto dir = prepare_out_dir(config);
    const MemoryCell cell = config.cell.build();
    const SourceModel model{config.model, config.cell.prior_p};
    const int N = 1 << config.n;
    const PolarizationProfile profile =
        polarization_profile(cell, config.probe, model, N, config.beta);

    std::ostringstream csv;
    csv << "index,i_rate_bits,z_reliability,z_source,is_good,is_bad\n";
    for (const ProfileRow& row : profile.rows) {
        csv << row.index << ',' << format_double(row.rate_bits) << ','
            << format_double(row.z_reliability) << ',' << format_double(row.z_source) << ','
            << (row.is_good ? 1 : 0) << ',' << (row.is_bad ? 1 : 0) << "\n";
    }
    write_text_file(dir / "profile.csv", csv.str());

    json summary;
    summary["n"] = config.n;
    summary["block_length"] = N;
    summary["beta"] = config.beta;
    summary["threshold"] = std::exp2(beta_threshold_log2(config.n, config.beta));
    summary["good_count"] = profile.good_count;
    summary["bad_count"] = profile.bad_count;
    summary["good_fraction"] = static_cast<double>(profile.good_count) / N;
    summary["bad_fraction"] = static_cast<double>(profile.bad_count) / N;
    write_text_file(dir / "polarize_summary.json", summary.dump(2) + "\n");

    out << "polarize: N=" << N << " good=" << profile.good_count << " bad=" << profile.bad_count
        << "\n";
    return 0;
}

int cmd_construct(const ExperimentConfig& config, std::ostream& out) {
    const auto dir = prepare_out_dir(config);
    const MemoryCell cell = config.cell.build();
    const SourceModel model{config.model, config.cell.prior_p};
    const int N = 1 << config.n;
    const PolarizationProfile profile =
        polarization_profile(cell, config.probe, model, N, config.beta);
    const CodeConstruction construction =
        select_information_set(profile, config.target_rate, config.z_threshold,
                               config.resolved_zsrc_threshold(), config.frozen_seed);

    json j;
    j["n"] = config.n;
    j["info_set"] = construction.info_set;
    j["target_rate"] = construction.target_rate;
    j["z_threshold"] = construction.z_threshold;
    j["zsrc_threshold"] = construction.zsrc_threshold;
    j["frozen_seed"] = construction.frozen_seed;
    write_text_file(dir / "construction.json", j.dump(2) + "\n");

    out << "construct: |A|=" << construction.info_set.size() << " achieved_rate="
        << format_double(construction.achieved_rate()) << "\n";
    return 0;
}

int cmd_simulate(const ExperimentConfig& config, std::ostream& out) {
    if (config.trials < 1) {
        throw std::invalid_argument("simulate: trials must be >= 1");
    }
    const auto dir = prepare_out_dir(config);
    const MemoryCell cell = config.cell.build();
    const SourceModel model{config.model, config.cell.prior_p};
    const int N = 1 << config.n;
    const PolarizationProfile profile =
        polarization_profile(cell, config.probe, model, N, config.beta);
    const CodeConstruction construction =
        select_information_set(profile, config.target_rate, config.z_threshold,
                               config.resolved_zsrc_threshold(), config.frozen_seed);
    const FrozenMaps maps = sample_frozen_maps(model, construction);
    const MonteCarloResult mc = monte_carlo_error(cell, config.probe, model, construction, maps,
                                                  config.trials, config.master_seed);

    std::ostringstream csv;
    csv << "trial,success,first_error_index\n";
    for (const TrialRecord& rec : mc.per_trial) {
        csv << rec.trial << ',' << (rec.success ? 1 : 0) << ',' << rec.first_error_index << "\n";
    }
    write_text_file(dir / "trials.csv", csv.str());

    json summary;
    summary["n"] = config.n;
    summary["rate"] = construction.achieved_rate();
    summary["trials"] = mc.trials;
    summary["errors"] = mc.errors;
    summary["error_rate"] = mc.error_rate;
    summary["wilson_low"] = mc.wilson_low;
    summary["wilson_high"] = mc.wilson_high;
    summary["union_bound_c1"] = union_bound_rhs(profile, construction.info_set, 1.0);
    write_text_file(dir / "simulate_summary.json", summary.dump(2) + "\n");

    out << "simulate: trials=" << mc.trials << " errors=" << mc.errors
        << " error_rate=" << format_double(mc.error_rate) << "\n";
    return 0;
}

int cmd_probe_opt(const ExperimentConfig& config, std::ostream& out) {
    const auto dir = prepare_out_dir(config);
    const MemoryCell cell = config.cell.build();
    const ProbeOptimum opt = optimize_probe(cell, config.objective, config.grid_per_axis,
                                            config.refine_iters, config.probe_seed);

    json j;
    j["objective"] = config.objective == ProbeObjectiveKind::Rate ? "rate" : "gap";
    j["best_bloch"] = {opt.best_bloch[0], opt.best_bloch[1], opt.best_bloch[2]};
    j["best_value"] = opt.best_value;
    j["bloch_radius"] = opt.bloch_radius;
    j["degenerate"] = opt.degenerate;
    j["grid_per_axis"] = config.grid_per_axis;
    j["refine_iters"] = config.refine_iters;
    j["seed"] = config.probe_seed;
    j["trajectory"] = json::array();
    for (const auto& [bloch, value] : opt.trajectory) {
        j["trajectory"].push_back({bloch[0], bloch[1], bloch[2], value});
    }
    write_text_file(dir / "probe_optimum.json", j.dump(2) + "\n");

    const std::vector<SweepRow> sweep =
        probe_sweep(cell, config.objective, config.sweep_axis, config.sweep_samples);
    std::ostringstream csv;
    csv << "rx,ry,rz,objective_value\n";
    for (const SweepRow& row : sweep) {
        csv << format_double(row.rx) << ',' << format_double(row.ry) << ','
            << format_double(row.rz) << ',' << format_double(row.value) << "\n";
    }
    write_text_file(dir / "probe_sweep.csv", csv.str());

    out << "probe-opt: best_value=" << format_double(opt.best_value)
        << " radius=" << format_double(opt.bloch_radius)
        << (opt.degenerate ? " (degenerate cell)" : "") << "\n";
    return 0;
}

int cmd_verify(const ExperimentConfig& config, std::ostream& out) {
    const auto dir = prepare_out_dir(config);
    const int instances = config.verify_instances;
    SplitMix64 rng(config.verify_seed);

    CheckResult rates_sum{"one_step_rates_sum"};
    CheckResult rates_plus{"one_step_rate_plus_ge_rate"};
    CheckResult chain_half{"chain_rule_equality_p_half"};
    CheckResult zplus_square{"z_plus_square_p_half"};
    CheckResult zminus_bound{"z_minus_two_z_bound_p_half"};
    CheckResult plus_identity{"z_plus_identity_general_p"};
    CheckResult sandwich{"rate_reliability_sandwich"};
    CheckResult pgm{"pgm_error_half_z"};
    CheckResult lift_rate{"symmetric_lift_rate_identity"};
    CheckResult trace_out{"trace_out_correspondence"};
    CheckResult z_equal{"z_equality_lift_vs_asymmetric"};

    for (int t = 0; t < instances; ++t) {
        const MemoryCell cell = random_qubit_cell(rng);
        const ProbeState probe = random_probe(rng);
        const CqEnsemble e = cq_view(cell, probe);
        const OneStepReport r = one_step_report(e);
        const double p = e.prior_p;

        rates_sum.record(r.rate_minus + r.rate_plus - 2.0 * r.rate);
        rates_plus.record(r.rate - r.rate_plus);
        const double f = fidelity(e.state0, e.state1);
        plus_identity.record(std::abs(r.z_plus - r.z * f));

        const RateBounds bounds = rate_reliability_bounds(p, r.z);
        const double roga = roga_upper_bound(p, r.z);
        double worst = bounds.lower - r.rate;
        worst = std::max(worst, r.rate - std::min(bounds.upper, roga));
        worst = std::max(worst, holevo_lower_bound(e) - r.rate);
        sandwich.record(worst);

        // symmetric-prior variant of the same cell
        const CqEnsemble es(0.5, e.state0, e.state1);
        const OneStepReport rs = one_step_report(es);
        chain_half.record(std::abs(rs.rate_minus + rs.rate_plus - 2.0 * rs.rate));
        zplus_square.record(std::abs(rs.z_plus - rs.z * rs.z));
        zminus_bound.record(rs.z_minus - (2.0 * rs.z - rs.z * rs.z));

        const SymmetricLift lift = symmetric_lift(e);
        const double h_xb = von_neumann_entropy(joint_state(e));
        const double h_b = detail::entropy_bits(p * e.state0.matrix() +
                                                (1.0 - p) * e.state1.matrix());
        lift_rate.record(std::abs(rate(lift.lifted) - (1.0 - (h_xb - h_b))));

        const int dim = 2 + static_cast<int>(rng.uniform() * 7);  // 2..8
        const CqEnsemble ens = random_cq_ensemble(rng, dim);
        const std::vector<double> priors{ens.prior_p, 1.0 - ens.prior_p};
        const std::vector<DensityOperator> states{ens.state0, ens.state1};
        const Povm povm = square_root_measurement(priors, states);
        const double err = 1.0 - povm_success_probability(povm, priors, states);
        pgm.record(err - 0.5 * reliability(ens));
    }

    // The lift correspondence is exact but costly; checked on a fixed small
    // set of cells at every block length and index in range.
    for (int c = 0; c < 3; ++c) {
        const MemoryCell cell = random_qubit_cell(rng, 0.1, 0.9);
        const ProbeState probe = random_probe(rng);
        const SourceModel induced{SourceKind::InducedFromIidX, cell.prior_p};
        const CqEnsemble e = cq_view(cell, probe);
        const SymmetricLift lift = symmetric_lift(e);
        const SourceModel uniform{SourceKind::IidU, 0.5};
        for (int N : {1, 2, 4}) {
            for (int i = 1; i <= N; ++i) {
                trace_out.record(
                    trace_out_correspondence(cell, probe, induced, N, i).max_relative_deviation);
                if (N >= 2) {
                    const double za = synthesized_reliability_pair(
                        e.state0.matrix(), e.state1.matrix(), induced, N, i);
                    const double zl = synthesized_reliability_pair(
                        lift.lifted.state0.matrix(), lift.lifted.state1.matrix(), uniform, N, i);
                    z_equal.record(std::abs(za - zl));
                }
            }
        }
    }

    const std::vector<CheckResult> checks{rates_sum,  rates_plus, chain_half, zplus_square,
                                          zminus_bound, plus_identity, sandwich, pgm,
                                          lift_rate,  trace_out,  z_equal};
    bool all_pass = true;
    json report;
    report["seed"] = config.verify_seed;
    report["instances"] = instances;
    report["checks"] = json::array();
    for (const CheckResult& c : checks) {
        report["checks"].push_back(check_to_json(c));
        all_pass = all_pass && c.pass();
        out << (c.pass() ? "pass" : "FAIL") << "  " << c.name << "  worst_margin="
            << format_double(c.worst_margin) << " over " << c.instances << " instances\n";
    }
    report["all_pass"] = all_pass;
    write_text_file(dir / "verify_report.json", report.dump(2) + "\n");
    return all_pass ? 0 : 1;
}

}  // namespace qread
