#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "qread/cell.hpp"
#include "qread/polar.hpp"
#include "qread/probe.hpp"

namespace qread {

/// Cell description as it appears in config files.
struct CellSpec {
    enum class Type { Ad, Kraus };
    Type type = Type::Ad;
    double gamma0 = 0.0;
    double gamma1 = 0.5;
    double prior_p = 0.5;
    std::vector<Matrix> ops0;  // Kraus form only
    std::vector<Matrix> ops1;

    MemoryCell build() const;
};

struct ExperimentConfig {
    CellSpec cell;
    ProbeState probe{0.0, 0.0, -1.0};
    SourceKind model = SourceKind::IidU;
    int n = 2;
    double beta = 0.49;
    double target_rate = 0.5;
    double z_threshold = 1.0;
    std::optional<double> zsrc_threshold;  // defaults to 1 - 2^{-2^{n beta}}
    std::uint64_t frozen_seed = 7;
    std::uint64_t master_seed = 99;
    std::uint64_t probe_seed = 5;
    std::uint64_t verify_seed = 11;
    int trials = 1000;
    ProbeObjectiveKind objective = ProbeObjectiveKind::Rate;
    int grid_per_axis = 21;
    int refine_iters = 200;
    SweepAxis sweep_axis = SweepAxis::Z;
    int sweep_samples = 41;
    int verify_instances = 100;
    std::string out_dir = "out";

    double resolved_zsrc_threshold() const;
};

/// Parses and schema-validates a config JSON document; unknown keys are
/// rejected with a diagnostic naming the offending key.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config_file(const std::string& path);

int cmd_transform(int n, std::ostream& out);
int cmd_polarize(const ExperimentConfig& config, std::ostream& out);
int cmd_construct(const ExperimentConfig& config, std::ostream& out);
int cmd_simulate(const ExperimentConfig& config, std::ostream& out);
int cmd_probe_opt(const ExperimentConfig& config, std::ostream& out);
int cmd_verify(const ExperimentConfig& config, std::ostream& out);

/// Fixed-format double used in CSV output (shortest round-trip).
std::string format_double(double v);

}  // namespace qread
