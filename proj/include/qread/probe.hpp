#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "qread/cell.hpp"

namespace qread {

enum class ProbeObjectiveKind {
    Rate,  // I(W)_rho
    Gap,   // I(W^+)_rho - I(W^-)_rho with the i.i.d.-U model
};

double evaluate_objective(const MemoryCell& cell, const ProbeState& probe,
                          ProbeObjectiveKind objective);

struct ProbeOptimum {
    std::array<double, 3> best_bloch{0.0, 0.0, 0.0};
    double best_value = 0.0;
    double bloch_radius = 0.0;
    bool degenerate = false;
    std::vector<std::pair<std::array<double, 3>, double>> trajectory;
};

/// Coarse grid over the closed Bloch ball followed by Nelder-Mead
/// refinement projected back to the ball; deterministic given the seed.
ProbeOptimum optimize_probe(const MemoryCell& cell, ProbeObjectiveKind objective,
                            int grid_per_axis = 21, int refine_iters = 200,
                            std::uint64_t seed = 0);

enum class SweepAxis { Z, XZPlane };

struct SweepRow {
    double rx = 0.0;
    double ry = 0.0;
    double rz = 0.0;
    double value = 0.0;
};

/// Deterministic objective samples along the z axis or over the xz plane
/// (polar sampling: `samples` directions times `samples` radii).
std::vector<SweepRow> probe_sweep(const MemoryCell& cell, ProbeObjectiveKind objective,
                                  SweepAxis axis, int samples);

/// True when the two channels produce the same output at a generic
/// reference probe, i.e. Z attains its maximum 2 sqrt(p(1-p)).
bool cell_is_degenerate(const MemoryCell& cell);

}  // namespace qread
