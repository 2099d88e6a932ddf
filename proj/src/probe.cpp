#include "qread/probe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qread/analysis.hpp"
#include "qread/polar.hpp"
#include "qread/rng.hpp"

namespace qread {

namespace {

using Vec3 = std::array<double, 3>;

double norm3(const Vec3& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

Vec3 project_to_ball(Vec3 v) {
    const double r = norm3(v);
    if (r > 1.0) {
        for (double& c : v) {
            c /= r;
        }
    }
    return v;
}

double objective_at(const MemoryCell& cell, ProbeObjectiveKind objective, const Vec3& v) {
    return evaluate_objective(cell, ProbeState(v[0], v[1], v[2]), objective);
}

}  // namespace

double evaluate_objective(const MemoryCell& cell, const ProbeState& probe,
                          ProbeObjectiveKind objective) {
    if (cell.channel0.in_dim() != 2) {
        throw std::invalid_argument("evaluate_objective: qubit cells only");
    }
    const CqEnsemble e = cq_view(cell, probe);
    if (objective == ProbeObjectiveKind::Rate) {
        return rate(e);
    }
    const OneStepPair pair = one_step_transform(e);
    return rate(pair.plus) - rate(pair.minus);
}

bool cell_is_degenerate(const MemoryCell& cell) {
    // Reference probe chosen away from every AD fixed point.
    const double s = 0.9 / std::sqrt(3.0);
    const CqEnsemble e = cq_view(cell, ProbeState(s, s, -s));
    const double z_max = 2.0 * std::sqrt(cell.prior_p * (1.0 - cell.prior_p));
    return z_max - reliability(e) <= 1e-12;
}

ProbeOptimum optimize_probe(const MemoryCell& cell, ProbeObjectiveKind objective,
                            int grid_per_axis, int refine_iters, std::uint64_t seed) {
    if (grid_per_axis < 3) {
        throw std::invalid_argument("optimize_probe: grid_per_axis must be >= 3");
    }
    ProbeOptimum out;
    if (cell_is_degenerate(cell)) {
        out.degenerate = true;
        out.best_bloch = {0.0, 0.0, 0.0};
        out.best_value = objective_at(cell, objective, out.best_bloch);
        out.bloch_radius = 0.0;
        return out;
    }

    Vec3 best{0.0, 0.0, 0.0};
    double best_value = -1e300;
    for (int ix = 0; ix < grid_per_axis; ++ix) {
        for (int iy = 0; iy < grid_per_axis; ++iy) {
            for (int iz = 0; iz < grid_per_axis; ++iz) {
                Vec3 v{-1.0 + 2.0 * ix / (grid_per_axis - 1),
                       -1.0 + 2.0 * iy / (grid_per_axis - 1),
                       -1.0 + 2.0 * iz / (grid_per_axis - 1)};
                if (norm3(v) > 1.0 + 1e-12) {
                    continue;
                }
                const double val = objective_at(cell, objective, v);
                if (val > best_value) {
                    best_value = val;
                    best = v;
                }
            }
        }
    }
    out.trajectory.push_back({best, best_value});

    // Nelder-Mead on the ball; evaluation projects points back inside, so
    // the simplex may straddle the boundary.
    SplitMix64 rng(seed);
    std::array<Vec3, 4> simplex;
    std::array<double, 4> values;
    simplex[0] = best;
    values[0] = best_value;
    for (int k = 1; k < 4; ++k) {
        Vec3 v = best;
        v[k - 1] += 0.08 * (0.5 + rng.uniform());
        v = project_to_ball(v);
        simplex[k] = v;
        values[k] = objective_at(cell, objective, v);
    }

    const double alpha = 1.0, gammae = 2.0, rhoc = 0.5, sigma = 0.5;
    for (int iter = 0; iter < refine_iters; ++iter) {
        std::array<int, 4> order{0, 1, 2, 3};
        std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] > values[b]; });
        std::array<Vec3, 4> sx;
        std::array<double, 4> sv;
        for (int k = 0; k < 4; ++k) {
            sx[k] = simplex[order[k]];
            sv[k] = values[order[k]];
        }
        simplex = sx;
        values = sv;
        if (values[0] - values[3] < 1e-10 && iter > 8) {
            break;
        }

        Vec3 centroid{0, 0, 0};
        for (int k = 0; k < 3; ++k) {
            for (int c = 0; c < 3; ++c) {
                centroid[c] += simplex[k][c] / 3.0;
            }
        }
        auto affine = [&](double t) {
            Vec3 v;
            for (int c = 0; c < 3; ++c) {
                v[c] = centroid[c] + t * (centroid[c] - simplex[3][c]);
            }
            return project_to_ball(v);
        };

        const Vec3 reflected = affine(alpha);
        const double fr = objective_at(cell, objective, reflected);
        if (fr > values[0]) {
            const Vec3 expanded = affine(gammae);
            const double fe = objective_at(cell, objective, expanded);
            if (fe > fr) {
                simplex[3] = expanded;
                values[3] = fe;
            } else {
                simplex[3] = reflected;
                values[3] = fr;
            }
        } else if (fr > values[2]) {
            simplex[3] = reflected;
            values[3] = fr;
        } else {
            const Vec3 contracted = affine(-rhoc);
            const double fc = objective_at(cell, objective, contracted);
            if (fc > values[3]) {
                simplex[3] = contracted;
                values[3] = fc;
            } else {
                for (int k = 1; k < 4; ++k) {
                    for (int c = 0; c < 3; ++c) {
                        simplex[k][c] = simplex[0][c] + sigma * (simplex[k][c] - simplex[0][c]);
                    }
                    simplex[k] = project_to_ball(simplex[k]);
                    values[k] = objective_at(cell, objective, simplex[k]);
                }
            }
        }
        const int top = static_cast<int>(
            std::distance(values.begin(), std::max_element(values.begin(), values.end())));
        if (values[top] > best_value) {
            best_value = values[top];
            best = simplex[top];
            out.trajectory.push_back({best, best_value});
        }
    }

    out.best_bloch = best;
    out.best_value = best_value;
    out.bloch_radius = norm3(best);
    return out;
}

std::vector<SweepRow> probe_sweep(const MemoryCell& cell, ProbeObjectiveKind objective,
                                  SweepAxis axis, int samples) {
    if (samples < 2) {
        throw std::invalid_argument("probe_sweep: samples must be >= 2");
    }
    std::vector<SweepRow> rows;
    if (axis == SweepAxis::Z) {
        rows.reserve(samples);
        for (int k = 0; k < samples; ++k) {
            const double t = -1.0 + 2.0 * k / (samples - 1);
            SweepRow row;
            row.rz = t;
            row.value = objective_at(cell, objective, {0.0, 0.0, t});
            rows.push_back(row);
        }
        return rows;
    }
    // xz plane in polar form: per direction, radii from the origin to the
    // boundary, so radial dominance can be read off directly.
    rows.reserve(static_cast<std::size_t>(samples) * samples);
    const double pi = 3.14159265358979323846;
    for (int a = 0; a < samples; ++a) {
        const double theta = 2.0 * pi * a / samples;
        for (int k = 0; k < samples; ++k) {
            const double r = static_cast<double>(k) / (samples - 1);
            SweepRow row;
            row.rx = r * std::sin(theta);
            row.rz = r * std::cos(theta);
            row.value = objective_at(cell, objective, {row.rx, 0.0, row.rz});
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace qread
