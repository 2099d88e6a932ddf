#pragma once

#include <cstdint>

#include "qread/cell.hpp"
#include "qread/rng.hpp"

namespace qread {

/// Random density operator of the given dimension and rank (Gaussian
/// Wishart, normalized).
DensityOperator random_density(SplitMix64& rng, int dim, int rank);

/// Random CPTP qubit channel from a Haar-ish Stinespring isometry with a
/// two-dimensional environment.
KrausChannel random_kraus_channel(SplitMix64& rng, int dim = 2);

/// Random qubit memory cell with prior drawn from [p_lo, p_hi].
MemoryCell random_qubit_cell(SplitMix64& rng, double p_lo = 0.05, double p_hi = 0.95);

/// Bloch vector drawn uniformly from the closed ball.
ProbeState random_probe(SplitMix64& rng);

/// Random binary cq ensemble (direct output-state pair).
CqEnsemble random_cq_ensemble(SplitMix64& rng, int dim, double p_lo = 0.05, double p_hi = 0.95);

}  // namespace qread
