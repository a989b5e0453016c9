#pragma once

#include "warplab/metric.hpp"
#include "warplab/profinite.hpp"

namespace warplab {

/// 8-cycle with the arc metric, Z acting by rotation +1, generators
/// {id, +1, -1}.
WarpSystem<Rat> fix_a_z8_rot(const Rat& scale = Rat(1));

/// Exponential window: points (2^i, 2^j) for |i|,|j| <= W with the l1
/// metric of the realized values; Z^2 acts by coordinate doubling. Moves
/// that leave the window are omitted, so the system is truncated.
WarpSystem<Rat> fix_d_exp2_window(int window, const Rat& scale = Rat(1));

/// Point index of (2^i, 2^j) in fix_d_exp2_window.
int fix_d_index(int window, int i, int j);

/// Z with generators {+1,-1}, Gamma_n = 3^n Z: the tower Z/3 <- Z/9 <- Z/27
/// with weights (1, 1/2, 1/16).
TruncatedCompletion fix_b_truncation(int level = 3);

/// Point index of the residue r in a cyclic truncation.
int truncation_point(const TruncatedCompletion& trunc, std::int64_t residue);

}  // namespace warplab
