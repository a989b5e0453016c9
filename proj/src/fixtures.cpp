#include "warplab/fixtures.hpp"

#include <cstdlib>
#include <stdexcept>

namespace warplab {

WarpSystem<Rat> fix_a_z8_rot(const Rat& scale) {
  const int n = 8;
  std::vector<Rat> dist(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int arc = std::abs(i - j);
      dist[i * n + j] = Rat(std::min(arc, n - arc));
    }
  WarpSystem<Rat> sys;
  sys.space = FiniteMetricSpace<Rat>(n, std::move(dist), scale);
  sys.space.validate();
  sys.gens.symbols = {"id", "+1", "-1"};
  sys.gens.inverse = {0, 2, 1};
  sys.gens.identity_index = 0;
  sys.action.resize(3, std::vector<int>(n));
  for (int i = 0; i < n; ++i) {
    sys.action[0][i] = i;
    sys.action[1][i] = (i + 1) % n;
    sys.action[2][i] = (i + n - 1) % n;
  }
  sys.finalize();
  return sys;
}

int fix_d_index(int window, int i, int j) {
  const int side = 2 * window + 1;
  return (i + window) * side + (j + window);
}

WarpSystem<Rat> fix_d_exp2_window(int window, const Rat& scale) {
  const int side = 2 * window + 1;
  const int n = side * side;
  auto pow2 = [](int e) {
    return e >= 0 ? Rat(CheckedInt(1) << e) : Rat(1, CheckedInt(1) << (-e));
  };
  std::vector<Rat> coord_x(n), coord_y(n);
  for (int i = -window; i <= window; ++i)
    for (int j = -window; j <= window; ++j) {
      int idx = fix_d_index(window, i, j);
      coord_x[idx] = pow2(i);
      coord_y[idx] = pow2(j);
    }
  std::vector<Rat> dist(std::size_t(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      dist[std::size_t(a) * n + b] =
          rat_abs(coord_x[a] - coord_x[b]) + rat_abs(coord_y[a] - coord_y[b]);

  WarpSystem<Rat> sys;
  sys.space = FiniteMetricSpace<Rat>(n, std::move(dist), scale);
  sys.space.validate();
  sys.gens.symbols = {"id", "x+1", "x-1", "y+1", "y-1"};
  sys.gens.inverse = {0, 2, 1, 4, 3};
  sys.gens.identity_index = 0;
  sys.action.assign(5, std::vector<int>(n, -1));
  for (int i = -window; i <= window; ++i)
    for (int j = -window; j <= window; ++j) {
      int idx = fix_d_index(window, i, j);
      sys.action[0][idx] = idx;
      sys.action[1][idx] = i + 1 <= window ? fix_d_index(window, i + 1, j) : -1;
      sys.action[2][idx] = i - 1 >= -window ? fix_d_index(window, i - 1, j) : -1;
      sys.action[3][idx] = j + 1 <= window ? fix_d_index(window, i, j + 1) : -1;
      sys.action[4][idx] = j - 1 >= -window ? fix_d_index(window, i, j - 1) : -1;
    }
  sys.finalize();
  return sys;
}


TruncatedCompletion fix_b_truncation(int level) {
  auto chain = QuotientChain::cyclic_tower(3, 3);
  auto weights =
      WeightSequence::for_chain(chain, {Rat(1), Rat(1, 2), Rat(1, 16)});
  return TruncatedCompletion(std::move(chain), std::move(weights), level);
}

int truncation_point(const TruncatedCompletion& trunc, std::int64_t residue) {
  auto idx = trunc.top_group().index_of({residue});
  if (!idx) throw std::invalid_argument("residue outside the truncation");
  return *idx;
}

}  // namespace warplab
