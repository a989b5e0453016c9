#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "warplab/graph.hpp"

namespace warplab {

/// Finite symmetric generating set with an explicit inverse pairing and a
/// mandatory identity label (index 0 by convention of the builders).
struct GeneratorSet {
  std::vector<std::string> symbols;
  std::vector<int> inverse;  // involution on indices
  int identity_index = -1;

  int size() const { return static_cast<int>(symbols.size()); }
  bool is_identity(int i) const { return i == identity_index; }

  /// Throws std::invalid_argument if the pairing is not an involution,
  /// the set is not symmetric, or the identity label is missing.
  void validate() const;

  /// Representatives of the {s, s^-1} orbits, identity excluded.
  std::vector<int> inverse_pair_representatives() const;
};

struct GroupWord {
  std::vector<int> letters;  // generator indices
  int length = 0;            // number of non-identity letters
};

/// A finite group given by explicit data. Elements are indexed canonically
/// in BFS order from the identity (left multiplication by generators), so
/// representative choices made downstream are reproducible.
class FiniteQuotientGroup {
 public:
  using Payload = std::vector<std::int64_t>;
  using MultFn = std::function<Payload(const Payload&, const Payload&)>;

  /// Enumerates the group generated by `gen_payloads` under `mult` by BFS
  /// from `identity`. If `declared_size` is set and the enumeration does
  /// not reach it, throws ("generators do not generate").
  static FiniteQuotientGroup enumerate(GeneratorSet gens,
                                       const std::vector<Payload>& gen_payloads,
                                       const Payload& identity, MultFn mult,
                                       std::optional<std::size_t> declared_size = {},
                                       std::size_t max_size = 5'000'000);

  int size() const { return static_cast<int>(payloads_.size()); }
  int identity() const { return 0; }
  const GeneratorSet& gens() const { return gens_; }
  const Payload& payload(int g) const { return payloads_[g]; }

  /// Index of s·g.
  int gen_mult(int gen, int g) const { return gen_left_[gen][g]; }
  const std::vector<int>& gen_action(int gen) const { return gen_left_[gen]; }
  int gen_image(int gen) const { return gen_left_[gen][0]; }

  int mult(int a, int b) const;
  int inverse(int a) const;

  /// A shortest generator word multiplying to g (debug/reporting path).
  GroupWord shortest_word(int g) const;
  std::optional<int> index_of(const Payload& p) const;

  /// Word lengths d(g, ·) of the right-invariant word metric: entry h is
  /// the length of the shortest gamma with gamma·g = h.
  std::vector<int> word_lengths_from(int g) const;

  int group_distance(int g, int g2) const;
  int word_length(int g) const { return word_length_[g]; }
  int diameter() const;

  /// Elements at word length <= radius, as (element, length), in canonical
  /// index order.
  std::vector<std::pair<int, int>> word_ball(int radius) const;

  /// One undirected edge {g, s·g} per non-identity generator pair orbit;
  /// |S \ {id}|-regular counting multiplicity.
  Multigraph cayley_graph() const;

  /// Identity/inverse checks are exhaustive; associativity is exhaustive
  /// for |G| <= 128 and randomly sampled beyond. Throws on failure.
  void validate_axioms(std::uint64_t sample_seed = 1) const;

 private:
  GeneratorSet gens_;
  std::vector<Payload> payloads_;
  std::map<Payload, int> index_;
  std::vector<std::vector<int>> gen_left_;  // gen -> left-mult permutation
  std::vector<int> word_length_;
  MultFn mult_;
  mutable int diameter_ = -1;
};

/// Z/m with generator labels "+1","-1" (and "id").
FiniteQuotientGroup cyclic_group(std::int64_t m);

/// SL2(Z/m) with the four elementary generators E12(+-1), E21(+-1).
FiniteQuotientGroup sl2_mod_group(std::int64_t m);

/// Subgroup of the symmetric group generated by explicit permutations.
/// perms[i] is the image list of generator i; labels default to "g<i>".
FiniteQuotientGroup permutation_group(
    const std::vector<std::vector<int>>& perms,
    const std::vector<std::string>& labels = {});

}  // namespace warplab
