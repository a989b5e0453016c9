#pragma once

#include <optional>

#include "warplab/config.hpp"
#include "warplab/embedding.hpp"
#include "warplab/hr.hpp"
#include "warplab/report.hpp"
#include "warplab/torus.hpp"

namespace warplab {

struct ResourceCaps {
  long long max_points = 20000;
  int max_ball_radius = 64;
  std::size_t max_orbit = 1 << 20;
};

/// A fixture resolved from configuration: exactly one of the exact system,
/// the truncated completion (which also provides a system), or the torus
/// model (float mode) is primary.
struct ResolvedFixture {
  std::string name;
  std::optional<WarpSystem<Rat>> system;
  std::optional<TruncatedCompletion> truncation;
  std::optional<RationalTorusModel> torus;
  std::optional<IntegerMatrixGens> torus_gens;
  int torus_start = -1;

  WarpSystem<Rat> exact_system(const Rat& scale) const;
};

/// kind = fix-a | fix-b | fix-c | fix-d | chain | torus | custom.
ResolvedFixture resolve_fixture(const ConfigTable& table);

/// Group description loading (cyclic | sl2 | permutation).
FiniteQuotientGroup load_group(const ConfigTable& table);

struct ScenarioConfig {
  ResolvedFixture fixture;
  ResourceCaps caps;
  std::vector<std::pair<std::string, ConfigTable>> operations;
  bool exact = true;
  double tolerance = 1e-9;

  static ScenarioConfig from_config(const Config& cfg);
};

/// Executes the operations in order. Certificate failures stop execution
/// (the failing witness is in the report); resource-cap errors mark the
/// entry "truncated" and continue.
RunReport run_scenario(const ScenarioConfig& scenario);

/// Single operation entry points shared by the CLI subcommands.
OperationResult run_operation(const std::string& op, const ConfigTable& params,
                              const ResolvedFixture& fixture,
                              const ResourceCaps& caps);

}  // namespace warplab
