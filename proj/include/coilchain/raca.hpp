#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coilchain/circuit.hpp"
#include "coilchain/geometry.hpp"

namespace coilchain
{

/// A tunable chain parameter, named `kind:index`.
///
/// Relay kinds (side, turns, capacitance, resistance) index relays from 1;
/// placement kinds (lateral_d, axial_c, angle) index hops from 0 (0 is the
/// reader hop). Index `*` applies the value to every relay or hop.
struct Parameter
{
  enum class Kind
  {
    side,
    turns,
    capacitance,
    resistance,
    lateral_d,
    axial_c,
    angle,
  };
  Kind kind;
  std::optional<std::size_t> index;  // nullopt for `*`

  bool on_relay() const { return kind <= Kind::resistance; }
};

/// Throws std::invalid_argument for an unknown kind or a bad index.
Parameter parse_parameter(const std::string &name);

/// Writes `value` into the chain. Indices beyond the chain are ignored, so a
/// parameter for relay 3 is inert on a 2-relay chain.
void apply_parameter(ChainConfig &config, const Parameter &p, double value);

struct Dimension
{
  std::string name;
  std::vector<double> values;

  bool operator==(const Dimension &) const = default;
};

struct SearchSpace
{
  std::vector<Dimension> dimensions;
  std::size_t n_relays = 1;

  /// Product of the value-set sizes, saturating at SIZE_MAX.
  std::size_t candidate_count() const;
};

/// Throws std::invalid_argument unless every dimension parses and has values.
void check_space(const SearchSpace &space);

struct ConstraintSet
{
  double eta_min = 0.01;  // eta_0
  double i_max = 1.0;     // I_0, A
  double s_max = 0.3;     // S_0, m

  bool operator==(const ConstraintSet &) const = default;
};

struct Evaluation
{
  double power = 0.0;
  double efficiency = 0.0;
  bool feasible = false;
};

/// One value index per dimension.
using Candidate = std::vector<std::size_t>;

/// The chain `base` re-tiled to space.n_relays with the candidate applied.
ChainConfig candidate_config(const SearchSpace &space, const ChainConfig &base, const Candidate &candidate);

/// Corrected-phasor power of the candidate chain. Feasible iff efficiency
/// >= eta_min, I_in < i_max and every relay side <= s_max. Invalid geometry
/// and solver failures come back infeasible with zero power.
Evaluation evaluate_candidate(const Candidate &candidate, const SearchSpace &space, const ChainConfig &base,
                              const ConstraintSet &constraints);

struct PheromoneState
{
  std::vector<std::vector<double>> tau;
  double rho = 0.02;
  double q0 = 0.1;
  int iteration = 0;
};

inline constexpr double kTauInitial = 1.0;
inline constexpr double kTauMin = 1e-6 * kTauInitial;

struct RacaOptions
{
  int iterations = 200;  // T
  double rho = 0.02;
  double q0 = 0.1;
  int ants = 10;
  std::uint64_t seed = 42;

  bool operator==(const RacaOptions &) const = default;
};

struct OptimizeResult
{
  Candidate best;
  std::vector<double> params;  // value per dimension
  double best_power = 0.0;
  double best_efficiency = 0.0;
  std::vector<double> history;  // best-so-far power after each iteration
  std::size_t evaluations = 0;  // distinct candidates solved
  PheromoneState pheromone;
};

class NoFeasibleCandidate : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class SpaceTooLarge : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Ant-colony search over the discrete space. Each ant picks, per dimension,
/// the highest-pheromone value with probability q0 and otherwise samples a
/// value with probability proportional to tau. Feasible ants deposit
/// P_o / P_best on their values; then tau <- (1 - rho) tau + deposit, floored
/// at kTauMin. Deterministic for a given seed whatever `exec` is.
OptimizeResult raca_optimize(const SearchSpace &space, const ChainConfig &base, const ConstraintSet &constraints,
                             const RacaOptions &options, Exec exec = Exec::parallel);

inline constexpr std::size_t kExhaustiveLimit = 1'000'000;

/// Every candidate in lexicographic order; ties keep the first.
OptimizeResult exhaustive_search(const SearchSpace &space, const ChainConfig &base,
                                 const ConstraintSet &constraints, Exec exec = Exec::parallel);

}  // namespace coilchain
