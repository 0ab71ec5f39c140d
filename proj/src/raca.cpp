#include "coilchain/raca.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace coilchain
{

namespace
{

void set_relay(RelaySpec &relay, Parameter::Kind kind, double value)
{
  switch (kind)
  {
  case Parameter::Kind::side:
    relay.coil.side_a = value;
    relay.coil.side_b = value;
    break;
  case Parameter::Kind::turns:
    relay.coil.turns = static_cast<int>(std::lround(value));
    break;
  case Parameter::Kind::capacitance:
    relay.capacitance = value;
    break;
  case Parameter::Kind::resistance:
    relay.resistance = value;
    break;
  default:
    break;
  }
}

void set_hop(Placement &hop, Parameter::Kind kind, double value)
{
  switch (kind)
  {
  case Parameter::Kind::lateral_d:
    hop.lateral_d = value;
    break;
  case Parameter::Kind::axial_c:
    hop.axial_c = value;
    break;
  case Parameter::Kind::angle:
    hop.angle_theta = value;
    break;
  default:
    break;
  }
}

std::size_t pick(const std::vector<double> &tau, double q0, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < q0)
    return static_cast<std::size_t>(std::max_element(tau.begin(), tau.end()) - tau.begin());
  double total = 0.0;
  for (double t : tau)
    total += t;
  const double r = unit(rng) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < tau.size(); ++i)
  {
    acc += tau[i];
    if (r < acc)
      return i;
  }
  return tau.size() - 1;
}

// Evaluates the candidates not yet in `cache`, in parallel when asked.
void fill_cache(std::map<Candidate, Evaluation> &cache, const std::vector<Candidate> &wanted, const SearchSpace &space,
                const ChainConfig &base, const ConstraintSet &constraints, Exec exec)
{
  std::vector<Candidate> fresh;
  for (const auto &c : wanted)
    if (!cache.count(c) && std::find(fresh.begin(), fresh.end(), c) == fresh.end())
      fresh.push_back(c);

  std::vector<Evaluation> results(fresh.size());
  const auto count = static_cast<std::ptrdiff_t>(fresh.size());
  if (exec == Exec::parallel)
  {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i)
      results[i] = evaluate_candidate(fresh[i], space, base, constraints);
  }
  else
  {
    for (std::ptrdiff_t i = 0; i < count; ++i)
      results[i] = evaluate_candidate(fresh[i], space, base, constraints);
  }
  for (std::size_t i = 0; i < fresh.size(); ++i)
    cache.emplace(fresh[i], results[i]);
}

// Strictly better power, or equal power and lexicographically smaller.
bool improves(const Evaluation &e, const Candidate &c, double best_power, const Candidate &best)
{
  if (!e.feasible)
    return false;
  if (best.empty() || e.power > best_power)
    return true;
  return e.power == best_power && c < best;
}

OptimizeResult finish(const SearchSpace &space, Candidate best, const Evaluation &eval)
{
  OptimizeResult out;
  out.params.reserve(best.size());
  for (std::size_t d = 0; d < best.size(); ++d)
    out.params.push_back(space.dimensions[d].values[best[d]]);
  out.best = std::move(best);
  out.best_power = eval.power;
  out.best_efficiency = eval.efficiency;
  return out;
}

}  // namespace

Parameter parse_parameter(const std::string &name)
{
  static const std::map<std::string, Parameter::Kind> kinds{
      {"side", Parameter::Kind::side},           {"turns", Parameter::Kind::turns},
      {"capacitance", Parameter::Kind::capacitance}, {"resistance", Parameter::Kind::resistance},
      {"lateral_d", Parameter::Kind::lateral_d}, {"axial_c", Parameter::Kind::axial_c},
      {"angle", Parameter::Kind::angle},
  };
  const auto colon = name.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("parameter '" + name + "' must look like kind:index");
  const auto kind = kinds.find(name.substr(0, colon));
  if (kind == kinds.end())
    throw std::invalid_argument("unknown parameter kind in '" + name + "'");

  Parameter p{kind->second, std::nullopt};
  const std::string index = name.substr(colon + 1);
  if (index == "*")
    return p;
  std::size_t value = 0;
  const auto [end, ec] = std::from_chars(index.data(), index.data() + index.size(), value);
  if (ec != std::errc{} || end != index.data() + index.size() || index.empty())
    throw std::invalid_argument("bad index in parameter '" + name + "'");
  if (p.on_relay() && value == 0)
    throw std::invalid_argument("relay parameters count from 1: '" + name + "'");
  p.index = value;
  return p;
}

void apply_parameter(ChainConfig &config, const Parameter &p, double value)
{
  if (p.on_relay())
  {
    for (std::size_t k = 0; k < config.relays.size(); ++k)
      if (!p.index || *p.index == k + 1)
        set_relay(config.relays[k], p.kind, value);
    return;
  }
  for (std::size_t k = 0; k < config.placements.size(); ++k)
    if (!p.index || *p.index == k)
      set_hop(config.placements[k], p.kind, value);
}

std::size_t SearchSpace::candidate_count() const
{
  std::size_t total = 1;
  for (const auto &d : dimensions)
  {
    if (d.values.empty())
      return 0;
    if (total > std::numeric_limits<std::size_t>::max() / d.values.size())
      return std::numeric_limits<std::size_t>::max();
    total *= d.values.size();
  }
  return total;
}

void check_space(const SearchSpace &space)
{
  for (const auto &d : space.dimensions)
  {
    parse_parameter(d.name);
    if (d.values.empty())
      throw std::invalid_argument("dimension " + d.name + " has no values");
  }
}

ChainConfig candidate_config(const SearchSpace &space, const ChainConfig &base, const Candidate &candidate)
{
  ChainConfig config = base.relays.size() == space.n_relays ? base : retile(base, space.n_relays);
  for (std::size_t d = 0; d < space.dimensions.size(); ++d)
    apply_parameter(config, parse_parameter(space.dimensions[d].name), space.dimensions[d].values.at(candidate.at(d)));
  return config;
}

Evaluation evaluate_candidate(const Candidate &candidate, const SearchSpace &space, const ChainConfig &base,
                              const ConstraintSet &constraints)
{
  ChainConfig config;
  try
  {
    config = candidate_config(space, base, candidate);
  }
  catch (const std::invalid_argument &)
  {
    return {};
  }
  if (!validate_chain(config).empty())
    return {};

  Evaluation out;
  try
  {
    const auto r = solve_chain(config, SolverMode::corrected_phasor);
    out.power = r.output_power;
    out.efficiency = r.efficiency;
  }
  catch (const std::exception &)
  {
    return {};
  }

  bool small_enough = true;
  for (const auto &relay : config.relays)
    small_enough = small_enough && std::max(relay.coil.side_a, relay.coil.side_b) <= constraints.s_max;
  out.feasible = out.efficiency >= constraints.eta_min && config.reader.current < constraints.i_max && small_enough;
  return out;
}

OptimizeResult raca_optimize(const SearchSpace &space, const ChainConfig &base, const ConstraintSet &constraints,
                             const RacaOptions &options, Exec exec)
{
  if (options.iterations < 1 || options.ants < 1)
    throw std::invalid_argument("raca: iterations and ants must be at least 1");
  if (!(options.rho > 0.0 && options.rho < 1.0))
    throw std::invalid_argument("raca: rho must lie in (0, 1)");
  if (!(options.q0 >= 0.0 && options.q0 <= 1.0))
    throw std::invalid_argument("raca: q0 must lie in [0, 1]");
  check_space(space);

  PheromoneState state;
  state.rho = options.rho;
  state.q0 = options.q0;
  for (const auto &d : space.dimensions)
    state.tau.emplace_back(d.values.size(), kTauInitial);

  std::mt19937_64 rng(options.seed);
  std::map<Candidate, Evaluation> cache;
  Candidate best;
  Evaluation best_eval;
  std::vector<double> history;

  for (int it = 0; it < options.iterations; ++it)
  {
    std::vector<Candidate> ants(static_cast<std::size_t>(options.ants));
    for (auto &ant : ants)
    {
      ant.reserve(state.tau.size());
      for (const auto &tau : state.tau)
        ant.push_back(pick(tau, state.q0, rng));
    }
    fill_cache(cache, ants, space, base, constraints, exec);

    for (const auto &ant : ants)
    {
      const auto &e = cache.at(ant);
      if (improves(e, ant, best_eval.power, best))
      {
        best = ant;
        best_eval = e;
      }
    }

    std::vector<std::vector<double>> deposit;
    for (const auto &tau : state.tau)
      deposit.emplace_back(tau.size(), 0.0);
    for (const auto &ant : ants)
    {
      const auto &e = cache.at(ant);
      if (!e.feasible || !(best_eval.power > 0.0))
        continue;
      for (std::size_t d = 0; d < ant.size(); ++d)
        deposit[d][ant[d]] += e.power / best_eval.power;
    }
    for (std::size_t d = 0; d < state.tau.size(); ++d)
      for (std::size_t v = 0; v < state.tau[d].size(); ++v)
        state.tau[d][v] = std::max((1.0 - state.rho) * state.tau[d][v] + deposit[d][v], kTauMin);
    state.iteration = it + 1;
    history.push_back(best_eval.power);
  }

  if (best.empty() && !space.dimensions.empty())
    throw NoFeasibleCandidate("no candidate satisfied the constraints in " + std::to_string(options.iterations) +
                              " iterations");
  if (space.dimensions.empty() && !best_eval.feasible)
    throw NoFeasibleCandidate("the base chain does not satisfy the constraints");

  OptimizeResult out = finish(space, std::move(best), best_eval);
  out.history = std::move(history);
  out.evaluations = cache.size();
  out.pheromone = std::move(state);
  return out;
}

OptimizeResult exhaustive_search(const SearchSpace &space, const ChainConfig &base, const ConstraintSet &constraints,
                                 Exec exec)
{
  check_space(space);
  const std::size_t total = space.candidate_count();
  if (total > kExhaustiveLimit)
    throw SpaceTooLarge("search space has " + std::to_string(total) + " candidates, limit is " +
                        std::to_string(kExhaustiveLimit));

  auto decode = [&](std::size_t flat) {
    Candidate c(space.dimensions.size());
    for (std::size_t d = space.dimensions.size(); d-- > 0;)
    {
      const std::size_t size = space.dimensions[d].values.size();
      c[d] = flat % size;
      flat /= size;
    }
    return c;
  };

  std::vector<Evaluation> results(total);
  const auto count = static_cast<std::ptrdiff_t>(total);
  if (exec == Exec::parallel)
  {
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < count; ++i)
      results[i] = evaluate_candidate(decode(i), space, base, constraints);
  }
  else
  {
    for (std::ptrdiff_t i = 0; i < count; ++i)
      results[i] = evaluate_candidate(decode(i), space, base, constraints);
  }

  // Flat order is lexicographic, so strict improvement keeps the first tie.
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < total; ++i)
    if (results[i].feasible && (!best || results[i].power > results[*best].power))
      best = i;
  if (!best)
    throw NoFeasibleCandidate("no candidate in the space satisfies the constraints");

  OptimizeResult out = finish(space, decode(*best), results[*best]);
  out.history = {out.best_power};
  out.evaluations = total;
  return out;
}

}  // namespace coilchain
