#include "coilchain/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <vector>

#include "coilchain/raca.hpp"
#include "coilchain/scenario.hpp"

namespace coilchain::cli
{

namespace
{

// Unwinds a command with an exit code and its one-line diagnostic.
struct Failure
{
  int code;
  std::string message;
};

Scenario load(const std::string &path)
{
  try
  {
    return load_scenario(path);
  }
  catch (const ScenarioError &e)
  {
    throw Failure{parse_error, e.what()};
  }
}

std::string joined(const std::vector<Violation> &v)
{
  std::string out;
  for (const auto &x : v)
    out += (out.empty() ? "" : "; ") + x.path + " " + x.message;
  return out;
}

void require_valid(const ChainConfig &c, const std::string &context = "invalid scenario")
{
  const auto v = validate_chain(c);
  if (!v.empty())
    throw Failure{validation_error, context + ": " + joined(v)};
}

// Runs a solver call, turning its failures into exit code 4.
template <typename F>
auto solver(F &&f) -> decltype(f())
{
  try
  {
    return f();
  }
  catch (const std::exception &e)
  {
    throw Failure{solver_error, std::string("solver: ") + e.what()};
  }
}

void emit(const std::string &text, const std::optional<std::string> &output, Streams io)
{
  if (!output)
  {
    io.out << text;
    return;
  }
  std::ofstream file(*output, std::ios::binary | std::ios::trunc);
  if (!(file << text))
    throw Failure{bad_flag, "cannot write " + *output};
}

std::ostream &summary(const std::optional<std::string> &output, Streams io) { return output ? io.out : io.err; }

int run(Streams io, const std::function<int()> &body)
{
  try
  {
    return body();
  }
  catch (const Failure &f)
  {
    io.err << "error: " << f.message << "\n";
    return f.code;
  }
}

std::vector<double> sweep_values(const std::string &range)
{
  std::vector<double> parts;
  std::stringstream in(range);
  std::string item;
  while (std::getline(in, item, ','))
  {
    try
    {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size())
        throw std::invalid_argument(item);
    }
    catch (const std::exception &)
    {
      throw Failure{bad_flag, "range must be min,max,points, got '" + range + "'"};
    }
  }
  if (parts.size() != 3 || parts[2] < 1 || parts[2] != std::floor(parts[2]) || !(parts[1] >= parts[0]))
    throw Failure{bad_flag, "range must be min,max,points with max >= min and points >= 1, got '" + range + "'"};

  const auto points = static_cast<int>(parts[2]);
  std::vector<double> out;
  for (int i = 0; i < points; ++i)
    out.push_back(points == 1 ? parts[0] : parts[0] + (parts[1] - parts[0]) * i / (points - 1));
  return out;
}

std::pair<std::size_t, std::size_t> relay_range(const std::string &spec)
{
  auto number = [&](const std::string &s) {
    std::size_t used = 0;
    long v = -1;
    try
    {
      v = std::stol(s, &used);
    }
    catch (const std::exception &)
    {
    }
    if (used != s.size() || v < 0)
      throw Failure{bad_flag, "relay count must be n or a..b, got '" + spec + "'"};
    return static_cast<std::size_t>(v);
  };
  const auto dots = spec.find("..");
  if (dots == std::string::npos)
  {
    const auto n = number(spec);
    return {n, n};
  }
  const auto lo = number(spec.substr(0, dots));
  const auto hi = number(spec.substr(dots + 2));
  if (hi < lo)
    throw Failure{bad_flag, "relay range '" + spec + "' is empty"};
  return {lo, hi};
}

}  // namespace

std::string format_number(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

int cmd_validate(const std::string &scenario, Streams io)
{
  return run(io, [&] {
    const auto s = load(scenario);
    const auto v = validate_chain(s.chain);
    if (v.empty())
    {
      io.out << "OK\n";
      return int(ok);
    }
    for (const auto &x : v)
      io.out << x.path << ": " << x.message << "\n";
    throw Failure{validation_error, std::to_string(v.size()) + " violation(s) in " + scenario};
  });
}

int cmd_dump(const std::string &scenario, const std::optional<std::string> &output, Streams io)
{
  return run(io, [&] {
    emit(dump_scenario(load(scenario)), output, io);
    return int(ok);
  });
}

int cmd_simulate(const std::string &scenario, SolverMode mode, const std::optional<std::string> &output,
                 Streams io)
{
  return run(io, [&] {
    const auto s = load(scenario);
    require_valid(s.chain);
    const auto r = solver([&] { return solve_chain(s.chain, mode); });

    // Rows: reader, relays 1..n, tag winding, load.
    std::vector<double> rows(r.currents.begin(), r.currents.end() - 1);
    rows.push_back(r.tag_coil_current);
    rows.push_back(r.output_current());

    std::ostringstream csv;
    csv << "index,current_A\n";
    for (std::size_t k = 0; k < rows.size(); ++k)
      csv << k << "," << format_number(rows[k]) << "\n";
    csv << "P_in_W,P_o_W,eta,Z_in_ohm\n";
    csv << format_number(r.input_power) << "," << format_number(r.output_power) << ","
        << format_number(r.efficiency) << "," << format_number(std::abs(r.input_impedance)) << "\n";
    emit(csv.str(), output, io);
    return int(ok);
  });
}

int cmd_sweep(const std::string &scenario, const std::string &dimension, const std::string &range,
              const std::optional<std::string> &output, const std::optional<double> &wake_power, Streams io)
{
  return run(io, [&] {
    const auto s = load(scenario);
    require_valid(s.chain);
    const auto values = sweep_values(range);
    const std::size_t n = s.chain.relays.size();

    enum class Axis
    {
      parameter,
      frequency,
      relays
    } axis = Axis::parameter;
    std::optional<Parameter> param;
    if (dimension == "frequency")
      axis = Axis::frequency;
    else if (dimension == "n_relays")
    {
      axis = Axis::relays;
      if (n == 0 && values.back() >= 0.5)
        throw Failure{bad_flag, "n_relays sweep needs at least one relay in the scenario to repeat"};
      if (values.front() < 0)
        throw Failure{bad_flag, "n_relays must be non-negative"};
    }
    else
    {
      try
      {
        param = parse_parameter(dimension);
      }
      catch (const std::invalid_argument &)
      {
        throw Failure{bad_flag, "unknown sweep dimension '" + dimension + "'"};
      }
      using K = Parameter::Kind;
      const bool allowed =
          param->kind == K::axial_c || param->kind == K::lateral_d || param->kind == K::angle || param->kind == K::capacitance;
      const bool exists = param->index && *param->index <= n;
      if (!allowed || !exists)
        throw Failure{bad_flag, "unknown sweep dimension '" + dimension + "' for a chain with " + std::to_string(n) +
                                    " relay(s)"};
    }

    std::ostringstream csv;
    csv << "swept_value,P_o_W,eta,I_o_A,P_o_literal_W,eta_literal,I_o_literal_A\n";
    std::optional<double> last_awake, first_asleep;
    std::optional<ChainModel> fixed;
    for (double v : values)
    {
      ChainConfig c = s.chain;
      double frequency = c.frequency;
      if (axis == Axis::relays)
        c = retile(c, static_cast<std::size_t>(std::lround(v)));
      else if (axis == Axis::parameter)
        apply_parameter(c, *param, v);
      else
        frequency = v;
      require_valid(c, "invalid chain at " + dimension + " = " + format_number(v));

      if (axis != Axis::frequency || !fixed)
        fixed = solver([&] { return build_model(c); });
      const auto corrected = solver([&] { return solve_chain(*fixed, SolverMode::corrected_phasor, frequency); });
      const auto literal = solver([&] { return solve_chain(*fixed, SolverMode::paper_literal, frequency); });

      csv << format_number(v) << "," << format_number(corrected.output_power) << ","
          << format_number(corrected.efficiency) << "," << format_number(corrected.output_current()) << ","
          << format_number(literal.output_power) << "," << format_number(literal.efficiency) << ","
          << format_number(literal.output_current()) << "\n";

      if (wake_power && !first_asleep)
      {
        if (corrected.output_power >= *wake_power)
          last_awake = v;
        else
          first_asleep = v;
      }
    }
    emit(csv.str(), output, io);

    if (wake_power)
    {
      auto &line = summary(output, io);
      line << "wake threshold " << format_number(*wake_power) << " W: ";
      if (!last_awake)
        line << "below threshold from the first point";
      else
        line << "last " << dimension << " reaching it = " << format_number(*last_awake);
      if (first_asleep)
        line << ", first below = " << format_number(*first_asleep);
      else
        line << ", never below within the sweep";
      line << "\n";
    }
    return int(ok);
  });
}

int cmd_optimize(const std::string &scenario, const std::string &relays, const std::string &output, bool exhaustive,
                 Streams io)
{
  return run(io, [&] {
    const auto s = load(scenario);
    if (!s.constraints)
      throw Failure{parse_error, scenario + ": optimize needs a [constraints] section"};
    if (!s.raca || s.raca->dimensions.empty())
      throw Failure{parse_error, scenario + ": optimize needs a [raca] section with [[raca.dimension]] entries"};
    require_valid(s.chain);
    const auto &opts = s.raca->options;
    if (opts.iterations < 1 || opts.ants < 1 || !(opts.rho > 0 && opts.rho < 1) || !(opts.q0 >= 0 && opts.q0 <= 1))
      throw Failure{validation_error, "raca: need iterations >= 1, ants >= 1, 0 < rho < 1, 0 <= q0 <= 1"};
    const auto &cs = *s.constraints;
    if (!(cs.eta_min > 0) || !(cs.i_max >= 0) || !(cs.s_max > 0))
      throw Failure{validation_error, "constraints: need eta_min > 0, i_max >= 0, s_max > 0"};

    const auto [lo, hi] = relay_range(relays);
    if (s.chain.relays.empty() && hi > 0)
      throw Failure{bad_flag, "the scenario has no relay to repeat for n > 0"};

    std::ostringstream csv, history;
    csv << "n,best_P_o_W,eta,feasible";
    for (const auto &d : s.raca->dimensions)
      csv << "," << d.name;
    csv << "\n";
    history << "n,iteration,best_P_o_W\n";

    std::optional<std::pair<std::size_t, OptimizeResult>> overall;
    for (std::size_t n = lo; n <= hi; ++n)
    {
      const SearchSpace space{s.raca->dimensions, n};
      std::optional<OptimizeResult> r;
      try
      {
        r = exhaustive ? exhaustive_search(space, s.chain, cs) : raca_optimize(space, s.chain, cs, opts);
      }
      catch (const NoFeasibleCandidate &)
      {
      }
      catch (const std::exception &e)
      {
        throw Failure{solver_error, std::string("optimize: ") + e.what()};
      }

      csv << n << ",";
      if (r)
      {
        csv << format_number(r->best_power) << "," << format_number(r->best_efficiency) << ",1";
        for (double v : r->params)
          csv << "," << format_number(v);
        for (std::size_t i = 0; i < r->history.size(); ++i)
          history << n << "," << i + 1 << "," << format_number(r->history[i]) << "\n";
        if (!overall || r->best_power > overall->second.best_power)
          overall.emplace(n, *r);
      }
      else
      {
        csv << "0,0,0";
        for (std::size_t i = 0; i < s.raca->dimensions.size(); ++i)
          csv << ",";
      }
      csv << "\n";
    }

    emit(csv.str(), output, io);
    emit(history.str(), output + ".history.csv", io);
    if (!overall)
      throw Failure{infeasible, "no relay count in " + relays + " has a feasible candidate"};

    io.out << "best n = " << overall->first << ", P_o = " << format_number(overall->second.best_power) << " W";
    for (std::size_t d = 0; d < s.raca->dimensions.size(); ++d)
      io.out << ", " << s.raca->dimensions[d].name << " = " << format_number(overall->second.params[d]);
    io.out << "\n";
    return int(ok);
  });
}

}  // namespace coilchain::cli
