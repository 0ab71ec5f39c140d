#include "coilchain/circuit.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <optional>

#include <Eigen/Dense>

namespace coilchain
{

namespace
{

constexpr Complex j{0.0, 1.0};

double angular(double frequency) { return 2.0 * std::numbers::pi * frequency; }

Complex series_impedance(const ElectricalParams &p, double omega)
{
  return {p.resistance, omega * p.self_inductance - 1.0 / (omega * p.capacitance)};
}

Complex tag_loop_impedance(const ElectricalParams &tag, double load, double omega)
{
  return Complex{tag.resistance, omega * tag.self_inductance} +
         load / (1.0 + j * omega * tag.capacitance * load);
}

void check_model(const ChainModel &model)
{
  if (model.coils.size() < 2 || model.mutual.size() + 1 != model.coils.size())
    throw CircuitError("chain model needs one coupling per adjacent coil pair");
}

SolveResult finish(const ChainModel &model, std::vector<Complex> currents, Complex tag_loop, Complex load_current,
                   Complex z_in, double omega)
{
  SolveResult out;
  for (const auto &i : currents)
    out.currents.push_back(std::abs(i));
  out.currents.push_back(std::abs(load_current));
  out.tag_coil_current = std::abs(tag_loop);
  out.input_impedance = z_in;
  const double i_in = model.source_current;
  out.input_power = (series_impedance(model.coils.front(), omega) + z_in).real() * i_in * i_in;
  out.output_power = std::norm(load_current) * model.load;
  out.efficiency = out.input_power > 0.0 ? out.output_power / out.input_power : 0.0;
  if (out.efficiency > 1.0 + 1e-9)
    throw CircuitError("nonphysical result: efficiency above 1");
  if (out.input_power < 0.0)
    throw CircuitError("nonphysical result: negative input power");
  return out;
}

SolveResult solve_literal(const ChainModel &model, double omega)
{
  const std::size_t n = model.relay_count();
  const auto &tag = model.coils.back();
  const auto z = reflected_impedances(model, SolverMode::paper_literal, omega / (2.0 * std::numbers::pi));
  // z = {Z_n, ..., Z_1, Z_in}; Z_k sits at index n - k.
  auto z_relay = [&](std::size_t k) { return z[n - k].real(); };

  std::vector<double> current{model.source_current};
  for (std::size_t k = 1; k <= n; ++k)
  {
    const double denom = model.coils[k].resistance + z_relay(k);
    if (denom == 0.0)
      throw CircuitError("division by zero in relay current recursion");
    current.push_back(omega * omega * model.mutual[k - 1] * current.back() / denom);
  }
  const double i_o = model.mutual.back() * current.back() / tag.self_inductance;
  const double tank = omega * tag.capacitance * model.load;

  SolveResult out;
  out.currents.assign(current.begin(), current.end());
  for (auto &c : out.currents)
    c = std::abs(c);
  out.currents.push_back(std::abs(i_o));
  out.tag_coil_current = std::abs(i_o) * std::sqrt(1.0 + tank * tank);
  out.input_impedance = z.back();
  // L_in enters as its reactance so the sum is in ohms.
  const double i_in = model.source_current;
  out.input_power = (z.back().real() + omega * model.coils.front().self_inductance) * i_in * i_in;
  out.output_power = i_o * i_o * model.load;
  out.efficiency = out.input_power != 0.0 ? out.output_power / out.input_power : 0.0;
  return out;
}

SolveResult solve_phasor(const ChainModel &model, double omega)
{
  const std::size_t n = model.relay_count();
  const auto z = reflected_impedances(model, SolverMode::corrected_phasor, omega / (2.0 * std::numbers::pi));
  auto z_relay = [&](std::size_t k) { return z[n - k]; };

  std::vector<Complex> current{Complex{model.source_current, 0.0}};
  for (std::size_t k = 1; k <= n; ++k)
  {
    const Complex total = series_impedance(model.coils[k], omega) + z_relay(k);
    current.push_back(-j * omega * model.mutual[k - 1] * current.back() / total);
  }
  const auto &tag = model.coils.back();
  const Complex loop = tag_loop_impedance(tag, model.load, omega);
  const Complex tag_current = -j * omega * model.mutual.back() * current.back() / loop;
  const Complex load_current = tag_current / (1.0 + j * omega * tag.capacitance * model.load);
  return finish(model, std::move(current), tag_current, load_current, z.back(), omega);
}

}  // namespace

ChainModel electrical_model(const ChainConfig &config)
{
  const double f = config.frequency;
  ChainModel model;
  model.design_frequency = f;
  model.source_current = config.reader.current;
  model.load = config.tag.load;

  const auto &reader = config.reader;
  model.coils.push_back({reader.inductance, ac_resistance(reader.coil, f), match_capacitor(reader.inductance, f)});
  for (const auto &relay : config.relays)
  {
    const double l = self_inductance(relay.coil);
    model.coils.push_back({l, relay.resistance.value_or(ac_resistance(relay.coil, f)),
                           relay.capacitance.value_or(match_capacitor(l, f))});
  }
  const auto &tag = config.tag;
  model.coils.push_back({tag.inductance, ac_resistance(tag.coil, f), match_capacitor(tag.inductance, f)});
  return model;
}

std::vector<double> adjacent_mutuals(const ChainConfig &config)
{
  const auto coils = chain_coils(config);
  std::vector<double> out;
  out.reserve(config.placements.size());
  for (std::size_t k = 0; k < config.placements.size(); ++k)
  {
    if (config.coupling == CouplingModel::analytic)
      out.push_back(mutual_inductance_analytic(coils[k], coils[k + 1], config.placements[k]));
    else
      out.push_back(
          mutual_inductance_filament(coils[k], coils[k + 1], config.placements[k], kChainSegmentsPerSide));
  }
  return out;
}

ChainModel build_model(const ChainConfig &config)
{
  ChainModel model = electrical_model(config);
  if (!config.all_pairs)
  {
    model.mutual = adjacent_mutuals(config);
    return model;
  }

  // All pairs come from the filament route at world poses so that signs are
  // consistent across non-adjacent couplings.
  const auto coils = chain_coils(config);
  const auto poses = world_poses(config);
  const std::size_t count = coils.size();
  model.all_pairs.assign(count * count, 0.0);
  for (std::size_t a = 0; a < count; ++a)
    for (std::size_t b = a + 1; b < count; ++b)
    {
      const double m = mutual_inductance_filament(coils[a], poses[a], coils[b], poses[b], kChainSegmentsPerSide);
      model.all_pairs[a * count + b] = m;
      model.all_pairs[b * count + a] = m;
    }
  for (std::size_t k = 0; k + 1 < count; ++k)
    model.mutual.push_back(std::abs(model.all_pairs[k * count + k + 1]));
  return model;
}

std::vector<Complex> reflected_impedances(const ChainModel &model, SolverMode mode)
{
  return reflected_impedances(model, mode, model.design_frequency);
}

std::vector<Complex> reflected_impedances(const ChainModel &model, SolverMode mode, double frequency)
{
  check_model(model);
  const double omega = angular(frequency);
  const std::size_t n = model.relay_count();
  const auto &tag = model.coils.back();
  std::vector<Complex> out;
  out.reserve(n + 1);

  if (mode == SolverMode::paper_literal)
  {
    // Z_n = M_(n)(o) R_o / L_o^2, then Z_(k-1) = w^2 M^2 / (Z_k + R_k),
    // closing with Z_in = w^2 M_(in)(1)^2 / Z_1.
    double z = model.mutual.back() * model.load / (tag.self_inductance * tag.self_inductance);
    out.emplace_back(z);
    if (n == 0)
      return out;
    for (std::size_t k = n; k >= 2; --k)
    {
      const double denom = z + model.coils[k].resistance;
      if (denom == 0.0)
        throw CircuitError("division by zero: Z_k + R_k = 0 at relay " + std::to_string(k));
      const double m = model.mutual[k - 1];
      z = omega * omega * m * m / denom;
      out.emplace_back(z);
    }
    const double m = model.mutual.front();
    const double num = omega * omega * m * m;
    if (z == 0.0 && num != 0.0)
      throw CircuitError("division by zero: Z_1 = 0 with nonzero reader coupling");
    out.emplace_back(num == 0.0 ? 0.0 : num / z);
    return out;
  }

  // Impedance of the loop downstream of each coupling, starting at the tag.
  Complex downstream = tag_loop_impedance(tag, model.load, omega);
  for (std::size_t k = n + 1; k >= 1; --k)
  {
    if (downstream == Complex{})
      throw CircuitError("division by zero: downstream loop impedance vanished");
    const double m = model.mutual[k - 1];
    const Complex z = omega * omega * m * m / downstream;
    out.push_back(z);
    if (k >= 2)
      downstream = series_impedance(model.coils[k - 1], omega) + z;
  }
  return out;
}

std::vector<Complex> reflected_impedances(const ChainConfig &config, std::span<const double> mutual,
                                          SolverMode mode)
{
  ChainModel model = electrical_model(config);
  model.mutual.assign(mutual.begin(), mutual.end());
  return reflected_impedances(model, mode);
}

SolveResult solve_chain(const ChainConfig &config, SolverMode mode)
{
  return solve_chain(build_model(config), mode, config.frequency);
}

SolveResult solve_chain(const ChainModel &model, SolverMode mode, double frequency)
{
  check_model(model);
  const double omega = angular(frequency);
  return mode == SolverMode::paper_literal ? solve_literal(model, omega) : solve_phasor(model, omega);
}

SolveResult mesh_solve(const ChainConfig &config)
{
  return mesh_solve(build_model(config), config.frequency);
}

SolveResult mesh_solve(const ChainModel &model, double frequency)
{
  check_model(model);
  const double omega = angular(frequency);
  const std::size_t count = model.coils.size();
  auto coupling = [&](std::size_t a, std::size_t b) -> double {
    if (!model.all_pairs.empty())
      return model.all_pairs[a * count + b];
    if (a + 1 == b)
      return model.mutual[a];
    if (b + 1 == a)
      return model.mutual[b];
    return 0.0;
  };

  // Unknowns are the loop currents of coils 1 .. count-1; the reader current
  // is imposed by the source.
  const auto size = static_cast<Eigen::Index>(count - 1);
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(size, size);
  Eigen::VectorXcd rhs(size);
  const Complex i_in{model.source_current, 0.0};
  for (std::size_t r = 1; r < count; ++r)
  {
    const auto row = static_cast<Eigen::Index>(r - 1);
    for (std::size_t c = 1; c < count; ++c)
    {
      const auto col = static_cast<Eigen::Index>(c - 1);
      if (r == c)
      {
        z(row, col) = r + 1 == count ? tag_loop_impedance(model.coils[r], model.load, omega)
                                     : series_impedance(model.coils[r], omega);
      }
      else
      {
        z(row, col) = j * omega * coupling(r, c);
      }
    }
    rhs(row) = -j * omega * coupling(r, 0) * i_in;
  }

  Eigen::FullPivLU<Eigen::MatrixXcd> lu(z);
  if (!lu.isInvertible())
    throw CircuitError("singular mesh impedance matrix");
  const Eigen::VectorXcd loops = lu.solve(rhs);

  Complex reader_voltage = series_impedance(model.coils.front(), omega) * i_in;
  for (std::size_t c = 1; c < count; ++c)
    reader_voltage += j * omega * coupling(0, c) * loops(static_cast<Eigen::Index>(c - 1));
  const Complex z_in = reader_voltage / i_in - series_impedance(model.coils.front(), omega);

  std::vector<Complex> currents{i_in};
  for (Eigen::Index k = 0; k + 1 < size; ++k)
    currents.push_back(loops(k));
  const Complex tag_current = loops(size - 1);
  const auto &tag = model.coils.back();
  const Complex load_current = tag_current / (1.0 + j * omega * tag.capacitance * model.load);
  return finish(model, std::move(currents), tag_current, load_current, z_in, omega);
}

std::vector<std::pair<double, SolveResult>> frequency_sweep(const ChainConfig &config, double f_min,
                                                            double f_max, int points, Exec exec)
{
  return frequency_sweep(build_model(config), f_min, f_max, points, exec);
}

std::vector<std::pair<double, SolveResult>> frequency_sweep(const ChainModel &model, double f_min, double f_max,
                                                            int points, Exec exec)
{
  if (!(f_min > 0.0 && f_max > f_min) || points < 2)
    throw std::invalid_argument("frequency_sweep: need 0 < f_min < f_max and at least 2 points");
  check_model(model);

  std::vector<std::pair<double, SolveResult>> out(static_cast<std::size_t>(points));
  std::vector<std::exception_ptr> failures(out.size());
  const double ratio = std::log(f_max / f_min) / (points - 1);

  auto point = [&](int i) {
    const double f = i + 1 == points ? f_max : f_min * std::exp(ratio * i);
    try
    {
      out[i] = {f, mesh_solve(model, f)};
    }
    catch (...)
    {
      failures[i] = std::current_exception();
    }
  };

  if (exec == Exec::parallel)
  {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < points; ++i)
      point(i);
  }
  else
  {
    for (int i = 0; i < points; ++i)
      point(i);
  }

  for (const auto &failure : failures)
    if (failure)
      std::rethrow_exception(failure);
  return out;
}

}  // namespace coilchain
