#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "coilchain/em.hpp"
#include "coilchain/geometry.hpp"

namespace coilchain
{

using Complex = std::complex<double>;

class CircuitError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class SolverMode
{
  paper_literal,     // the recursive relay formulas exactly as printed
  corrected_phasor,  // complex reflected-impedance recursion
};

struct SolveResult
{
  /// |I_in|, |I_1| ... |I_n|, |I_o|; I_o is the current through the load.
  std::vector<double> currents;
  /// Current in the tag winding (load plus tuning capacitor branch).
  double tag_coil_current = 0.0;
  double input_power = 0.0;
  double output_power = 0.0;
  double efficiency = 0.0;
  /// Impedance reflected into the reader by the rest of the chain.
  Complex input_impedance{};

  double output_current() const { return currents.back(); }
};

/// Electrical abstraction of a chain: per-coil L, R, C in chain order
/// (reader, relays..., tag) and the couplings. The reader and relays are
/// series tuned; the tag winding feeds its load in parallel with C.
struct ChainModel
{
  std::vector<ElectricalParams> coils;
  /// Adjacent couplings, coils k and k+1.
  std::vector<double> mutual;
  /// Signed couplings of every pair, row-major N x N; empty unless the
  /// configuration asks for all-pairs coupling.
  std::vector<double> all_pairs;
  double design_frequency = 13.56e6;
  double source_current = 0.0;
  double load = 0.0;

  std::size_t relay_count() const { return coils.size() - 2; }
};

/// Filament resolution used when a chain couples through the filament model.
inline constexpr int kChainSegmentsPerSide = 24;

/// Self parameters of every coil (no couplings).
ChainModel electrical_model(const ChainConfig &config);
/// Full model, couplings from the configured em-core route.
ChainModel build_model(const ChainConfig &config);

std::vector<double> adjacent_mutuals(const ChainConfig &config);

/// Reflected impedances Z_n, ..., Z_1, Z_in for the given adjacent couplings
/// (M_(in)(1), M_12, ..., M_(n)(o)). For n = 0 the result is just {Z_in}.
std::vector<Complex> reflected_impedances(const ChainModel &model, SolverMode mode);
std::vector<Complex> reflected_impedances(const ChainModel &model, SolverMode mode, double frequency);
std::vector<Complex> reflected_impedances(const ChainConfig &config, std::span<const double> mutual,
                                          SolverMode mode);

SolveResult solve_chain(const ChainConfig &config, SolverMode mode = SolverMode::corrected_phasor);
SolveResult solve_chain(const ChainModel &model, SolverMode mode, double frequency);

/// Dense complex mesh solve of the whole chain, the reference for
/// solve_chain. Uses every pair coupling when the model carries them.
SolveResult mesh_solve(const ChainConfig &config);
SolveResult mesh_solve(const ChainModel &model, double frequency);

/// mesh_solve at `points` log-spaced frequencies in [f_min, f_max] with the
/// capacitors held at their design values.
std::vector<std::pair<double, SolveResult>> frequency_sweep(const ChainConfig &config, double f_min,
                                                            double f_max, int points,
                                                            Exec exec = Exec::parallel);
std::vector<std::pair<double, SolveResult>> frequency_sweep(const ChainModel &model, double f_min, double f_max,
                                                            int points, Exec exec = Exec::parallel);

}  // namespace coilchain
