#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "coilchain/circuit.hpp"

namespace coilchain::cli
{

enum Exit : int
{
  ok = 0,
  parse_error = 2,
  validation_error = 3,
  solver_error = 4,
  bad_flag = 5,
  infeasible = 6,
};

/// Where command output goes. CSV is written to `output` when set and to
/// `out` otherwise; human-readable summaries go to `out` only when the CSV
/// went to a file, else to `err`. Failures print one "error:" line on `err`.
struct Streams
{
  std::ostream &out;
  std::ostream &err;
};

/// %.9g, the CSV number format.
std::string format_number(double v);

int cmd_validate(const std::string &scenario, Streams io);

int cmd_dump(const std::string &scenario, const std::optional<std::string> &output, Streams io);

int cmd_simulate(const std::string &scenario, SolverMode mode, const std::optional<std::string> &output,
                 Streams io);

/// `dimension` is one of axial_c:k, lateral_d:k, angle:k, capacitance:k,
/// frequency, n_relays; `range` is "min,max,points" (linear spacing).
int cmd_sweep(const std::string &scenario, const std::string &dimension, const std::string &range,
              const std::optional<std::string> &output, const std::optional<double> &wake_power, Streams io);

/// `relays` is "n" or "a..b". Requires an output path: results go there and
/// per-iteration histories to `<output>.history.csv`.
int cmd_optimize(const std::string &scenario, const std::string &relays, const std::string &output,
                 bool exhaustive, Streams io);

}  // namespace coilchain::cli
