#include <iostream>

#include <CLI11.hpp>

#include "coilchain/cli.hpp"

using namespace coilchain;

int main(int argc, char **argv)
{
  CLI::App app{"Relay-chain NFC link simulator and optimizer", "coilchain"};
  app.require_subcommand(1);

  std::string scenario, output, mode = "corrected", dim, range, relays;
  std::optional<double> wake;
  bool exhaustive = false;

  auto *simulate = app.add_subcommand("simulate", "Solve one chain and write currents and powers");
  simulate->add_option("scenario", scenario, "Scenario TOML file")->required();
  simulate->add_option("--mode", mode, "corrected or literal")->check(CLI::IsMember({"corrected", "literal"}));
  simulate->add_option("-o,--output", output, "CSV path (stdout if omitted)");

  auto *sweep = app.add_subcommand("sweep", "Sweep one parameter over a linear range");
  sweep->add_option("scenario", scenario, "Scenario TOML file")->required();
  sweep->add_option("--dim", dim, "axial_c:k, lateral_d:k, angle:k, capacitance:k, frequency or n_relays")
      ->required();
  sweep->add_option("--range", range, "min,max,points")->required();
  sweep->add_option("--wake-power", wake, "Report where P_o first drops below this power (W)");
  sweep->add_option("-o,--output", output, "CSV path (stdout if omitted)");

  auto *optimize = app.add_subcommand("optimize", "Search relay parameters with the ant-colony optimizer");
  optimize->add_option("scenario", scenario, "Scenario TOML file")->required();
  optimize->add_option("--n", relays, "Relay count n or range a..b")->required();
  optimize->add_option("-o,--output", output, "CSV path; histories go to <path>.history.csv")->required();
  optimize->add_flag("--exhaustive", exhaustive, "Enumerate the whole space instead");

  auto *validate = app.add_subcommand("validate", "Check a scenario and list every violation");
  validate->add_option("scenario", scenario, "Scenario TOML file")->required();

  auto *dump = app.add_subcommand("dump", "Print the scenario with defaults filled in");
  dump->add_option("scenario", scenario, "Scenario TOML file")->required();
  dump->add_option("-o,--output", output, "Output path (stdout if omitted)");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::CallForAllHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return cli::bad_flag;
  }

  const cli::Streams io{std::cout, std::cerr};
  const auto out = output.empty() ? std::nullopt : std::optional<std::string>(output);
  if (*simulate)
    return cli::cmd_simulate(scenario, mode == "literal" ? SolverMode::paper_literal : SolverMode::corrected_phasor,
                             out, io);
  if (*sweep)
    return cli::cmd_sweep(scenario, dim, range, out, wake, io);
  if (*optimize)
    return cli::cmd_optimize(scenario, relays, output, exhaustive, io);
  if (*validate)
    return cli::cmd_validate(scenario, io);
  return cli::cmd_dump(scenario, out, io);
}
