#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coilchain/geometry.hpp"
#include "coilchain/raca.hpp"

namespace coilchain
{

/// Malformed or incomplete scenario text (cli exit code 2).
class ScenarioError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct RacaSection
{
  RacaOptions options;
  std::vector<Dimension> dimensions;

  bool operator==(const RacaSection &) const = default;
};

struct Scenario
{
  ChainConfig chain;
  std::optional<ConstraintSet> constraints;
  std::optional<RacaSection> raca;

  bool operator==(const Scenario &) const = default;
};

/// Parses TOML scenario text. Unknown keys or sections, missing required
/// keys and wrong value types throw ScenarioError naming section and key.
/// Physical validity is not checked here (see validate_chain).
Scenario parse_scenario(const std::string &text, const std::string &source = "scenario");
Scenario load_scenario(const std::string &path);

/// Canonical TOML text: fixed key order, every optional value spelled out,
/// doubles in shortest round-trip form. parse_scenario(dump_scenario(s)) == s.
std::string dump_scenario(const Scenario &s);

}  // namespace coilchain
