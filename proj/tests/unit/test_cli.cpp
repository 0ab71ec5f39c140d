#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "coilchain/cli.hpp"
#include "coilchain/scenario.hpp"

using namespace coilchain;
namespace fs = std::filesystem;

namespace
{

const std::string scenarios = COILCHAIN_SCENARIO_DIR;
const std::string probe = scenarios + "/separation_probe.toml";
const std::string small = scenarios + "/small_search.toml";

struct Run
{
  int code;
  std::string out, err;
};

template <typename F>
Run capture(F &&f)
{
  std::ostringstream out, err;
  const int code = f(cli::Streams{out, err});
  return {code, out.str(), err.str()};
}

std::string read(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string temp(const std::string &name, const std::string &text = {})
{
  const auto path = (fs::temp_directory_path() / ("coilchain_cli_" + name)).string();
  if (!text.empty() || name.ends_with(".toml"))
    std::ofstream(path, std::ios::binary) << text;
  return path;
}

std::string replaced(std::string text, const std::string &from, const std::string &to)
{
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

std::vector<std::string> lines(const std::string &text)
{
  std::vector<std::string> out;
  std::stringstream s(text);
  for (std::string line; std::getline(s, line);)
    out.push_back(line);
  return out;
}

int error_lines(const std::string &err)
{
  const auto all = lines(err);
  return static_cast<int>(std::count_if(all.begin(), all.end(), [](const auto &l) { return l.starts_with("error:"); }));
}

}  // namespace

TEST_CASE("scenario parse errors name the section and key")
{
  const std::string text = read(probe);
  CHECK_THROWS_WITH_AS(parse_scenario(replaced(text, "load = 50.0", "load = 50.0\nlaod = 1.0")),
                       doctest::Contains("[tag]: unknown key 'laod'"), ScenarioError);
  CHECK_THROWS_WITH_AS(parse_scenario(replaced(text, "inductance = 2.35559e-6\n\n[[relay]]", "\n[[relay]]")),
                       doctest::Contains("[reader]: missing required key 'inductance'"), ScenarioError);
  CHECK_THROWS_WITH_AS(parse_scenario(text + "\n[extra]\nx = 1\n"), doctest::Contains("unknown section [extra]"),
                       ScenarioError);
  CHECK_THROWS_WITH_AS(parse_scenario(replaced(text, "turns = 3", "turns = 3.5")),
                       doctest::Contains("'turns' must be an integer"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario("[drive\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario(""), ScenarioError);
}

TEST_CASE("validate")
{
  for (const auto *name : {"paper_default.toml", "separation_probe.toml", "small_search.toml"})
  {
    const auto r = capture([&](auto io) { return cli::cmd_validate(scenarios + "/" + name, io); });
    CHECK(r.code == 0);
    CHECK(r.out == "OK\n");
  }

  const auto empty = temp("empty.toml");
  auto r = capture([&](auto io) { return cli::cmd_validate(empty, io); });
  CHECK(r.code == cli::parse_error);
  CHECK(error_lines(r.err) == 1);

  r = capture([&](auto io) { return cli::cmd_validate(temp("missing_dir/none.toml"), io); });
  CHECK(r.code == cli::parse_error);

  const auto mismatch = temp("mismatch.toml", replaced(read(probe), "axial_c = [0.03, 0.05]", "axial_c = [0.03]"));
  r = capture([&](auto io) { return cli::cmd_validate(mismatch, io); });
  CHECK(r.code == cli::validation_error);
  CHECK(r.out.find("placements") != std::string::npos);
  CHECK(error_lines(r.err) == 1);
}

TEST_CASE("simulate")
{
  auto r = capture([&](auto io) { return cli::cmd_simulate(probe, SolverMode::corrected_phasor, std::nullopt, io); });
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 7);  // header, reader, relay, tag, load, header, summary
  CHECK(rows[0] == "index,current_A");
  CHECK(rows[1] == "0,0.05");
  CHECK(rows[5] == "P_in_W,P_o_W,eta,Z_in_ohm");
  CHECK(r.err.empty());

  SUBCASE("deterministic")
  {
    const auto again =
        capture([&](auto io) { return cli::cmd_simulate(probe, SolverMode::corrected_phasor, std::nullopt, io); });
    CHECK(again.out == r.out);
    const auto a = temp("sim_a.csv"), b = temp("sim_b.csv");
    capture([&](auto io) { return cli::cmd_simulate(probe, SolverMode::paper_literal, a, io); });
    capture([&](auto io) { return cli::cmd_simulate(probe, SolverMode::paper_literal, b, io); });
    CHECK(read(a) == read(b));
    CHECK(!read(a).empty());
  }

  SUBCASE("one coil row per coil")
  {
    const auto base = load_scenario(scenarios + "/paper_default.toml");
    const auto path = temp("paper.toml", read(scenarios + "/paper_default.toml"));
    r = capture([&](auto io) { return cli::cmd_simulate(path, SolverMode::corrected_phasor, std::nullopt, io); });
    CHECK(lines(r.out).size() == base.chain.relays.size() + 3 + 3);
  }

  SUBCASE("negative side")
  {
    const auto bad = temp("negative.toml", replaced(read(probe), "side_a = 0.10\nturns = 3\npitch = 0.002\nwire_radius = 0.5115e-3\nresistance",
                                                    "side_a = -0.10\nturns = 3\npitch = 0.002\nwire_radius = 0.5115e-3\nresistance"));
    r = capture([&](auto io) { return cli::cmd_simulate(bad, SolverMode::corrected_phasor, std::nullopt, io); });
    CHECK(r.code == cli::validation_error);
    CHECK(error_lines(r.err) == 1);
    CHECK(r.err.find("side_a") != std::string::npos);
  }

  SUBCASE("unwritable output")
  {
    r = capture([&](auto io) {
      return cli::cmd_simulate(probe, SolverMode::corrected_phasor, temp("no_such_dir/x.csv"), io);
    });
    CHECK(r.code == cli::bad_flag);
  }
}

TEST_CASE("sweep")
{
  auto sweep = [&](const std::string &file, const std::string &dim, const std::string &range) {
    return capture([&](auto io) { return cli::cmd_sweep(file, dim, range, std::nullopt, std::nullopt, io); });
  };

  auto r = sweep(probe, "axial_c:1", "0.01,0.15,29");
  REQUIRE(r.code == 0);
  auto rows = lines(r.out);
  REQUIRE(rows.size() == 30);
  CHECK(rows[0] == "swept_value,P_o_W,eta,I_o_A,P_o_literal_W,eta_literal,I_o_literal_A");
  double best = -1, arg = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
  {
    double x, p;
    char comma;
    std::stringstream(rows[i]) >> x >> comma >> p;
    if (p > best)
      best = p, arg = x;
  }
  CHECK(arg >= 0.03);
  CHECK(arg <= 0.08);

  r = sweep(probe, "angle:1", "0.3,0.9,1");
  REQUIRE(r.code == 0);
  rows = lines(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].starts_with("0.3,"));

  r = sweep(probe, "frequency", "12e6,15e6,4");
  CHECK(r.code == 0);
  CHECK(lines(r.out).size() == 5);
  r = sweep(probe, "n_relays", "0,3,4");
  CHECK(r.code == 0);
  CHECK(lines(r.out).size() == 5);
  r = sweep(probe, "capacitance:1", "40e-12,60e-12,3");
  CHECK(r.code == 0);

  for (const auto &[dim, range] : std::vector<std::pair<std::string, std::string>>{
           {"wobble:1", "0,1,2"}, {"axial_c:2", "0.01,0.1,3"}, {"capacitance:2", "1e-12,2e-12,2"},
           {"side:1", "0.05,0.1,2"}, {"axial_c", "0,1,2"}, {"axial_c:1", "0.1,0.01,3"},
           {"axial_c:1", "0.01,0.1"}, {"axial_c:1", "0.01,0.1,0"}, {"axial_c:1", "a,b,c"}})
  {
    CAPTURE(dim);
    CAPTURE(range);
    r = sweep(probe, dim, range);
    CHECK(r.code == cli::bad_flag);
    CHECK(error_lines(r.err) == 1);
  }

  // A sweep point that breaks the geometry is a validation error.
  r = sweep(probe, "axial_c:1", "-0.02,0.02,3");
  CHECK(r.code == cli::validation_error);
}

TEST_CASE("sweep wake threshold")
{
  const auto r = capture([&](auto io) {
    return cli::cmd_sweep(scenarios + "/paper_default.toml", "n_relays", "2,14,13", std::nullopt, 1e-3, io);
  });
  REQUIRE(r.code == 0);
  CHECK(r.err.find("wake threshold") != std::string::npos);
  CHECK(r.err.find("first below") != std::string::npos);
}

TEST_CASE("optimize")
{
  const auto out = temp("opt.csv"), exact = temp("exact.csv");
  auto r = capture([&](auto io) { return cli::cmd_optimize(small, "1..1", out, false, io); });
  REQUIRE(r.code == 0);
  auto e = capture([&](auto io) { return cli::cmd_optimize(small, "1", exact, true, io); });
  REQUIRE(e.code == 0);
  CHECK(read(out) == read(exact));
  CHECK(r.out.find("best n = 1") != std::string::npos);
  CHECK(lines(read(out + ".history.csv")).size() == 61);

  r = capture([&](auto io) { return cli::cmd_optimize(small, "1..3", out, false, io); });
  REQUIRE(r.code == 0);
  const auto rows = lines(read(out));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "n,best_P_o_W,eta,feasible,side:1,axial_c:1");
  for (int n = 1; n <= 3; ++n)
    CHECK(rows[n].starts_with(std::to_string(n) + ","));

  const auto again = temp("opt_again.csv");
  capture([&](auto io) { return cli::cmd_optimize(small, "1..3", again, false, io); });
  CHECK(read(again) == read(out));
  CHECK(read(again + ".history.csv") == read(out + ".history.csv"));

  const auto zero_current = temp("zero_i.toml", replaced(read(small), "i_max = 0.1", "i_max = 0.0"));
  r = capture([&](auto io) { return cli::cmd_optimize(zero_current, "1..2", out, false, io); });
  CHECK(r.code == cli::infeasible);
  CHECK(error_lines(r.err) == 1);
  CHECK(lines(read(out)).size() == 3);

  r = capture([&](auto io) { return cli::cmd_optimize(probe, "1", out, false, io); });
  CHECK(r.code == cli::parse_error);
  r = capture([&](auto io) { return cli::cmd_optimize(small, "3..1", out, false, io); });
  CHECK(r.code == cli::bad_flag);
  r = capture([&](auto io) { return cli::cmd_optimize(small, "x", out, false, io); });
  CHECK(r.code == cli::bad_flag);
  const auto bad_rho = temp("bad_rho.toml", replaced(read(small), "seed = 7", "seed = 7\nrho = 1.5"));
  r = capture([&](auto io) { return cli::cmd_optimize(bad_rho, "1", out, false, io); });
  CHECK(r.code == cli::validation_error);
}

TEST_CASE("dump round trip")
{
  for (const auto *name : {"paper_default.toml", "separation_probe.toml", "small_search.toml"})
  {
    const auto s = load_scenario(scenarios + "/" + name);
    const auto text = dump_scenario(s);
    CHECK(parse_scenario(text) == s);
    CHECK(dump_scenario(parse_scenario(text)) == text);
  }

  // Arbitrary doubles survive the text form exactly.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(1e-4, 1.0);
  auto base = load_scenario(scenarios + "/paper_default.toml");
  for (int trial = 0; trial < 50; ++trial)
  {
    auto s = base;
    s.chain.frequency = u(rng) * 1e8;
    s.chain.reader.current = u(rng);
    s.chain.reader.inductance = u(rng) * 1e-5;
    s.chain.coupling = trial % 2 ? CouplingModel::filament : CouplingModel::analytic;
    s.chain.all_pairs = trial % 3 == 0;
    for (auto &relay : s.chain.relays)
    {
      relay.coil.side_a = u(rng);
      relay.coil.side_b = u(rng);
      relay.coil.shape = CoilShape::rectangle;
      relay.resistance = trial % 2 ? std::optional<double>(u(rng)) : std::nullopt;
      relay.capacitance = trial % 4 ? std::optional<double>(u(rng) * 1e-10) : std::nullopt;
    }
    for (auto &p : s.chain.placements)
      p = {u(rng), u(rng), u(rng)};
    s.chain.tag.load = u(rng) * 1e4;
    s.constraints = trial % 5 ? std::optional<ConstraintSet>({u(rng), u(rng), u(rng)}) : std::nullopt;
    if (trial % 3 == 1)
      s.raca.reset();
    else
      s.raca->options.seed = rng() >> 1;  // TOML integers are signed 64-bit
    CHECK(parse_scenario(dump_scenario(s)) == s);
  }

  const auto path = temp("dumped.toml");
  const auto r = capture([&](auto io) { return cli::cmd_dump(small, path, io); });
  CHECK(r.code == 0);
  CHECK(load_scenario(path) == load_scenario(small));
}
