#include "coilchain/scenario.hpp"

#include <cstdint>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <toml.hpp>

namespace coilchain
{

namespace
{

[[noreturn]] void fail(const std::string &where, const std::string &what)
{
  throw ScenarioError(where + ": " + what);
}

// Typed access to one table that remembers which keys were read, so that
// leftovers can be reported as unknown.
class Section
{
public:
  Section(const toml::table &table, std::string name) : table_(table), name_(std::move(name)) {}

  const std::string &name() const { return name_; }

  bool has(const std::string &key) const { return table_.contains(key); }

  double number(const std::string &key)
  {
    const auto *node = get(key);
    if (!node)
      fail(name_, "missing required key '" + key + "'");
    return as_number(*node, key);
  }

  double number_or(const std::string &key, double fallback)
  {
    const auto *node = get(key);
    return node ? as_number(*node, key) : fallback;
  }

  std::optional<double> maybe_number(const std::string &key)
  {
    const auto *node = get(key);
    if (!node)
      return std::nullopt;
    return as_number(*node, key);
  }

  std::int64_t integer(const std::string &key)
  {
    const auto *node = get(key);
    if (!node)
      fail(name_, "missing required key '" + key + "'");
    return as_integer(*node, key);
  }

  std::int64_t integer_or(const std::string &key, std::int64_t fallback)
  {
    const auto *node = get(key);
    return node ? as_integer(*node, key) : fallback;
  }

  std::string string(const std::string &key)
  {
    const auto *node = get(key);
    if (!node)
      fail(name_, "missing required key '" + key + "'");
    return as_string(*node, key);
  }

  std::string string_or(const std::string &key, const std::string &fallback)
  {
    const auto *node = get(key);
    return node ? as_string(*node, key) : fallback;
  }

  bool boolean_or(const std::string &key, bool fallback)
  {
    const auto *node = get(key);
    if (!node)
      return fallback;
    if (!node->is_boolean())
      fail(name_, "'" + key + "' must be true or false");
    return *node->value<bool>();
  }

  std::vector<double> numbers(const std::string &key)
  {
    const auto *node = get(key);
    if (!node)
      fail(name_, "missing required key '" + key + "'");
    return as_numbers(*node, key);
  }

  std::optional<std::vector<double>> maybe_numbers(const std::string &key)
  {
    const auto *node = get(key);
    if (!node)
      return std::nullopt;
    return as_numbers(*node, key);
  }

  const toml::array *tables(const std::string &key)
  {
    const auto *node = get(key);
    if (!node)
      return nullptr;
    const auto *arr = node->as_array();
    if (!arr || !arr->is_array_of_tables())
      fail(name_, "'" + key + "' must be an array of tables ([[" + name_ + "." + key + "]])");
    return arr;
  }

  void finish() const
  {
    for (const auto &[key, value] : table_)
      if (!used_.count(std::string(key.str())))
        fail(name_, "unknown key '" + std::string(key.str()) + "'");
  }

private:
  const toml::node *get(const std::string &key)
  {
    used_.insert(key);
    return table_.get(key);
  }

  double as_number(const toml::node &node, const std::string &key) const
  {
    if (node.is_floating_point())
      return *node.value<double>();
    if (node.is_integer())
      return static_cast<double>(*node.value<std::int64_t>());
    fail(name_, "'" + key + "' must be a number");
  }

  std::int64_t as_integer(const toml::node &node, const std::string &key) const
  {
    if (!node.is_integer())
      fail(name_, "'" + key + "' must be an integer");
    return *node.value<std::int64_t>();
  }

  std::string as_string(const toml::node &node, const std::string &key) const
  {
    if (!node.is_string())
      fail(name_, "'" + key + "' must be a string");
    return *node.value<std::string>();
  }

  std::vector<double> as_numbers(const toml::node &node, const std::string &key) const
  {
    const auto *arr = node.as_array();
    if (!arr)
      fail(name_, "'" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto &item : *arr)
      out.push_back(as_number(item, key + "[" + std::to_string(out.size()) + "]"));
    return out;
  }

  const toml::table &table_;
  std::string name_;
  std::set<std::string> used_;
};

const toml::table *section(const toml::table &root, const std::string &name, bool required)
{
  const auto *node = root.get(name);
  if (!node)
  {
    if (required)
      fail("[" + name + "]", "missing required section");
    return nullptr;
  }
  const auto *table = node->as_table();
  if (!table)
    fail("[" + name + "]", "must be a table");
  return table;
}

CoilSpec read_coil(Section &s)
{
  CoilSpec c;
  const std::string shape = s.string("shape");
  if (shape == "square")
    c.shape = CoilShape::square;
  else if (shape == "rectangle")
    c.shape = CoilShape::rectangle;
  else
    fail(s.name(), "shape must be \"square\" or \"rectangle\", got \"" + shape + "\"");
  c.side_a = s.number("side_a");
  c.side_b = c.shape == CoilShape::square ? s.number_or("side_b", c.side_a) : s.number("side_b");
  const auto turns = s.integer("turns");
  if (turns < std::numeric_limits<int>::min() || turns > std::numeric_limits<int>::max())
    fail(s.name(), "'turns' out of range");
  c.turns = static_cast<int>(turns);
  c.pitch = s.number("pitch");
  c.wire_radius = s.number("wire_radius");
  return c;
}

CouplingModel read_coupling(Section &s)
{
  const std::string model = s.string_or("coupling", "analytic");
  if (model == "analytic")
    return CouplingModel::analytic;
  if (model == "filament")
    return CouplingModel::filament;
  fail(s.name(), "coupling must be \"analytic\" or \"filament\", got \"" + model + "\"");
}

toml::table coil_table(const CoilSpec &c)
{
  return toml::table{
      {"shape", c.shape == CoilShape::square ? "square" : "rectangle"},
      {"side_a", c.side_a},
      {"side_b", c.side_b},
      {"turns", c.turns},
      {"pitch", c.pitch},
      {"wire_radius", c.wire_radius},
  };
}

toml::array number_array(const std::vector<double> &values)
{
  toml::array out;
  for (double v : values)
    out.push_back(v);
  return out;
}

}  // namespace

Scenario parse_scenario(const std::string &text, const std::string &source)
{
  toml::table root;
  try
  {
    root = toml::parse(text, source);
  }
  catch (const toml::parse_error &e)
  {
    const auto &where = e.source().begin;
    throw ScenarioError(source + ":" + std::to_string(where.line) + ":" + std::to_string(where.column) + ": " +
                        std::string(e.description()));
  }

  static const std::set<std::string> known{"drive", "reader", "relay", "tag", "placements", "constraints", "raca"};
  for (const auto &[key, value] : root)
    if (!known.count(std::string(key.str())))
      fail(source, "unknown section [" + std::string(key.str()) + "]");

  Scenario out;
  ChainConfig &chain = out.chain;

  {
    Section s(*section(root, "drive", true), "[drive]");
    chain.frequency = s.number_or("frequency", 13.56e6);
    chain.reader.current = s.number("current");
    chain.coupling = read_coupling(s);
    chain.all_pairs = s.boolean_or("all_pairs", false);
    s.finish();
  }
  {
    Section s(*section(root, "reader", true), "[reader]");
    chain.reader.coil = read_coil(s);
    chain.reader.inductance = s.number("inductance");
    s.finish();
  }
  if (const auto *node = root.get("relay"))
  {
    const auto *arr = node->as_array();
    if (!arr || !arr->is_array_of_tables())
      fail("[[relay]]", "relays must be written as [[relay]] tables");
    for (const auto &item : *arr)
    {
      Section s(*item.as_table(), "[[relay]] #" + std::to_string(chain.relays.size() + 1));
      RelaySpec relay;
      relay.coil = read_coil(s);
      relay.resistance = s.maybe_number("resistance");
      relay.capacitance = s.maybe_number("capacitance");
      s.finish();
      chain.relays.push_back(relay);
    }
  }
  {
    Section s(*section(root, "tag", true), "[tag]");
    chain.tag.coil = read_coil(s);
    chain.tag.inductance = s.number("inductance");
    chain.tag.load = s.number("load");
    s.finish();
  }
  {
    Section s(*section(root, "placements", true), "[placements]");
    const auto axial = s.numbers("axial_c");
    const auto lateral = s.maybe_numbers("lateral_d").value_or(std::vector<double>(axial.size(), 0.0));
    const auto angle = s.maybe_numbers("angle_theta").value_or(std::vector<double>(axial.size(), 0.0));
    if (lateral.size() != axial.size() || angle.size() != axial.size())
      fail("[placements]", "lateral_d, axial_c and angle_theta must have the same length");
    for (std::size_t k = 0; k < axial.size(); ++k)
      chain.placements.push_back({lateral[k], axial[k], angle[k]});
    s.finish();
  }
  if (const auto *t = section(root, "constraints", false))
  {
    Section s(*t, "[constraints]");
    out.constraints = ConstraintSet{s.number("eta_min"), s.number("i_max"), s.number("s_max")};
    s.finish();
  }
  if (const auto *t = section(root, "raca", false))
  {
    Section s(*t, "[raca]");
    RacaSection raca;
    const RacaOptions defaults;
    raca.options.iterations = static_cast<int>(s.integer_or("iterations", defaults.iterations));
    raca.options.rho = s.number_or("rho", defaults.rho);
    raca.options.q0 = s.number_or("q0", defaults.q0);
    raca.options.ants = static_cast<int>(s.integer_or("ants", defaults.ants));
    const auto seed = s.integer_or("seed", static_cast<std::int64_t>(defaults.seed));
    if (seed < 0)
      fail("[raca]", "'seed' must be non-negative");
    raca.options.seed = static_cast<std::uint64_t>(seed);
    if (const auto *dims = s.tables("dimension"))
    {
      for (const auto &item : *dims)
      {
        Section d(*item.as_table(), "[[raca.dimension]] #" + std::to_string(raca.dimensions.size() + 1));
        Dimension dim{d.string("name"), d.numbers("values")};
        d.finish();
        try
        {
          parse_parameter(dim.name);
        }
        catch (const std::invalid_argument &e)
        {
          fail(d.name(), e.what());
        }
        if (dim.values.empty())
          fail(d.name(), "'values' must not be empty");
        raca.dimensions.push_back(std::move(dim));
      }
    }
    s.finish();
    out.raca = std::move(raca);
  }
  return out;
}

Scenario load_scenario(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ScenarioError(path + ": cannot read file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path);
}

std::string dump_scenario(const Scenario &s)
{
  const ChainConfig &c = s.chain;
  toml::table root;
  root.insert("drive", toml::table{
                           {"frequency", c.frequency},
                           {"current", c.reader.current},
                           {"coupling", c.coupling == CouplingModel::analytic ? "analytic" : "filament"},
                           {"all_pairs", c.all_pairs},
                       });

  auto reader = coil_table(c.reader.coil);
  reader.insert("inductance", c.reader.inductance);
  root.insert("reader", std::move(reader));

  if (!c.relays.empty())
  {
    toml::array relays;
    for (const auto &r : c.relays)
    {
      auto t = coil_table(r.coil);
      if (r.resistance)
        t.insert("resistance", *r.resistance);
      if (r.capacitance)
        t.insert("capacitance", *r.capacitance);
      relays.push_back(std::move(t));
    }
    root.insert("relay", std::move(relays));
  }

  auto tag = coil_table(c.tag.coil);
  tag.insert("inductance", c.tag.inductance);
  tag.insert("load", c.tag.load);
  root.insert("tag", std::move(tag));

  std::vector<double> lateral, axial, angle;
  for (const auto &p : c.placements)
  {
    lateral.push_back(p.lateral_d);
    axial.push_back(p.axial_c);
    angle.push_back(p.angle_theta);
  }
  root.insert("placements", toml::table{
                                {"lateral_d", number_array(lateral)},
                                {"axial_c", number_array(axial)},
                                {"angle_theta", number_array(angle)},
                            });

  if (s.constraints)
  {
    root.insert("constraints", toml::table{
                                   {"eta_min", s.constraints->eta_min},
                                   {"i_max", s.constraints->i_max},
                                   {"s_max", s.constraints->s_max},
                               });
  }
  if (s.raca)
  {
    const auto &o = s.raca->options;
    toml::table raca{
        {"iterations", o.iterations},
        {"rho", o.rho},
        {"q0", o.q0},
        {"ants", o.ants},
        {"seed", static_cast<std::int64_t>(o.seed)},
    };
    if (!s.raca->dimensions.empty())
    {
      toml::array dims;
      for (const auto &d : s.raca->dimensions)
        dims.push_back(toml::table{{"name", d.name}, {"values", number_array(d.values)}});
      raca.insert("dimension", std::move(dims));
    }
    root.insert("raca", std::move(raca));
  }

  std::ostringstream out;
  out << root << "\n";
  return out.str();
}

}  // namespace coilchain
