#include <lteu/scenario.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

namespace lteu::scenario {

using engine::ScenarioConfig;

namespace {

std::string_view
trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    {
      return {};
    }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string
quote(std::string_view s)
{
  return "'" + std::string(s) + "'";
}

double
to_double(std::string_view v)
{
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out))
    {
      throw ConfigError("expected a number, got " + quote(v));
    }
  return out;
}

template<typename Int>
Int
to_integer(std::string_view v)
{
  Int out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    {
      throw ConfigError("expected an integer, got " + quote(v));
    }
  return out;
}

bool
to_bool(std::string_view v)
{
  if (v == "true" || v == "yes" || v == "1")
    {
      return true;
    }
  if (v == "false" || v == "no" || v == "0")
    {
      return false;
    }
  throw ConfigError("expected true or false, got " + quote(v));
}

std::vector<std::string>
to_list(std::string_view v)
{
  std::vector<std::string> out;
  std::string token;
  for (char c : v)
    {
      if (c == ',' || c == ' ' || c == '\t')
        {
          if (!token.empty())
            {
              out.push_back(std::move(token));
              token.clear();
            }
          continue;
        }
      token.push_back(c);
    }
  if (!token.empty())
    {
      out.push_back(std::move(token));
    }
  return out;
}

std::string
fmt(double v)
{
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string
fmt(bool v)
{
  return v ? "true" : "false";
}

template<typename Int>
std::string
fmt_int(Int v)
{
  return std::to_string(v);
}

std::string
join(const auto& items, auto&& to_text)
{
  std::string out;
  for (const auto& item : items)
    {
      if (!out.empty())
        {
          out += ' ';
        }
      out += to_text(item);
    }
  return out;
}

double
positive(double v)
{
  if (!(v > 0.0))
    {
      throw ConfigError("must be positive, got " + fmt(v));
    }
  return v;
}

double
nonnegative(double v)
{
  if (v < 0.0)
    {
      throw ConfigError("must be nonnegative, got " + fmt(v));
    }
  return v;
}

double
unit_interval(double v)
{
  if (v < 0.0 || v > 1.0)
    {
      throw ConfigError("must lie in [0,1], got " + fmt(v));
    }
  return v;
}

int
at_least(int v, int lo)
{
  if (v < lo)
    {
      throw ConfigError("must be at least " + std::to_string(lo) + ", got " + std::to_string(v));
    }
  return v;
}

struct Field
{
  std::string key;
  std::function<void(ScenarioConfig&, std::string_view)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

// Plain double/int/bool fields.
#define LTEU_DOUBLE(name, member, check)                                                                              \
  Field{name, [](ScenarioConfig& c, std::string_view v) { c.member = check(to_double(v)); },                       \
        [](const ScenarioConfig& c) { return fmt(c.member); }}
#define LTEU_INT(name, member, lo)                                                                                    \
  Field{name, [](ScenarioConfig& c, std::string_view v) { c.member = at_least(to_integer<int>(v), lo); },          \
        [](const ScenarioConfig& c) { return fmt_int(c.member); }}
#define LTEU_BOOL(name, member)                                                                                       \
  Field{name, [](ScenarioConfig& c, std::string_view v) { c.member = to_bool(v); },                                \
        [](const ScenarioConfig& c) { return fmt(c.member); }}

double
any(double v)
{
  return v;
}

const std::vector<Field>&
general_fields()
{
  static const std::vector<Field> fields{
    Field{"seed", [](ScenarioConfig& c, std::string_view v) { c.seed = to_integer<std::uint64_t>(v); },
          [](const ScenarioConfig& c) { return c.seed ? fmt_int(*c.seed) : std::string(); }},
    LTEU_DOUBLE("sim_time_s", sim_time_s, positive),
    LTEU_DOUBLE("dt_s", dt_s, positive),
    LTEU_INT("n_macro", n_macro, 1),
    LTEU_INT("micro_per_cell", micro_per_cell, 0),
    LTEU_INT("n_ues", n_ues, 0),
    Field{"output", [](ScenarioConfig& c, std::string_view v) { c.output_path = std::string(v); },
          [](const ScenarioConfig& c) { return c.output_path; }},
  };
  return fields;
}

const std::vector<Field>&
radio_fields()
{
  static const std::vector<Field> fields{
    LTEU_DOUBLE("cell_radius_m", radio.cell_radius_m, positive),
    LTEU_DOUBLE("macro_tx_dbm", radio.macro_tx_dbm, any),
    LTEU_DOUBLE("micro_tx_dbm", radio.micro_tx_dbm, any),
    LTEU_DOUBLE("macro_shadow_std_db", radio.macro_shadow_std_db, nonnegative),
    LTEU_DOUBLE("micro_shadow_std_db", radio.micro_shadow_std_db, nonnegative),
    LTEU_DOUBLE("macro_pl_intercept_db", radio.macro_path_loss.intercept_db, any),
    LTEU_DOUBLE("macro_pl_slope_db", radio.macro_path_loss.slope_db, nonnegative),
    LTEU_DOUBLE("micro_pl_intercept_db", radio.micro_path_loss.intercept_db, any),
    LTEU_DOUBLE("micro_pl_slope_db", radio.micro_path_loss.slope_db, nonnegative),
    LTEU_DOUBLE("bandwidth_mhz", radio.bandwidth_mhz, positive),
    Field{"noise_dbm", [](ScenarioConfig& c, std::string_view v) { c.radio.noise_dbm = to_double(v); },
          [](const ScenarioConfig& c) { return c.radio.noise_dbm ? fmt(*c.radio.noise_dbm) : std::string(); }},
    LTEU_DOUBLE("per_ue_load_mbps", radio.per_ue_load_mbps, nonnegative),
    LTEU_DOUBLE("ue_speed_min_kmh", mobility.speed_min_kmh, nonnegative),
    LTEU_DOUBLE("ue_speed_max_kmh", mobility.speed_max_kmh, nonnegative),
  };
  return fields;
}

const std::vector<Field>&
handover_fields()
{
  static const std::vector<Field> fields{
    LTEU_DOUBLE("hhm_db", handover.hhm_db, nonnegative),
    LTEU_DOUBLE("velocity_gate_kmh", handover.velocity_gate_kmh, nonnegative),
    LTEU_DOUBLE("reactive_threshold_dbm", handover.reactive_threshold_dbm, any),
    Field{"decider",
          [](ScenarioConfig& c, std::string_view v) {
            if (v == "crisp")
              {
                c.handover.decider = handover::DeciderKind::crisp;
              }
            else if (v == "fuzzy")
              {
                c.handover.decider = handover::DeciderKind::fuzzy;
              }
            else
              {
                throw ConfigError("expected crisp or fuzzy, got " + quote(v));
              }
          },
          [](const ScenarioConfig& c) {
            return std::string(c.handover.decider == handover::DeciderKind::fuzzy ? "fuzzy" : "crisp");
          }},
    LTEU_DOUBLE("fuzzy_threshold", handover.fuzzy_threshold, unit_interval),
    LTEU_DOUBLE("prediction_horizon_s", handover.prediction_horizon_s, nonnegative),
    LTEU_DOUBLE("pingpong_window_s", handover.pingpong_window_s, nonnegative),
    LTEU_INT("fuzzy_resolution", fuzzy_resolution, 3),
    LTEU_DOUBLE("latency_real_time_ms", latency.real_time_ms, any),
    LTEU_DOUBLE("latency_non_real_time_ms", latency.non_real_time_ms, any),
  };
  return fields;
}

std::set<CellId>
to_cell_set(std::string_view v)
{
  std::set<CellId> out;
  for (const auto& t : to_list(v))
    {
      out.insert(CellId{to_integer<std::int32_t>(t)});
    }
  return out;
}

const std::vector<Field>&
auth_fields()
{
  static const std::vector<Field> fields{
    LTEU_BOOL("default_open", access.default_open),
    Field{"closed_cells", [](ScenarioConfig& c, std::string_view v) { c.access.closed_cells = to_cell_set(v); },
          [](const ScenarioConfig& c) {
            return join(c.access.closed_cells, [](CellId id) { return std::to_string(to_int(id)); });
          }},
    LTEU_BOOL("auto_grant", access.auto_grant),
    LTEU_DOUBLE("grant_delay_s", access.grant_delay_s, nonnegative),
  };
  return fields;
}

const std::vector<Field>&
coexist_fields()
{
  static const std::vector<Field> fields{
    Field{"n_slots",
          [](ScenarioConfig& c, std::string_view v) {
            c.coexist.n_slots = to_integer<std::int64_t>(v);
            if (c.coexist.n_slots < 1)
              {
                throw ConfigError("must be at least 1");
              }
          },
          [](const ScenarioConfig& c) { return fmt_int(c.coexist.n_slots); }},
    Field{"mode", [](ScenarioConfig& c, std::string_view v) { c.coexist.mode = coexist::parse_mode(v); },
          [](const ScenarioConfig& c) { return std::string(coexist::to_string(c.coexist.mode)); }},
    LTEU_DOUBLE("abs_ratio", coexist.abs_ratio, unit_interval),
    LTEU_BOOL("wifi_rts_cts", coexist.wifi_rts_cts),
    LTEU_INT("cca_slots", coexist.cca_slots, 1),
    LTEU_INT("ul_lookahead_slots", coexist.ul_lookahead_slots, 0),
    LTEU_INT("cw_min", coexist.cw_min, 0),
    LTEU_INT("cw_max", coexist.cw_max, 0),
    LTEU_INT("wifi_packet_slots", coexist.wifi_packet_slots, 1),
    LTEU_INT("lteu_burst_slots", coexist.lteu_burst_slots, 1),
    LTEU_INT("lbt_ecca_max", coexist.lbt_ecca_max, 0),
    LTEU_INT("ul_grant_period_slots", coexist.ul_grant_period_slots, 1),
    Field{"nodes",
          [](ScenarioConfig& c, std::string_view v) {
            c.coexist.nodes.clear();
            for (const auto& t : to_list(v))
              {
                c.coexist.nodes.push_back(coexist::parse_tech(t));
              }
          },
          [](const ScenarioConfig& c) {
            return join(c.coexist.nodes, [](coexist::Tech t) { return std::string(coexist::to_string(t)); });
          }},
    LTEU_INT("seeds", coexist_seeds, 1),
  };
  return fields;
}

#undef LTEU_DOUBLE
#undef LTEU_INT
#undef LTEU_BOOL

const std::vector<Field>*
fields_of(std::string_view section)
{
  if (section == "general")
    {
      return &general_fields();
    }
  if (section == "radio")
    {
      return &radio_fields();
    }
  if (section == "handover")
    {
      return &handover_fields();
    }
  if (section == "auth")
    {
      return &auth_fields();
    }
  if (section == "coexist")
    {
      return &coexist_fields();
    }
  return nullptr;
}

bool
is_section(std::string_view s)
{
  return fields_of(s) != nullptr || s == "fuzzy_rules" || s == "fuzzy_terms";
}

// `owner.<cell>`, `users.<cell>`, `auto_grant.<cell>`, `grant_delay_s.<cell>`.
bool
set_auth_per_cell(ScenarioConfig& c, std::string_view key, std::string_view value)
{
  const auto dot = key.find('.');
  if (dot == std::string_view::npos)
    {
      return false;
    }
  const auto name = key.substr(0, dot);
  const CellId cell{to_integer<std::int32_t>(key.substr(dot + 1))};
  if (name == "owner")
    {
      if (value.empty())
        {
          throw ConfigError("owner name must not be empty");
        }
      c.access.owners[cell] = std::string(value);
    }
  else if (name == "users")
    {
      auto list = to_list(value);
      c.access.users[cell] = std::set<std::string>(list.begin(), list.end());
    }
  else if (name == "auto_grant")
    {
      c.access.auto_grant_per_cell[cell] = to_bool(value);
    }
  else if (name == "grant_delay_s")
    {
      c.access.grant_delay_per_cell[cell] = nonnegative(to_double(value));
    }
  else
    {
      return false;
    }
  return true;
}

void
set_fuzzy_term(ScenarioConfig& c, std::string_view key, std::string_view value)
{
  const auto dot = key.rfind('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == key.size())
    {
      throw ConfigError("fuzzy term key must be <variable>.<term>, got " + quote(key));
    }
  engine::TermOverride o{std::string(key.substr(0, dot)), std::string(key.substr(dot + 1)),
                         fuzzy::MembershipFunction::parse(value)};
  for (auto& existing : c.fuzzy_terms)
    {
      if (existing.variable == o.variable && existing.term == o.term)
        {
          existing = std::move(o);
          return;
        }
    }
  c.fuzzy_terms.push_back(std::move(o));
}

// Throws ConfigError without location; callers add it.
void
set_key(ScenarioConfig& c, std::string_view section, std::string_view key, std::string_view value)
{
  if (section == "fuzzy_terms")
    {
      set_fuzzy_term(c, key, value);
      return;
    }
  const auto* fields = fields_of(section);
  if (!fields)
    {
      throw ConfigError("unknown section [" + std::string(section) + "]");
    }
  for (const auto& f : *fields)
    {
      if (f.key == key)
        {
          f.set(c, value);
          return;
        }
    }
  if (section == "auth" && set_auth_per_cell(c, key, value))
    {
      return;
    }
  throw ConfigError("unknown key " + quote(key) + " in [" + std::string(section) + "]");
}

std::string
located(int line, std::string_view section, std::string_view key, const std::exception& e)
{
  std::string out = "line " + std::to_string(line) + ": ";
  if (!section.empty() && !key.empty())
    {
      out += "[" + std::string(section) + "] " + std::string(key) + ": ";
    }
  return out + e.what();
}

} // namespace

ScenarioConfig
parse_scenario_file(std::string_view text)
{
  ScenarioConfig cfg;
  std::set<std::string, std::less<>> seen_sections;
  std::set<std::string, std::less<>> seen_keys;
  std::string section;
  std::string rules;
  bool in_rules = false;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size())
    {
      const auto end = std::min(text.find('\n', pos), text.size());
      const std::string_view raw = text.substr(pos, end - pos);
      pos = end + 1;
      ++line_no;
      const std::string_view line = trim(raw);

      if (line.size() >= 2 && line.front() == '[' && line.back() == ']')
        {
          section = std::string(trim(line.substr(1, line.size() - 2)));
          if (!is_section(section))
            {
              throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
            }
          if (!seen_sections.insert(section).second)
            {
              throw ConfigError("line " + std::to_string(line_no) + ": duplicate section [" + section + "]");
            }
          in_rules = section == "fuzzy_rules";
          continue;
        }
      if (in_rules)
        {
          rules.append(raw);
          rules.push_back('\n');
          continue;
        }

      const std::string_view content = trim(line.substr(0, line.find('#')));
      if (content.empty())
        {
          continue;
        }
      if (section.empty())
        {
          throw ConfigError("line " + std::to_string(line_no) + ": key outside of any section");
        }
      const auto eq = content.find('=');
      if (eq == std::string_view::npos)
        {
          throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value', got " + quote(content));
        }
      const std::string_view key = trim(content.substr(0, eq));
      const std::string_view value = trim(content.substr(eq + 1));
      if (key.empty())
        {
          throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        }
      if (!seen_keys.insert(section + "." + std::string(key)).second)
        {
          throw ConfigError("line " + std::to_string(line_no) + ": duplicate key " + quote(key) + " in [" + section
                            + "]");
        }
      try
        {
          set_key(cfg, section, key, value);
        }
      catch (const Error& e)
        {
          throw ConfigError(located(line_no, section, key, e));
        }
    }

  if (!seen_sections.contains("general"))
    {
      throw ConfigError("missing required section [general]");
    }
  if (seen_sections.contains("coexist") && !seen_keys.contains("coexist.nodes"))
    {
      throw ConfigError("missing required key 'nodes' in section [coexist]");
    }

  // Leading and trailing blank lines of the rule block are not significant.
  const auto first = rules.find_first_not_of(" \t\r\n");
  if (first == std::string::npos)
    {
      rules.clear();
    }
  else
    {
      rules.erase(0, rules.rfind('\n', first) == std::string::npos ? 0 : rules.rfind('\n', first) + 1);
      rules.erase(rules.find_last_not_of(" \t\r\n") + 1);
      rules.push_back('\n');
    }
  cfg.fuzzy_rules = std::move(rules);

  cfg.validate();
  return cfg;
}

ScenarioConfig
load_scenario_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    {
      throw ConfigError("cannot open scenario file '" + path.string() + "'");
    }
  std::ostringstream text;
  text << in.rdbuf();
  try
    {
      return parse_scenario_file(text.str());
    }
  catch (const ConfigError& e)
    {
      throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string
render_scenario(const ScenarioConfig& cfg)
{
  std::ostringstream out;
  auto emit_section = [&](const char* name, const std::vector<Field>& fields) {
    out << '[' << name << "]\n";
    for (const auto& f : fields)
      {
        const std::string v = f.get(cfg);
        // Optional fields are omitted rather than written empty.
        if (v.empty() && (f.key == "seed" || f.key == "noise_dbm" || f.key == "output"))
          {
            continue;
          }
        out << f.key << " = " << v << '\n';
      }
  };

  emit_section("general", general_fields());
  out << '\n';
  emit_section("radio", radio_fields());
  out << '\n';
  emit_section("handover", handover_fields());
  out << '\n';
  emit_section("auth", auth_fields());
  for (const auto& [cell, owner] : cfg.access.owners)
    {
      out << "owner." << to_int(cell) << " = " << owner << '\n';
    }
  for (const auto& [cell, users] : cfg.access.users)
    {
      out << "users." << to_int(cell) << " = " << join(users, [](const std::string& u) { return u; }) << '\n';
    }
  for (const auto& [cell, flag] : cfg.access.auto_grant_per_cell)
    {
      out << "auto_grant." << to_int(cell) << " = " << fmt(flag) << '\n';
    }
  for (const auto& [cell, delay] : cfg.access.grant_delay_per_cell)
    {
      out << "grant_delay_s." << to_int(cell) << " = " << fmt(delay) << '\n';
    }
  out << '\n';
  emit_section("coexist", coexist_fields());
  if (!cfg.fuzzy_terms.empty())
    {
      out << "\n[fuzzy_terms]\n";
      for (const auto& o : cfg.fuzzy_terms)
        {
          out << o.variable << '.' << o.term << " = " << o.shape.render() << '\n';
        }
    }
  if (!cfg.fuzzy_rules.empty())
    {
      out << "\n[fuzzy_rules]\n" << cfg.fuzzy_rules;
    }
  return out.str();
}

void
apply_override(ScenarioConfig& cfg, std::string_view assignment)
{
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq)
    {
      throw ConfigError("override must look like section.key=value, got " + quote(assignment));
    }
  const auto section = trim(assignment.substr(0, dot));
  const auto key = trim(assignment.substr(dot + 1, eq - dot - 1));
  const auto value = trim(assignment.substr(eq + 1));
  if (section == "fuzzy_rules")
    {
      throw ConfigError("[fuzzy_rules] cannot be overridden from the command line");
    }
  try
    {
      set_key(cfg, section, key, value);
    }
  catch (const Error& e)
    {
      throw ConfigError("override " + quote(assignment) + ": " + e.what());
    }
  cfg.validate();
}

} // namespace lteu::scenario
