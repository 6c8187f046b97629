#include "dynsense/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace dynsense {

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& text, const char* expected) {
  throw std::invalid_argument(key + ": cannot parse '" + text + "' as " + expected);
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v))
    bad_value(key, text, "a finite number");
  return v;
}

template <typename Int>
Int to_integer(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  Int v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty())
    bad_value(key, text, std::is_signed_v<Int> ? "an integer" : "a non-negative integer");
  return v;
}

template <typename T, typename Parse>
std::vector<T> to_list(const std::string& key, const std::string& text, Parse parse) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse(key, item));
  if (out.empty()) throw std::invalid_argument(key + ": list must not be empty");
  return out;
}

template <typename T, typename Fmt>
std::string join(const std::vector<T>& values, Fmt fmt) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + fmt(values[i]);
  return out;
}

std::string fmt_size(std::size_t v) { return std::to_string(v); }
std::string fmt_int(int v) { return std::to_string(v); }

struct Field {
  const char* key;
  std::function<void(ExperimentConfig&, const std::string& key, const std::string& value)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define DS_DOUBLE(name, member)                                                                      \
  Field {                                                                                            \
    name, [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.member = to_double(k, v); }, \
        [](const ExperimentConfig& c) { return format_number(c.member); }                           \
  }
#define DS_SIZE(name, member)                                                                        \
  Field {                                                                                            \
    name,                                                                                            \
        [](ExperimentConfig& c, const std::string& k, const std::string& v) {                        \
          c.member = to_integer<std::size_t>(k, v);                                                  \
        },                                                                                           \
        [](const ExperimentConfig& c) { return std::to_string(c.member); }                          \
  }
#define DS_INT(name, member)                                                                         \
  Field {                                                                                            \
    name, [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.member = to_integer<int>(k, v); }, \
        [](const ExperimentConfig& c) { return std::to_string(c.member); }                          \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"layout.type",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.layout.type = trim(v);
         if (c.layout.type != "grid" && c.layout.type != "circular")
           throw std::invalid_argument(k + ": expected 'grid' or 'circular', got '" + c.layout.type + "'");
       },
       [](const ExperimentConfig& c) { return c.layout.type; }},
      DS_SIZE("layout.N", layout.cells),
      DS_DOUBLE("layout.side", layout.side),
      DS_SIZE("layout.N_p", layout.emitters),
      DS_SIZE("layout.N_s", layout.sensors),
      DS_SIZE("layout.n_c", layout.circles),
      DS_DOUBLE("layout.r_p", layout.emitter_radius),
      {"layout.radii",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.layout.radii = to_list<double>(k, v, to_double);
       },
       [](const ExperimentConfig& c) { return join(c.layout.radii, format_number); }},
      DS_DOUBLE("signal.eta0", signal.eta0),
      DS_DOUBLE("signal.eta1", signal.eta1),
      DS_DOUBLE("signal.P", signal.power),
      DS_SIZE("signal.max_changes", signal.max_changes),
      DS_DOUBLE("channel.K", channel.offset_k),
      {"channel.noise_var",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.channel.noise_var = to_double(k, v);
       },
       [](const ExperimentConfig& c) { return format_number(c.noise_var()); }},
      {"channel.fidelity",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         try {
           c.channel.fidelity = parse_fidelity(trim(v));
         } catch (const std::invalid_argument& e) {
           throw std::invalid_argument(k + ": " + e.what());
         }
       },
       [](const ExperimentConfig& c) { return std::string(to_string(c.channel.fidelity)); }},
      DS_INT("channel.W", channel.window),
      DS_DOUBLE("channel.calibration", channel.calibration),
      DS_SIZE("query.q", query.q),
      DS_SIZE("query.q_extra", query.q_extra),
      DS_DOUBLE("solver.xi", solver.xi),
      DS_DOUBLE("solver.tol", solver.tol),
      DS_INT("solver.max_iter", solver.max_iter),
      DS_DOUBLE("fusion.eps", fusion.eps),
      DS_INT("fusion.T_err", fusion.reset_period),
      DS_DOUBLE("fusion.nu", fusion.nu),
      DS_SIZE("sim.T", sim.windows),
      {"sim.seed",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.sim.seed = to_integer<std::uint64_t>(k, v);
       },
       [](const ExperimentConfig& c) { return c.sim.seed ? std::to_string(*c.sim.seed) : std::string("unset"); }},
      DS_SIZE("sim.trials", sim.trials),
      {"sweep.eps",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.sweep.eps = to_list<double>(k, v, to_double);
       },
       [](const ExperimentConfig& c) { return join(c.sweep.eps, format_number); }},
      {"sweep.T_err",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.sweep.reset_period = to_list<int>(k, v, to_integer<int>);
       },
       [](const ExperimentConfig& c) { return join(c.sweep.reset_period, fmt_int); }},
      {"sweep.nu",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.sweep.nu = to_list<double>(k, v, to_double);
       },
       [](const ExperimentConfig& c) { return join(c.sweep.nu, format_number); }},
      {"baseline.W",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.baseline.windows = to_list<int>(k, v, to_integer<int>);
       },
       [](const ExperimentConfig& c) { return join(c.baseline.windows, fmt_int); }},
      DS_SIZE("certify.q", certify.q),
      DS_SIZE("certify.order", certify.order),
      DS_SIZE("certify.S", certify.sparsity),
      DS_SIZE("certify.samples", certify.samples),
      DS_SIZE("certify.layouts", certify.layouts),
      {"certify.counts",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.certify.counts = to_list<std::size_t>(k, v, to_integer<std::size_t>);
       },
       [](const ExperimentConfig& c) { return join(c.certify.counts, fmt_size); }},
      DS_SIZE("certify.angles", certify.angles),
      DS_SIZE("certify.rip_draws", certify.rip_draws),
  };
  return table;
}

#undef DS_DOUBLE
#undef DS_SIZE
#undef DS_INT

const Field& find_field(const std::string& key) {
  for (const auto& f : fields())
    if (key == f.key) return f;
  throw std::invalid_argument("unknown configuration key '" + key + "'");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

std::size_t ExperimentConfig::num_sensors() const { return layout.circular() ? layout.sensors : layout.cells; }
std::size_t ExperimentConfig::num_emitters() const { return layout.circular() ? layout.emitters : layout.cells; }

double ExperimentConfig::noise_var() const {
  return channel.noise_var.value_or(0.1 * signal.power / channel.offset_k);
}

MarkovOnOff ExperimentConfig::chain() const { return {signal.eta0, signal.eta1, signal.power}; }

FusionConfig ExperimentConfig::fusion_config() const {
  FusionConfig f;
  f.error_threshold = fusion.eps;
  f.reset_period = fusion.reset_period;
  f.support_threshold = fusion.nu;
  f.xi = solver.xi;
  f.power = signal.power;
  f.solver.tol = solver.tol;
  f.solver.max_iter = solver.max_iter;
  return f;
}

namespace {
void validate_circular(const LayoutSection& layout) {
  require(layout.circles >= 1, "layout.n_c must be >= 1");
  require(layout.emitters >= 1, "layout.N_p must be >= 1");
  require(layout.sensors >= layout.emitters, "layout.N_s (" + std::to_string(layout.sensors) +
                                                   ") must be >= layout.N_p (" + std::to_string(layout.emitters) +
                                                   ")");
  require(layout.sensors % layout.circles == 0, "layout.N_s must be divisible by layout.n_c");
  require((layout.sensors / layout.circles) % 2 == 0, "layout.N_s / layout.n_c must be even");
  require(layout.radii.size() == layout.circles, "layout.radii needs exactly layout.n_c = " +
                                                       std::to_string(layout.circles) + " values");
  require(layout.emitter_radius > 0.0, "layout.r_p must be positive");
  std::set<double> distinct(layout.radii.begin(), layout.radii.end());
  require(distinct.size() == layout.radii.size(), "layout.radii must be distinct");
  for (double r : layout.radii) {
    require(r > 0.0, "layout.radii must be positive");
    require(r != layout.emitter_radius, "layout.radii must differ from layout.r_p");
  }
}
}  // namespace

void ExperimentConfig::validate() const {
  if (layout.circular()) {
    validate_circular(layout);
  } else {
    const auto n = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(layout.cells))));
    require(layout.cells >= 1 && n * n == layout.cells,
            "layout.N = " + std::to_string(layout.cells) + " is not a perfect square");
    require(layout.side > 0.0, "layout.side must be positive");
  }
  require(signal.eta0 >= 0.0 && signal.eta0 <= 1.0, "signal.eta0 must lie in [0, 1]");
  require(signal.eta1 >= 0.0 && signal.eta1 <= 1.0, "signal.eta1 must lie in [0, 1]");
  require(signal.power > 0.0, "signal.P must be positive");
  require(channel.offset_k > 0.0, "channel.K must be positive");
  require(noise_var() >= 0.0, "channel.noise_var must be non-negative");
  require(channel.window >= 1, "channel.W must be >= 1");
  require(channel.calibration > 0.0, "channel.calibration must be positive");

  const std::size_t ns = num_sensors();
  require(query.q <= ns, "query.q = " + std::to_string(query.q) + " exceeds the number of sensors (" +
                             std::to_string(ns) + ")");
  require(query.q + query.q_extra <= ns, "query.q + query.q_extra = " + std::to_string(query.q + query.q_extra) +
                                             " exceeds the number of sensors (" + std::to_string(ns) + ")");
  if (layout.circular()) require(query.q % 2 == 0, "query.q must be even for a circular layout");

  require(solver.xi > 0.0, "solver.xi must be positive");
  require(solver.tol > 0.0, "solver.tol must be positive");
  require(solver.max_iter >= 1, "solver.max_iter must be >= 1");
  require(fusion.eps > 0.0, "fusion.eps must be positive");
  require(fusion.reset_period >= 1, "fusion.T_err must be >= 1");
  require(fusion.nu > 0.0, "fusion.nu must be positive");
  require(sim.windows >= 1, "sim.T must be >= 1");
  require(sim.trials >= 1, "sim.trials must be >= 1");

  for (double v : sweep.eps) require(v > 0.0, "sweep.eps values must be positive");
  for (int v : sweep.reset_period) require(v >= 1, "sweep.T_err values must be >= 1");
  for (double v : sweep.nu) require(v > 0.0, "sweep.nu values must be positive");
  for (int v : baseline.windows) require(v >= 1, "baseline.W values must be >= 1");
}

void ExperimentConfig::validate_certify() const {
  validate_circular(layout);
  require(channel.offset_k > 0.0, "channel.K must be positive");
  require(certify.q >= 2 && certify.q % 2 == 0, "certify.q must be even and >= 2");
  require(certify.q <= layout.sensors, "certify.q exceeds layout.N_s");
  require(certify.order >= 1 && certify.order <= layout.emitters, "certify.order must lie in [1, layout.N_p]");
  require(certify.sparsity >= 1 && certify.sparsity <= layout.emitters, "certify.S must lie in [1, layout.N_p]");
  require(certify.samples >= 10000, "certify.samples must be >= 10000");
  require(certify.layouts >= 1, "certify.layouts must be >= 1");
  require(certify.angles >= 1, "certify.angles must be >= 1");
  require(certify.rip_draws >= 1, "certify.rip_draws must be >= 1");
  for (std::size_t c : certify.counts)
    require(c >= 2 && c % 2 == 0, "certify.counts values must be even and >= 2");
}

std::uint64_t ExperimentConfig::require_seed() const {
  if (!sim.seed) throw std::invalid_argument("a seed is required: pass --seed or set sim.seed in the config");
  return *sim.seed;
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& f : fields()) out.emplace_back(f.key, f.get(*this));
  return out;
}

ExperimentConfig parse_config(const std::string& ini_text, const std::vector<std::string>& overrides) {
  boost::property_tree::ptree tree;
  std::istringstream in(ini_text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }

  ExperimentConfig config;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw std::invalid_argument("config: key '" + section + "' must sit inside a [section]");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      find_field(full).set(config, full, value.data());
    }
  }
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("override '" + item + "' must look like section.key=value");
    const std::string key = trim(item.substr(0, eq));
    find_field(key).set(config, key, item.substr(eq + 1));
  }
  return config;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), overrides);
}

std::string config_comment_block(const ExperimentConfig& config, const std::string& command) {
  std::string out = "# dynsense " + command + "\n";
  for (const auto& [key, value] : config.entries()) out += "# " + key + " = " + value + "\n";
  return out;
}

}  // namespace dynsense
