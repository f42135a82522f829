#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nsmlimit/errors.hpp"
#include "nsmlimit/harness.hpp"

namespace nsmlimit {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"grid", {"dims", "points", "period"}},
      {"params",
       {"kappa", "epsilon", "mu", "lambda", "tau", "eta", "kappa_ei", "K_rate", "pressure_amplitude", "gamma"}},
      {"step", {"dt", "cfl", "t_end", "mode", "stride"}},
      {"initial", {"seed", "amplitude", "velocity_scale", "C0", "perturb", "ill_prepared"}},
      {"sweep", {"kappa"}},
      {"diagnostics", {"l"}},
      {"output", {"dir"}},
      {"audit", {"t_center"}},
      {"moser", {"pairs", "s", "dims", "points", "decay"}},
      {"reform", {"samples", "dims", "points"}},
  };
  return keys;
}

template <class T>
void read(const pt::ptree& tree, const std::string& path, T& out) {
  const auto node = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'));
  if (!node) return;
  std::istringstream in(*node);
  T value{};
  in >> value;
  if (in.fail() || !(in >> std::ws).eof()) throw ConfigError("invalid value for " + path + ": '" + *node + "'");
  out = value;
}

void read_bool(const pt::ptree& tree, const std::string& path, bool& out) {
  const auto node = tree.get_optional<std::string>(path);
  if (!node) return;
  if (*node == "true" || *node == "1" || *node == "yes") out = true;
  else if (*node == "false" || *node == "0" || *node == "no") out = false;
  else throw ConfigError("invalid value for " + path + ": '" + *node + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ConfigError("empty list entry in '" + text + "'");
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  try {
    grid.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  params.validate();
  params.pressure.validate();
  step.validate();
  if (l < 0) throw ConfigError("diagnostics: l must be nonnegative");
  if (kappa_list.empty()) throw ConfigError("sweep: kappa list is empty");
  for (std::size_t i = 0; i < kappa_list.size(); ++i) {
    if (!(kappa_list[i] > 0.0 && kappa_list[i] <= 1.0)) throw ConfigError("sweep: kappa values must lie in (0, 1]");
    if (i > 0 && !(kappa_list[i] < kappa_list[i - 1])) throw ConfigError("sweep: kappa list must strictly decrease");
  }
  if (!(initial.amplitude >= 0.0 && initial.amplitude < 1.0)) throw ConfigError("initial: amplitude must lie in [0, 1)");
  if (!(initial.C0 >= 0.0)) throw ConfigError("initial: C0 must be nonnegative");
  if (!(audit.t_center > 0.0)) throw ConfigError("audit: t_center must be positive");
  if (moser.pairs < 1 || moser.s < 1 || moser.dims < 1 || moser.dims > 3 || !(moser.decay > 0.0))
    throw ConfigError("moser: invalid settings");
  if (reform.samples < 1 || reform.dims < 1 || reform.dims > 3) throw ConfigError("reform: invalid settings");
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end() || body.empty()) throw ConfigError("unknown section or top-level key '" + section + "'");
    for (const auto& [key, value] : body)
      if (!it->second.count(key)) throw ConfigError("unknown key '" + section + "." + key + "'");
  }

  RunConfig c;
  c.source = text;
  read(tree, "grid.dims", c.grid.dims);
  read(tree, "grid.points", c.grid.points);
  read(tree, "grid.period", c.grid.period);

  read(tree, "params.kappa", c.params.kappa);
  read(tree, "params.epsilon", c.params.epsilon);
  read(tree, "params.mu", c.params.mu);
  read(tree, "params.lambda", c.params.lambda);
  read(tree, "params.tau", c.params.tau);
  read(tree, "params.eta", c.params.eta);
  read(tree, "params.kappa_ei", c.params.kappa_ei);
  read(tree, "params.K_rate", c.params.K_rate);
  read(tree, "params.pressure_amplitude", c.params.pressure.amplitude);
  read(tree, "params.gamma", c.params.pressure.gamma);

  read(tree, "step.dt", c.step.dt);
  read(tree, "step.cfl", c.step.cfl);
  read(tree, "step.t_end", c.step.t_end);
  read(tree, "step.stride", c.step.stride);
  if (auto mode = tree.get_optional<std::string>("step.mode")) {
    if (*mode == "fixed_dt" || *mode == "fixed") c.step.mode = StepMode::fixed_dt;
    else if (*mode == "adaptive") c.step.mode = StepMode::adaptive;
    else throw ConfigError("invalid value for step.mode: '" + *mode + "'");
  }

  read(tree, "initial.seed", c.initial.seed);
  read(tree, "initial.amplitude", c.initial.amplitude);
  read(tree, "initial.velocity_scale", c.initial.velocity_scale);
  read(tree, "initial.C0", c.initial.C0);
  read_bool(tree, "initial.ill_prepared", c.initial.ill_prepared);
  if (auto list = tree.get_optional<std::string>("initial.perturb")) {
    InitialSpec& in = c.initial;
    in.perturb_n = in.perturb_u = in.perturb_j = in.perturb_E = in.perturb_B = false;
    if (*list != "none")
      for (const auto& f : split_list(*list)) {
        if (f == "n") in.perturb_n = true;
        else if (f == "u") in.perturb_u = true;
        else if (f == "j") in.perturb_j = true;
        else if (f == "E") in.perturb_E = true;
        else if (f == "B") in.perturb_B = true;
        else throw ConfigError("initial.perturb: unknown field '" + f + "'");
      }
  }

  if (auto list = tree.get_optional<std::string>("sweep.kappa")) {
    c.kappa_list.clear();
    for (const auto& item : split_list(*list)) {
      double v = 0.0;
      std::istringstream in(item);
      in >> v;
      if (in.fail() || !(in >> std::ws).eof()) throw ConfigError("invalid value in sweep.kappa: '" + item + "'");
      c.kappa_list.push_back(v);
    }
  }
  read(tree, "diagnostics.l", c.l);
  if (auto dir = tree.get_optional<std::string>("output.dir")) c.output_dir = *dir;
  read(tree, "audit.t_center", c.audit.t_center);
  read(tree, "moser.pairs", c.moser.pairs);
  read(tree, "moser.s", c.moser.s);
  read(tree, "moser.dims", c.moser.dims);
  read(tree, "moser.points", c.moser.points);
  read(tree, "moser.decay", c.moser.decay);
  read(tree, "reform.samples", c.reform.samples);
  read(tree, "reform.dims", c.reform.dims);
  read(tree, "reform.points", c.reform.points);

  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string config_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nsmlimit
