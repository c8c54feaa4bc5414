#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bdlab/experiments.hpp"

namespace bdlab {

namespace pt = boost::property_tree;

const char* to_string(Preset p) { return p == Preset::Full ? "full" : "desk"; }

Preset parse_preset(std::string_view s) {
  if (s == "desk") return Preset::Desk;
  if (s == "full") return Preset::Full;
  throw UsageError("unknown preset '" + std::string(s) + "' (desk|full)");
}

namespace {

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  std::istringstream is(text);
  T v{};
  is >> v;
  std::string rest;
  if (is.fail() || (is >> rest)) throw UsageError("config: bad value '" + text + "' for " + key);
  return v;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw UsageError("config: empty list item in " + key);
    out.push_back(parse_number<T>(key, item.substr(b, e - b + 1)));
  }
  if (out.empty()) throw UsageError("config: empty list for " + key);
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::istream& is) {
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  ExperimentConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw UsageError("config: key '" + section + "' outside a section");
    if (section == "run") {
      for (const auto& [key, node] : body) {
        const std::string v = node.data();
        if (key == "experiment") cfg.experiment = v;
        else if (key == "preset") cfg.preset = parse_preset(v);
        else if (key == "seed") cfg.master_seed = parse_number<std::uint64_t>(key, v);
        else if (key == "threads") cfg.threads = parse_number<int>(key, v);
        else if (key == "out") cfg.out_dir = v;
        else throw UsageError("config: unknown key [run] " + key);
      }
    } else if (section == "params") {
      auto& p = cfg.params;
      for (const auto& [key, node] : body) {
        const std::string v = node.data();
        if (key == "t") p.t = parse_number<double>(key, v);
        else if (key == "k") p.k = parse_number<int>(key, v);
        else if (key == "alpha_exponent") p.alpha_exponent = parse_number<double>(key, v);
        else if (key == "replicas") p.replicas = parse_number<std::size_t>(key, v);
        else if (key == "initial") p.initial = v;
        else if (key == "grid_m") p.grid_m = parse_number<int>(key, v);
        else if (key == "significance") p.significance = parse_number<double>(key, v);
        else if (key == "gammas") p.gammas = parse_list<double>(key, v);
        else if (key == "fractions") p.fractions = parse_list<double>(key, v);
        else if (key == "k_list") p.k_list = parse_list<int>(key, v);
        else if (key == "t_factor") p.t_factor = parse_number<double>(key, v);
        else throw UsageError("config: unknown key [params] " + key);
      }
    } else {
      throw UsageError("config: unknown section [" + section + "]");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("config: cannot open " + path.string());
  return parse_config(is);
}

void validate_config(const ExperimentConfig& c) {
  bool known = false;
  for (const auto& e : experiment_registry()) known = known || e.id == c.experiment;
  if (!known) throw UsageError("unknown experiment '" + c.experiment + "' (E1..E8)");
  if (c.threads < 1 || c.threads > 1024) throw UsageError("threads must lie in [1, 1024]");
  const auto& p = c.params;
  if (p.t && !(*p.t > 0.0 && *p.t <= 1e9)) throw UsageError("t must lie in (0, 1e9]");
  if (p.k && (*p.k < 1 || *p.k > 100000)) throw UsageError("k must lie in [1, 100000]");
  if (p.alpha_exponent) {
    const double a = *p.alpha_exponent;
    bool ok = false;
    for (double allowed : {0.20, 0.25, 0.33}) ok = ok || std::fabs(a - allowed) < 1e-9;
    if (!ok) throw UsageError("alpha_exponent must be one of the presets 0.20, 0.25, 0.33");
    if (p.k) throw UsageError("give either k or alpha_exponent, not both");
    if (c.experiment == "E6" && a >= 9.0 / 31.0)
      throw UsageError("E6 needs alpha(t) = o(t^eta) with eta < 9/31; use alpha_exponent 0.20 or 0.25");
  }
  if (p.replicas && (*p.replicas < 1 || *p.replicas > 100000000)) throw UsageError("replicas must lie in [1, 1e8]");
  if (p.initial && *p.initial != "flat" && *p.initial != "seed") throw UsageError("initial must be flat or seed");
  if (p.grid_m && (*p.grid_m < 2 || *p.grid_m > 10000000)) throw UsageError("grid_m must lie in [2, 1e7]");
  if (p.significance && !(*p.significance > 0.0 && *p.significance < 0.5))
    throw UsageError("significance must lie in (0, 0.5)");
  if (p.gammas)
    for (double g : *p.gammas)
      if (!(g > 0.0 && g < 1.0)) throw UsageError("gammas must lie in (0, 1)");
  if (p.fractions)
    for (double s : *p.fractions)
      if (!(s > 0.0 && s < 1.0)) throw UsageError("fractions must lie in (0, 1)");
  if (p.k_list) {
    std::set<int> distinct(p.k_list->begin(), p.k_list->end());
    for (int k : *p.k_list)
      if (k < 2 || k > 4096) throw UsageError("k_list entries must lie in [2, 4096]");
    if (distinct.size() < 3) throw UsageError("k_list needs at least 3 distinct values");
  }
  if (p.t_factor && !(*p.t_factor > 0.0 && *p.t_factor <= 1000.0)) throw UsageError("t_factor must lie in (0, 1000]");
}

}  // namespace bdlab
