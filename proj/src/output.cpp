#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>

#include "bdlab/experiments.hpp"

namespace bdlab {

namespace {

std::string num17(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void dump_rec(const nlohmann::ordered_json& j, int indent, int depth, std::string& out) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += std::string(",") + nl;
        first = false;
        out += pad + nlohmann::json(it.key()).dump() + (indent > 0 ? ": " : ":");
        dump_rec(it.value(), indent, depth + 1, out);
      }
      out += nl + close + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[";
      out += nl;
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += std::string(",") + nl;
        first = false;
        out += pad;
        dump_rec(v, indent, depth + 1, out);
      }
      out += nl + close + "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      out += num17(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const nlohmann::ordered_json& j, int indent) {
  std::string out;
  dump_rec(j, indent, 0, out);
  out += "\n";
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 0xf];
  }
  return s;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  return sha256_hex(bytes);
}

void write_samples_csv(const std::filesystem::path& path, std::string_view experiment,
                       const std::vector<SampleRow>& rows) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "experiment,replica,t,k,raw_value,rescaled_value,series,stream\n";
  for (const auto& r : rows)
    os << experiment << ',' << r.replica << ',' << num17(r.t) << ',' << r.k << ',' << num17(r.raw) << ','
       << num17(r.rescaled) << ',' << r.series << ',' << r.stream << '\n';
}

void write_geodesics_csv(const std::filesystem::path& path, std::string_view experiment,
                         const std::vector<GeodesicRow>& rows) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "experiment,replica,t,k,policy,sup_deviation,dev_q25,dev_q50,dev_q75,stream\n";
  for (const auto& r : rows)
    os << experiment << ',' << r.replica << ',' << num17(r.t) << ',' << r.k << ',' << to_string(r.policy) << ','
       << num17(r.sup_deviation) << ',' << num17(r.dev_q25) << ',' << num17(r.dev_q50) << ','
       << num17(r.dev_q75) << ',' << r.stream << '\n';
}

bool RunManifest::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

const Check* RunManifest::find(std::string_view id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

nlohmann::ordered_json manifest_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["schema_version"] = m.schema_version;
  j["code_version"] = m.code_version;
  nlohmann::ordered_json cfg;
  cfg["experiment"] = m.config.experiment;
  cfg["preset"] = to_string(m.config.preset);
  cfg["master_seed"] = m.config.master_seed;
  cfg["threads"] = m.config.threads;
  cfg["out"] = m.config.out_dir.string();
  j["config"] = cfg;
  j["parameters"] = m.parameters;
  j["wall_seconds"] = m.wall_seconds;
  j["metrics"] = m.metrics;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& c : m.checks)
    checks.push_back({{"id", c.id}, {"description", c.description}, {"pass", c.pass}, {"detail", c.detail}});
  j["checks"] = checks;
  j["all_pass"] = m.all_pass();
  j["caveats"] = m.caveats;
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  for (const auto& f : m.files) files.push_back({{"name", f.name}, {"bytes", f.bytes}, {"sha256", f.sha256}});
  j["files"] = files;
  return j;
}

}  // namespace bdlab
