#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bdlab/lpp.hpp"
#include "json.hpp"

namespace bdlab {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kCodeVersion = "bdlab 1.0.0";
inline constexpr std::uint64_t kDefaultSeed = 271828;

enum class Preset { Desk, Full };
const char* to_string(Preset p);
Preset parse_preset(std::string_view s);

/// Overrides of the preset values. Which ones an experiment reads is listed
/// in the registry.
struct ExperimentParams {
  std::optional<double> t;
  std::optional<int> k;
  std::optional<double> alpha_exponent;  // alpha(t) = floor(t^a), a in {0.20, 0.25, 0.33}
  std::optional<std::size_t> replicas;
  std::optional<std::string> initial;    // flat | seed
  std::optional<int> grid_m;
  std::optional<double> significance;
  std::optional<std::vector<double>> gammas;
  std::optional<std::vector<double>> fractions;
  std::optional<std::vector<int>> k_list;
  std::optional<double> t_factor;        // E6: t = t_factor * k^3
};

struct ExperimentConfig {
  std::string experiment;  // E1..E8
  Preset preset = Preset::Desk;
  std::uint64_t master_seed = kDefaultSeed;
  int threads = 1;
  std::filesystem::path out_dir;  // empty: no files written
  ExperimentParams params;
};

struct ExperimentInfo {
  std::string id;
  std::string title;
  std::string criteria;  // acceptance criteria evaluated by the desk preset
  std::string params;    // override keys read
  std::string desk_budget;
};

const std::vector<ExperimentInfo>& experiment_registry();

/// INI text with sections [run] (experiment, preset, seed, threads, out) and
/// [params] (the ExperimentParams keys; lists are comma separated). Unknown
/// sections or keys are UsageErrors.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Range checks; throws UsageError.
void validate_config(const ExperimentConfig& config);

struct Check {
  std::string id;
  std::string description;
  bool pass = false;
  std::string detail;
};

struct OutputFile {
  std::string name;
  std::uintmax_t bytes = 0;
  std::string sha256;
};

/// One row of samples.csv. `series` and `stream` (the StreamKey
/// experiment_id) locate the row's randomness together with the master seed.
struct SampleRow {
  std::string series;
  std::uint32_t stream = 0;
  std::uint64_t replica = 0;
  double t = 0.0;
  int k = 0;
  double raw = 0.0;
  double rescaled = 0.0;
};

struct GeodesicRow {
  std::uint32_t stream = 0;
  std::uint64_t replica = 0;
  double t = 0.0;
  int k = 0;
  TiePolicy policy = TiePolicy::PreferJump;
  double sup_deviation = 0.0;
  double dev_q25 = 0.0;
  double dev_q50 = 0.0;
  double dev_q75 = 0.0;
};

struct ExperimentData {
  std::vector<SampleRow> samples;
  std::vector<GeodesicRow> geodesics;
};

struct RunManifest {
  ExperimentConfig config;
  int schema_version = kSchemaVersion;
  std::string code_version = kCodeVersion;
  double wall_seconds = 0.0;
  nlohmann::ordered_json parameters;  // resolved values actually used
  nlohmann::ordered_json metrics;
  std::vector<Check> checks;
  std::vector<std::string> caveats;
  std::vector<OutputFile> files;

  [[nodiscard]] bool all_pass() const;
  [[nodiscard]] const Check* find(std::string_view id) const;
};

/// Runs one experiment. When config.out_dir is set, writes samples.csv,
/// geodesics.csv (E6) and summary.json there. `data`, when given, receives
/// the rows in replica order.
RunManifest run_experiment(const ExperimentConfig& config, ExperimentData* data = nullptr);

nlohmann::ordered_json manifest_json(const RunManifest& m);

/// JSON text with every floating-point number printed with 17 significant
/// digits.
std::string dump_json(const nlohmann::ordered_json& j, int indent = 2);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

void write_samples_csv(const std::filesystem::path& path, std::string_view experiment,
                       const std::vector<SampleRow>& rows);
void write_geodesics_csv(const std::filesystem::path& path, std::string_view experiment,
                         const std::vector<GeodesicRow>& rows);

}  // namespace bdlab
