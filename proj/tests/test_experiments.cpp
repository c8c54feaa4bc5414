#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "bdlab/experiments.hpp"
#include "bdlab/parallel.hpp"
#include "doctest.h"

using namespace bdlab;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

}  // namespace

TEST_CASE("config: sections, lists and defaults") {
  const auto cfg = parse(
      "[run]\nexperiment = E6\npreset = full\nseed = 42\nthreads = 3\nout = /tmp/x\n"
      "[params]\nk_list = 8, 16,32\ngammas = 0.6,0.7\nt_factor = 2.5\nreplicas = 10\n");
  CHECK(cfg.experiment == "E6");
  CHECK(cfg.preset == Preset::Full);
  CHECK(cfg.master_seed == 42);
  CHECK(cfg.threads == 3);
  CHECK(cfg.out_dir == "/tmp/x");
  CHECK(*cfg.params.k_list == std::vector<int>{8, 16, 32});
  CHECK(*cfg.params.gammas == std::vector<double>{0.6, 0.7});
  CHECK(*cfg.params.t_factor == 2.5);
  CHECK(!cfg.params.t);
  CHECK_NOTHROW(validate_config(cfg));

  const auto d = parse("[run]\nexperiment = E1\n");
  CHECK(d.master_seed == kDefaultSeed);
  CHECK(d.preset == Preset::Desk);
  CHECK(d.threads == 1);
}

TEST_CASE("config: unknown keys and bad values are usage errors") {
  CHECK_THROWS_AS(parse("[run]\nexperiment = E1\ncolour = red\n"), UsageError);
  CHECK_THROWS_AS(parse("[extra]\nx = 1\n"), UsageError);
  CHECK_THROWS_AS(parse("[params]\nt = ten\n"), UsageError);
  CHECK_THROWS_AS(parse("[params]\nk = 3.5\n"), UsageError);
  CHECK_THROWS_AS(parse("[params]\ngammas = 0.5,,0.7\n"), UsageError);
  CHECK_THROWS_AS(parse("[run]\npreset = huge\n"), UsageError);
}

TEST_CASE("config: range validation") {
  auto bad = [](const std::string& text) { CHECK_THROWS_AS(validate_config(parse(text)), UsageError); };
  bad("[run]\nexperiment = E9\n");
  bad("[run]\nexperiment = E1\nthreads = 0\n");
  bad("[run]\nexperiment = E1\n[params]\nt = -1\n");
  bad("[run]\nexperiment = E1\n[params]\nk = 0\n");
  bad("[run]\nexperiment = E3\n[params]\nalpha_exponent = 0.3\n");  // not a preset curve
  bad("[run]\nexperiment = E2\n[params]\nalpha_exponent = 0.25\nk = 4\n");
  bad("[run]\nexperiment = E6\n[params]\nalpha_exponent = 0.33\n");  // above 9/31
  bad("[run]\nexperiment = E2\n[params]\ninitial = step\n");
  bad("[run]\nexperiment = E2\n[params]\nsignificance = 0.7\n");
  bad("[run]\nexperiment = E6\n[params]\ngammas = 0.5,1.2\n");
  bad("[run]\nexperiment = E6\n[params]\nk_list = 8,8,16\n");
  CHECK_NOTHROW(validate_config(parse("[run]\nexperiment = E6\n[params]\nalpha_exponent = 0.25\n")));
  CHECK_NOTHROW(validate_config(parse("[run]\nexperiment = E3\n[params]\nalpha_exponent = 0.33\n")));
}

TEST_CASE("registry lists E1..E8 in order") {
  const auto& reg = experiment_registry();
  REQUIRE(reg.size() == 8);
  for (std::size_t i = 0; i < reg.size(); ++i) CHECK(reg[i].id == "E" + std::to_string(i + 1));
}

TEST_CASE("dump_json prints 17 significant digits and null for non-finite") {
  nlohmann::ordered_json j = {{"a", 0.1}, {"b", 1}, {"c", std::nan("")}, {"d", {1.0 / 3.0, "x"}}};
  const auto s = dump_json(j, -1);
  CHECK(s == R"({"a":0.10000000000000001,"b":1,"c":null,"d":[0.33333333333333331,"x"]})" "\n");
  CHECK(nlohmann::json::parse(s)["a"].get<double>() == 0.1);
}

TEST_CASE("sha256 of known strings") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("aggregation: ordered output, missing replicas, merge") {
  SUBCASE("single replica is the identity") {
    ReplicaResults<int> r(1);
    r.insert(0, 7);
    CHECK(r.ordered() == std::vector<int>{7});
  }
  SUBCASE("permuted completion order gives identical results") {
    std::vector<std::size_t> order(100);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937 gen(5);
    std::shuffle(order.begin(), order.end(), gen);
    ReplicaResults<double> r(100);
    for (auto i : order) r.insert(i, 1.0 / double(i + 1));
    const auto v = r.ordered();
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == 1.0 / double(i + 1));
    // summed in replica order either way
    ReplicaResults<double> s(100);
    for (std::size_t i = 0; i < 100; ++i) s.insert(i, 1.0 / double(i + 1));
    const auto w = s.ordered();
    CHECK(std::accumulate(v.begin(), v.end(), 0.0) == std::accumulate(w.begin(), w.end(), 0.0));
  }
  SUBCASE("missing replicas are a hard error naming them") {
    ReplicaResults<int> r(5);
    r.insert(0, 1);
    r.insert(2, 1);
    r.insert(4, 1);
    CHECK(r.missing() == std::vector<std::size_t>{1, 3});
    CHECK_THROWS_WITH_AS((void)r.ordered(), "missing replicas: 1 3", std::runtime_error);
  }
  SUBCASE("disjoint halves merge to the full set") {
    ReplicaResults<int> a(6), b(6), full(6);
    for (std::size_t i = 0; i < 6; ++i) {
      (i % 2 ? a : b).insert(i, int(i * i));
      full.insert(i, int(i * i));
    }
    a.merge(std::move(b));
    CHECK(a.ordered() == full.ordered());
    ReplicaResults<int> c(6);
    c.insert(0, 0);
    CHECK_THROWS_AS(a.merge(std::move(c)), std::logic_error);
  }
  SUBCASE("parallel_replicas is order-stable and rethrows") {
    auto f = [](std::size_t i) { return i * 3 + 1; };
    CHECK(parallel_replicas(50, 4, f) == parallel_replicas(50, 1, f));
    CHECK_THROWS_AS(parallel_replicas(20, 3,
                                      [](std::size_t i) -> int {
                                        if (i == 11) throw std::runtime_error("boom");
                                        return 0;
                                      }),
                    std::runtime_error);
  }
}

TEST_CASE("E1 run: files are byte-identical across thread counts") {
  const auto base = std::filesystem::temp_directory_path() / "bdlab_test_e1";
  std::filesystem::remove_all(base);
  ExperimentConfig cfg;
  cfg.experiment = "E1";
  cfg.params.replicas = 300;
  cfg.params.t = 10.0;
  cfg.params.k = 5;
  cfg.out_dir = base / "a";
  const auto m1 = run_experiment(cfg);
  cfg.threads = 3;
  cfg.out_dir = base / "b";
  ExperimentData data;
  const auto m3 = run_experiment(cfg, &data);
  CHECK(m1.all_pass());
  REQUIRE(m1.files.size() == 1);
  CHECK(m1.files[0].sha256 == m3.files[0].sha256);
  CHECK(slurp(base / "a" / "samples.csv") == slurp(base / "b" / "samples.csv"));
  REQUIRE(data.samples.size() == 300);
  for (std::size_t i = 0; i < data.samples.size(); ++i) CHECK(data.samples[i].replica == i);

  const auto j = nlohmann::json::parse(slurp(base / "a" / "summary.json"));
  CHECK(j["schema_version"] == kSchemaVersion);
  CHECK(j["config"]["experiment"] == "E1");
  CHECK(j["checks"][0]["id"] == "A1");
  CHECK(j["files"][0]["sha256"] == m1.files[0].sha256);
  CHECK(sha256_file(base / "a" / "samples.csv") == m1.files[0].sha256);
  std::filesystem::remove_all(base);
}

TEST_CASE("E6 small run writes geodesics and keeps the gap invariants") {
  ExperimentConfig cfg;
  cfg.experiment = "E6";
  cfg.params.k_list = std::vector<int>{3, 4, 6};
  cfg.params.replicas = 20;
  ExperimentData data;
  const auto m = run_experiment(cfg, &data);
  CHECK(data.geodesics.size() == 2 * 3 * 20);
  REQUIRE(m.find("A8"));
  CHECK(m.find("A8")->pass);
  REQUIRE(m.find("A7"));
  CHECK(m.metrics.contains("fit_sup_upper"));
  for (const auto& g : data.geodesics) CHECK(g.sup_deviation >= g.dev_q50);
}

TEST_CASE("unknown experiment is a usage error") {
  ExperimentConfig cfg;
  cfg.experiment = "E0";
  CHECK_THROWS_AS(run_experiment(cfg), UsageError);
}
