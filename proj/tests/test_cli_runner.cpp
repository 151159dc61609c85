#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "runner.hpp"

using namespace ergomean::cli;
namespace fs = std::filesystem;

namespace {
struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "ergomean_runner_test") {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_quiet(const ExperimentConfig& cfg, const std::string& out_dir) {
  std::ostringstream log, err;
  return run_experiment(cfg, out_dir, log, err);
}
}  // namespace

TEST_CASE("run_experiment: exit 2 on config errors, before any artifacts") {
  TempDir tmp;
  ExperimentConfig cfg;
  cfg.command = Command::Ergodic;
  cfg.space = *parse_space_spec("spd:3");
  // No system, no function: two diagnostics, exit 2.
  std::ostringstream log, err;
  CHECK(run_experiment(cfg, (tmp.path / "none").string(), log, err) == 2);
  CHECK(err.str().find("config error") != std::string::npos);
  CHECK_FALSE(fs::exists(tmp.path / "none" / "ergodic.csv"));
}

TEST_CASE("run_experiment: exit 1 when a configured assertion fails") {
  TempDir tmp;
  ExperimentConfig cfg;
  cfg.command = Command::Mean;
  cfg.space = *parse_space_spec("euclid:2");
  cfg.n_max = 50;
  cfg.seed = 9;
  cfg.asserts.final_delta_max = 1e-30;  // unreachable on purpose
  CHECK(run_quiet(cfg, tmp.path.string()) == 1);
  // Artifacts are still written for inspection.
  CHECK(fs::exists(tmp.path / "mean.csv"));
  CHECK(fs::exists(tmp.path / "mean.json"));
}

TEST_CASE("run_experiment: exit 0 and deterministic CSV bytes") {
  TempDir tmp;
  ExperimentConfig cfg;
  cfg.command = Command::SpaceCheck;
  cfg.space = *parse_space_spec("hyperboloid:2");
  cfg.samples = 100;
  cfg.seed = 99;

  const auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  CHECK(run_quiet(cfg, (tmp.path / "a").string()) == 0);
  CHECK(run_quiet(cfg, (tmp.path / "b").string()) == 0);
  CHECK(read(tmp.path / "a" / "space-check.csv") == read(tmp.path / "b" / "space-check.csv"));
}
