#pragma once
// Library-level command implementations; the binary in tools/ is a thin
// argument parser over these. Exit codes: 0 ok, 1 usage/parse, 2 validation,
// 3 unresolved conflict, 4 divergence.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "gridsim/grid.hpp"

namespace gridsim::cli {

inline constexpr const char* kToolVersion = "gridsim 0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitConflict = 3;
inline constexpr int kExitDivergence = 4;

// The replayability contract: manifest + config fully determine every
// artifact byte.
struct RunManifest {
  std::string config_path;
  std::map<std::string, Word> inputs;  // per-machine overrides
  std::optional<uint64_t> horizon;     // falls back to the config's horizon
  std::optional<uint64_t> seed;        // overrides a seeded schedule's seed
  std::string out_dir = ".";
};

// Writes manifest.txt, trace.txt, writelog.txt, space.txt and outputs.txt
// into out_dir; prints the regime, the flatten verdict and the run status.
int cmd_run(const RunManifest& manifest, std::ostream& out, std::ostream& err);

int cmd_classify(const std::string& config_path, std::ostream& out, std::ostream& err);
int cmd_flatten(const std::string& config_path, std::ostream& out, std::ostream& err);
int cmd_check_eq(const std::string& config_path, std::optional<uint64_t> horizon,
                 std::ostream& out, std::ostream& err);
int cmd_enumerate(const std::string& machine_path, uint64_t diagonal_budget,
                  const std::string& out_file, std::ostream& out, std::ostream& err);
int cmd_construct(const std::string& name, const Word& oracle, std::optional<uint64_t> horizon,
                  const std::string& out_dir, bool run_after, std::ostream& out,
                  std::ostream& err);
int cmd_diff_traces(const std::string& path_a, const std::string& path_b, std::ostream& out,
                    std::ostream& err);

}  // namespace gridsim::cli
