#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "citescope/author_profiler.hpp"
#include "citescope/transport.hpp"

namespace citescope {

struct PipelineConfig {
  std::string user_id;
  std::filesystem::path outdir = ".";
  bool resume = false;
  bool skip_hindex = false;
  std::optional<std::filesystem::path> fixture_dir;  // offline playback; implies the simulated clock
  std::string mailto;
  std::optional<std::filesystem::path> blocklist_path;
  int stop_after_stage = 0;  // 1..4 stops early after that stage's checkpoint; 0 runs everything
};

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitStage1 = 2, kExitPartial = 3 };

struct ParsedArgs {
  std::optional<PipelineConfig> config;  // empty when the process should exit
  int exit_code = kExitOk;
};

/// argv[0] is the program name. Help and usage text go to `out` / `err`.
ParsedArgs parse_args(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

inline constexpr std::string_view kCheckpointFile = ".checkpoint.json";
inline constexpr std::string_view kPapersFile = "papers.csv";
inline constexpr std::string_view kCitingPapersFile = "citing_papers.csv";
inline constexpr std::string_view kRankedByCitationsFile = "ranked_by_citations.csv";
inline constexpr std::string_view kRankedByHindexFile = "ranked_by_hindex.csv";
inline constexpr std::string_view kSummaryFile = "summary.txt";
inline constexpr std::string_view kMapFile = "citation_map.html";

/// Display name with spaces turned into underscores and everything except
/// letters, digits, '_', '-' and non-ASCII bytes dropped. Falls back to
/// `fallback` when nothing is left.
std::string researcher_folder_name(std::string_view display_name, std::string_view fallback);

/// Writes via a hidden temp file, fsync and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

struct PipelineReport {
  int exit_code = kExitOk;
  std::filesystem::path folder;
  std::string researcher_name;
  std::vector<int> stages_run;      // stages executed in this invocation
  int last_completed_stage = 0;
  int skipped_pages = 0;
  bool publications_incomplete = false;
  std::vector<std::string> warnings;
};

/// Runs stages 1-5 through the given transport.
PipelineReport run_pipeline(const PipelineConfig& config, Transport& transport, std::ostream& log);

/// Builds the backend and clock the config asks for, then runs.
PipelineReport run_pipeline(const PipelineConfig& config, std::ostream& log);

}  // namespace citescope
