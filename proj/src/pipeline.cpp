#include "citescope/pipeline.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "citescope/citation_collector.hpp"
#include "citescope/disambiguator.hpp"
#include "citescope/geocoder.hpp"
#include "citescope/map_builder.hpp"
#include "citescope/records_io.hpp"
#include "citescope/reporting.hpp"
#include "citescope/scholar_parser.hpp"
#include "citescope/text.hpp"

namespace citescope {

namespace fs = std::filesystem;
using nlohmann::json;

ParsedArgs parse_args(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg;
  std::string outdir = ".";
  std::string fixtures;
  std::string blocklist;

  CLI::App app{"Map who cites a scholar profile: publications, citing papers, ranked citing\n"
               "researchers, a text summary and an interactive world map."};
  app.name(argv.empty() ? "citescope" : fs::path(argv[0]).filename().string());
  app.add_option("user_id", cfg.user_id, "12-character scholar profile id")->required();
  app.add_option("--outdir", outdir, "Parent directory for the researcher folder")->capture_default_str();
  app.add_flag("--resume", cfg.resume, "Continue from the last completed stage");
  app.add_flag("--skip-hindex", cfg.skip_hindex, "Skip the h-index lookup and its ranked table");
  app.add_option("--fixtures", fixtures, "Replay a recorded corpus instead of the network")
      ->check(CLI::ExistingDirectory);
  app.add_option("--mailto", cfg.mailto, "Contact address for the metadata API polite pool");
  app.add_option("--blocklist", blocklist, "Organisation keyword list (one term per line)")
      ->check(CLI::ExistingFile);

  std::vector<std::string> rest(argv.size() > 1 ? argv.begin() + 1 : argv.end(), argv.end());
  std::reverse(rest.begin(), rest.end());  // CLI11 consumes a reversed vector
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return {std::nullopt, code == 0 ? kExitOk : kExitUsage};
  }
  if (!is_valid_scholar_id(cfg.user_id)) {
    err << "error: user_id must be 12 characters of letters, digits, '_' or '-'\n\n" << app.help();
    return {std::nullopt, kExitUsage};
  }
  cfg.outdir = outdir;
  if (!fixtures.empty()) cfg.fixture_dir = fixtures;
  if (!blocklist.empty()) cfg.blocklist_path = blocklist;
  return {cfg, kExitOk};
}

std::string researcher_folder_name(std::string_view display_name, std::string_view fallback) {
  std::string out;
  for (const char ch : text::collapse_whitespace(display_name)) {
    const auto c = static_cast<unsigned char>(ch);
    if (c == ' ') {
      out.push_back('_');
    } else if (std::isalnum(c) || c == '_' || c == '-' || c >= 0x80) {
      out.push_back(ch);
    }
  }
  if (out.empty() || out.find_first_not_of('_') == std::string::npos) return std::string(fallback);
  return out;
}

namespace {

[[noreturn]] void fail_errno(const std::string& what, const fs::path& p) {
  throw std::runtime_error(what + " " + p.string() + ": " + std::strerror(errno));
}

void fsync_dir(const fs::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

}  // namespace

void write_file_atomic(const fs::path& path, std::string_view contents) {
  const auto tmp = path.parent_path() / ("." + path.filename().string() + ".tmp");
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) fail_errno("cannot create", tmp);
  std::size_t done = 0;
  while (done < contents.size()) {
    const auto n = ::write(fd, contents.data() + done, contents.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      fail_errno("cannot write", tmp);
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0) {
    ::close(fd);
    fail_errno("cannot fsync", tmp);
  }
  ::close(fd);
  if (std::rename(tmp.c_str(), path.c_str()) != 0) fail_errno("cannot rename onto", path);
  fsync_dir(path.parent_path());
}

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Checkpoint {
  std::string user_id;
  std::string researcher_name;
  std::map<int, std::vector<std::string>> completed;  // stage -> output files
  bool publications_incomplete = false;
  int stage1_skips = 0;
  int stage2_skips = 0;
  std::vector<AuthorRecord> author_records;

  json to_json() const {
    json stages = json::array();
    for (const auto& [stage, files] : completed)
      stages.push_back({{"stage", stage}, {"completed", true}, {"output_files", files}});
    return {{"user_id", user_id},
            {"researcher_name", researcher_name},
            {"stages", stages},
            {"publications_incomplete", publications_incomplete},
            {"stage1_skipped_pages", stage1_skips},
            {"stage2_skipped_pages", stage2_skips},
            {"author_records", json::parse(records_io::author_records_json(author_records))}};
  }

  static Checkpoint from_json(const json& j) {
    Checkpoint c;
    c.user_id = j.at("user_id").get<std::string>();
    c.researcher_name = j.at("researcher_name").get<std::string>();
    for (const auto& s : j.at("stages")) {
      if (s.at("completed").get<bool>())
        c.completed[s.at("stage").get<int>()] = s.at("output_files").get<std::vector<std::string>>();
    }
    c.publications_incomplete = j.at("publications_incomplete").get<bool>();
    c.stage1_skips = j.at("stage1_skipped_pages").get<int>();
    c.stage2_skips = j.at("stage2_skipped_pages").get<int>();
    c.author_records = records_io::read_author_records_json(j.at("author_records").dump());
    return c;
  }
};

std::optional<Checkpoint> load_checkpoint(const fs::path& folder) {
  const auto p = folder / kCheckpointFile;
  if (!fs::exists(p)) return std::nullopt;
  try {
    return Checkpoint::from_json(json::parse(read_file(p)));
  } catch (const std::exception&) {
    return std::nullopt;  // unreadable checkpoint: start over
  }
}

/// A previous run's folder for this user id, if any.
std::optional<fs::path> find_resumable_folder(const fs::path& outdir, const std::string& user_id) {
  if (!fs::is_directory(outdir)) return std::nullopt;
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(outdir)) {
    if (e.is_directory()) dirs.push_back(e.path());
  }
  std::sort(dirs.begin(), dirs.end());
  for (const auto& d : dirs) {
    if (auto cp = load_checkpoint(d); cp && cp->user_id == user_id) return d;
  }
  return std::nullopt;
}

const std::vector<std::string>& declared_files() {
  static const std::vector<std::string> files{
      std::string(kSummaryFile),        std::string(kPapersFile),         std::string(kCitingPapersFile),
      std::string(kRankedByCitationsFile), std::string(kRankedByHindexFile), std::string(kMapFile)};
  return files;
}

/// Removes leftovers that are not part of the folder contract.
void sweep_temp_files(const fs::path& folder) {
  for (const auto& e : fs::directory_iterator(folder)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.size() > 5 && name.front() == '.' && text::ends_with(name, ".tmp"))
      fs::remove(e.path());
  }
}

class Run {
 public:
  Run(const PipelineConfig& cfg, Transport& transport, std::ostream& log)
      : cfg_(cfg), transport_(transport), log_(log), collector_(transport) {}

  PipelineReport execute();

 private:
  bool stage_done(int stage, const std::vector<std::string>& files) const {
    if (!cfg_.resume) return false;
    const auto it = cp_.completed.find(stage);
    if (it == cp_.completed.end() || it->second != files) return false;
    return std::all_of(files.begin(), files.end(), [&](const std::string& f) { return fs::exists(folder_ / f); });
  }
  void complete(int stage, std::vector<std::string> files) {
    cp_.completed[stage] = std::move(files);
    for (auto it = cp_.completed.begin(); it != cp_.completed.end();) {
      it = it->first > stage ? cp_.completed.erase(it) : std::next(it);
    }
    write_file_atomic(folder_ / kCheckpointFile, cp_.to_json().dump(1));
    report_.last_completed_stage = stage;
  }
  void write(std::string_view name, std::string_view contents) { write_file_atomic(folder_ / name, contents); }
  bool stop_here(int stage) const { return cfg_.stop_after_stage == stage; }

  void steps();
  void stage1();
  void stage2();
  void stage3();
  void stage4();
  void stage5();

  const PipelineConfig& cfg_;
  Transport& transport_;
  std::ostream& log_;
  CitationCollector collector_;
  Checkpoint cp_;
  fs::path folder_;
  PipelineReport report_;

  std::vector<Publication> publications_;
  std::vector<CitingPaper> citing_;
};

void Run::stage1() {
  log_ << "[1/5] fetching publication list for " << cfg_.user_id << "\n";
  const auto list = collector_.fetch_publications(cfg_.user_id);
  publications_ = list.publications;
  const auto name = list.researcher_name.empty() ? cfg_.user_id : list.researcher_name;

  const auto folder = cfg_.outdir / researcher_folder_name(name, cfg_.user_id);
  folder_ = folder;
  fs::create_directories(folder_);
  sweep_temp_files(folder_);

  // Everything downstream is rebuilt, so drop what an earlier run produced.
  for (const auto& f : declared_files()) fs::remove(folder_ / f);
  fs::remove(folder_ / kCheckpointFile);
  cp_ = Checkpoint{};
  cp_.user_id = cfg_.user_id;
  cp_.researcher_name = name;
  cp_.publications_incomplete = list.incomplete;
  cp_.stage1_skips = collector_.skipped_pages();
  report_.researcher_name = name;

  write(kPapersFile, records_io::papers_csv(publications_));
  log_ << "      " << publications_.size() << " publications" << (list.incomplete ? " (incomplete)" : "")
       << "\n";
  complete(1, {std::string(kPapersFile)});
}

void Run::stage2() {
  const int before = collector_.skipped_pages();
  citing_.clear();
  const auto cited = std::count_if(publications_.begin(), publications_.end(),
                                   [](const Publication& p) { return p.citation_count > 0; });
  log_ << "[2/5] collecting citing papers for " << cited << " cited publications\n";
  for (const auto& pub : publications_) {
    if (pub.citation_count <= 0) continue;
    auto rows = collector_.collect_citing_papers(pub);
    for (auto& r : rows) citing_.push_back(std::move(r));
  }
  cp_.stage2_skips = collector_.skipped_pages() - before;
  write(kCitingPapersFile, records_io::citing_papers_csv(citing_));
  log_ << "      " << std::count_if(citing_.begin(), citing_.end(), [](const CitingPaper& c) { return !c.skipped; })
       << " citing papers, " << cp_.stage2_skips << " skipped pages\n";
  complete(2, {std::string(kCitingPapersFile)});
}

void Run::stage3() {
  ProfilerOptions opts;
  opts.mailto = cfg_.mailto;
  if (cfg_.blocklist_path) opts.blocklist = parse_blocklist(read_file(*cfg_.blocklist_path));
  AuthorProfiler profiler(transport_, opts);

  std::vector<std::string> titles;
  std::set<std::string, std::less<>> seen;
  for (const auto& c : citing_) {
    if (c.skipped || c.title.empty()) continue;
    if (seen.insert(c.title).second) titles.push_back(c.title);
  }
  log_ << "[3/5] profiling authors of " << titles.size() << " unique citing papers\n";

  std::vector<AuthorRecord> records;
  int unresolved = 0, rejected = 0;
  for (const auto& t : titles) {
    auto res = profiler.resolve_paper_authors(t);
    if (!res.source) ++unresolved;
    rejected += res.rejected_names;
    for (auto& r : res.records) records.push_back(std::move(r));
  }
  log_ << "      " << records.size() << " author records, " << unresolved << " unresolved papers, " << rejected
       << " non-person names dropped\n";
  cp_.author_records = std::move(records);
  complete(3, {});
}

void Run::stage4() {
  const auto& records = cp_.author_records;
  log_ << "[4/5] ranking citing researchers\n";
  write(kRankedByCitationsFile, records_io::ranked_by_citations_csv(rank_by_citations(records)));

  if (cfg_.skip_hindex) {
    fs::remove(folder_ / kRankedByHindexFile);
    complete(4, {std::string(kRankedByCitationsFile)});
    return;
  }
  OpenAlexCandidateSource source(transport_, cfg_.mailto);
  std::vector<ResolvedAuthor> resolved;
  const auto people = representative_records(records);
  log_ << "      resolving h-index for " << people.size() << " researchers\n";
  for (const auto& rec : people) {
    resolved.push_back({rec, resolve_h_index(rec.full_name, rec.institution, rec.author_entity_id, source)});
  }
  write(kRankedByHindexFile, records_io::ranked_by_hindex_csv(rank_by_hindex(resolved)));
  complete(4, {std::string(kRankedByCitationsFile), std::string(kRankedByHindexFile)});
}

void Run::stage5() {
  const auto& records = cp_.author_records;
  log_ << "[5/5] summary and map\n";
  const auto stats = compute_summary(records, publications_, citing_);
  write(kSummaryFile, render_summary_text(stats, country_counts(records), cp_.researcher_name));

  Geocoder geocoder(transport_);
  const auto people = representative_records(records);
  const auto geocodes = geocode_records(people, geocoder);
  const auto clusters = build_city_clusters(people, geocodes);
  const auto heat = heat_points(clusters);
  log_ << "      " << clusters.size() << " cities, " << heat.size() << " researchers on the map\n";
  write(kMapFile, render_map_html(clusters, heat, "Researchers citing " + cp_.researcher_name));
  complete(5, {std::string(kSummaryFile), std::string(kMapFile)});
}

void Run::steps() {
  if (cfg_.resume) {
    if (auto dir = find_resumable_folder(cfg_.outdir, cfg_.user_id)) {
      if (auto cp = load_checkpoint(*dir)) {
        folder_ = *dir;
        cp_ = std::move(*cp);
        sweep_temp_files(folder_);
        log_ << "resuming in " << folder_.string() << "\n";
      }
    }
  }
  report_.researcher_name = cp_.researcher_name;

  // Each stage either reloads its products from disk or runs.
  if (stage_done(1, {std::string(kPapersFile)})) {
    publications_ = records_io::read_papers_csv(read_file(folder_ / kPapersFile));
    log_ << "[1/5] done earlier (" << publications_.size() << " publications)\n";
    report_.last_completed_stage = 1;
  } else {
    cp_.completed.clear();
    report_.stages_run.push_back(1);
    stage1();
  }
  if (stop_here(1)) return;

  if (stage_done(2, {std::string(kCitingPapersFile)})) {
    citing_ = records_io::read_citing_papers_csv(read_file(folder_ / kCitingPapersFile));
    log_ << "[2/5] done earlier (" << citing_.size() << " rows)\n";
    report_.last_completed_stage = 2;
  } else {
    report_.stages_run.push_back(2);
    stage2();
  }
  if (stop_here(2)) return;

  if (stage_done(3, {})) {
    log_ << "[3/5] done earlier (" << cp_.author_records.size() << " author records)\n";
    report_.last_completed_stage = 3;
  } else {
    report_.stages_run.push_back(3);
    stage3();
  }
  if (stop_here(3)) return;

  std::vector<std::string> stage4_files{std::string(kRankedByCitationsFile)};
  if (!cfg_.skip_hindex) stage4_files.emplace_back(kRankedByHindexFile);
  if (stage_done(4, stage4_files)) {
    log_ << "[4/5] done earlier\n";
    report_.last_completed_stage = 4;
  } else {
    report_.stages_run.push_back(4);
    stage4();
  }
  if (stop_here(4)) return;

  if (stage_done(5, {std::string(kSummaryFile), std::string(kMapFile)})) {
    log_ << "[5/5] done earlier\n";
    report_.last_completed_stage = 5;
  } else {
    report_.stages_run.push_back(5);
    stage5();
  }
}

PipelineReport Run::execute() {
  steps();
  report_.folder = folder_;
  report_.researcher_name = cp_.researcher_name;
  report_.skipped_pages = cp_.stage1_skips + cp_.stage2_skips;
  report_.publications_incomplete = cp_.publications_incomplete;
  report_.warnings = collector_.warnings();
  if (report_.skipped_pages > 0 || report_.publications_incomplete) report_.exit_code = kExitPartial;
  return report_;
}

}  // namespace

PipelineReport run_pipeline(const PipelineConfig& config, Transport& transport, std::ostream& log) {
  PipelineReport report;
  Run run(config, transport, log);
  try {
    report = run.execute();
  } catch (const StageFailure& e) {
    log << "error: stage 1 failed: " << e.what() << "\n";
    report.exit_code = kExitStage1;
    return report;
  } catch (const ParseFailure& e) {
    log << "error: stage 1 failed: profile page did not parse (" << e.what()
        << "); the page layout may have changed\n";
    report.exit_code = kExitStage1;
    return report;
  }
  return report;
}

PipelineReport run_pipeline(const PipelineConfig& config, std::ostream& log) {
  std::unique_ptr<Backend> backend;
  std::unique_ptr<Clock> clock;
  if (config.fixture_dir) {
    backend = std::make_unique<FixtureBackend>(*config.fixture_dir);
    clock = std::make_unique<SimulatedClock>();
  } else {
    backend = make_live_backend();
    if (!backend) {
      log << "error: this build has no network support; use --fixtures\n";
      PipelineReport r;
      r.exit_code = kExitUsage;
      return r;
    }
    clock = std::make_unique<SystemClock>();
  }
  Transport transport(*backend, *clock);
  return run_pipeline(config, transport, log);
}

}  // namespace citescope
