#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "citescope/map_builder.hpp"
#include "citescope/pipeline.hpp"
#include "citescope/records_io.hpp"
#include "support.hpp"

using namespace citescope;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  PipelineReport report;
  std::vector<CallRecord> calls;
  std::vector<double> sleeps;
  std::string log;
};

RunResult run(const std::string& corpus, const fs::path& outdir, bool resume = false, int stop_after = 0,
              bool skip_hindex = false) {
  PipelineConfig cfg;
  cfg.user_id = testing::golden(corpus)["user_id"].get<std::string>();
  cfg.outdir = outdir;
  cfg.resume = resume;
  cfg.stop_after_stage = stop_after;
  cfg.skip_hindex = skip_hindex;
  FixtureBackend backend(testing::fixtures() / corpus);
  SimulatedClock clock;
  Transport transport(backend, clock);
  std::ostringstream log;
  RunResult r;
  r.report = run_pipeline(cfg, transport, log);
  r.calls = transport.call_log();
  r.sleeps = clock.sleeps();
  r.log = log.str();
  return r;
}

std::size_t count_host(const std::vector<CallRecord>& calls, const std::string& host) {
  return static_cast<std::size_t>(
      std::count_if(calls.begin(), calls.end(), [&](const CallRecord& c) { return c.host == host; }));
}

std::size_t count_prefix(const std::vector<CallRecord>& calls, const std::string& prefix) {
  return static_cast<std::size_t>(
      std::count_if(calls.begin(), calls.end(), [&](const CallRecord& c) { return c.url.rfind(prefix, 0) == 0; }));
}

std::vector<csv::Row> body_rows(const fs::path& file) {
  auto rows = csv::parse(testing::slurp(file));
  rows.erase(rows.begin());
  return rows;
}

const std::vector<std::string> kSixFiles{"summary.txt", "papers.csv", "citing_papers.csv",
                                         "ranked_by_citations.csv", "ranked_by_hindex.csv", "citation_map.html"};

std::set<std::string> visible_files(const fs::path& dir) {
  std::set<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto n = e.path().filename().string();
    if (n.front() != '.') out.insert(n);
  }
  return out;
}

}  // namespace

TEST_CASE("folder names") {
  CHECK(researcher_folder_name("Avery Quinlan", "x") == "Avery_Quinlan");
  CHECK(researcher_folder_name("  Jo   O'Neil-Smith ", "x") == "Jo_ONeil-Smith");
  CHECK(researcher_folder_name("Zo\xC3\xAB M\xC3\xBCller", "x") == "Zo\xC3\xAB_M\xC3\xBCller");
  CHECK(researcher_folder_name("../..", "fallbackID12") == "fallbackID12");
  CHECK(researcher_folder_name("", "fallbackID12") == "fallbackID12");
}

TEST_CASE("atomic writes leave no temp files") {
  testing::TempDir dir("atomic");
  write_file_atomic(dir.path() / "a.txt", "one");
  write_file_atomic(dir.path() / "a.txt", "two");
  CHECK(testing::slurp(dir.path() / "a.txt") == "two");
  CHECK(testing::snapshot(dir.path()).size() == 1);
}

TEST_CASE("argument parsing") {
  std::ostringstream out, err;
  auto p = parse_args({"citescope", "ABC123def456", "--outdir", "/tmp/x"}, out, err);
  REQUIRE(p.config);
  CHECK(p.config->user_id == "ABC123def456");
  CHECK(p.config->outdir == fs::path("/tmp/x"));
  CHECK_FALSE(p.config->resume);
  CHECK_FALSE(p.config->fixture_dir);

  p = parse_args({"citescope"}, out, err);
  CHECK_FALSE(p.config);
  CHECK(p.exit_code == kExitUsage);

  const auto corpus = (testing::fixtures() / "case1").string();
  p = parse_args({"citescope", "ABC123def456", "--fixtures", corpus, "--resume", "--skip-hindex", "--mailto", "a@b.c"},
                 out, err);
  REQUIRE(p.config);
  CHECK(p.config->fixture_dir == fs::path(corpus));
  CHECK(p.config->resume);
  CHECK(p.config->skip_hindex);
  CHECK(p.config->mailto == "a@b.c");
  CHECK(p.config->outdir == fs::path("."));

  CHECK(parse_args({"citescope", "ABC123def456", "--bogus"}, out, err).exit_code == kExitUsage);
  CHECK(parse_args({"citescope", "short"}, out, err).exit_code == kExitUsage);
  CHECK(parse_args({"citescope", "ABC123def456", "--fixtures", "/does/not/exist"}, out, err).exit_code == kExitUsage);
  std::ostringstream help;
  p = parse_args({"citescope", "--help"}, help, err);
  CHECK_FALSE(p.config);
  CHECK(p.exit_code == kExitOk);
  CHECK(help.str().find("--skip-hindex") != std::string::npos);
}

TEST_CASE("full offline run produces the six files and the expected tables") {
  testing::TempDir out("full");
  const auto r = run("case1", out.path());
  const auto g = testing::golden("case1");
  CHECK(r.report.exit_code == kExitOk);
  CHECK(r.report.stages_run == std::vector<int>{1, 2, 3, 4, 5});
  const auto folder = out.path() / g["folder"].get<std::string>();
  CHECK(r.report.folder == folder);
  CHECK(visible_files(folder) == std::set<std::string>(kSixFiles.begin(), kSixFiles.end()));

  const std::vector<std::pair<std::string, std::string>> tables{{"papers.csv", "papers_csv"},
                                                                {"citing_papers.csv", "citing_papers_csv"},
                                                                {"ranked_by_citations.csv", "ranked_by_citations"},
                                                                {"ranked_by_hindex.csv", "ranked_by_hindex"}};
  for (const auto& [file, key] : tables) {
    INFO(file);
    const auto rows = body_rows(folder / file);
    REQUIRE(rows.size() == g[key].size());
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i] == g[key][i].get<std::vector<std::string>>());
  }

  const auto summary = testing::slurp(folder / "summary.txt");
  CHECK(summary.find("Unique researchers:   134") != std::string::npos);
  CHECK(summary.find("Unique countries:     11") != std::string::npos);
  CHECK(summary.find("Unique institutions:  31") != std::string::npos);
  CHECK(summary.find("Unique cities:        28") != std::string::npos);
  CHECK(summary.find("United States (US)") != std::string::npos);

  CHECK(count_host(r.calls, "scholar.google.com") == g["scholar_requests_physical"].get<std::size_t>());
  CHECK(count_prefix(r.calls, "https://api.openalex.org/institutions/") == g["institution_fetches"].get<std::size_t>());
  CHECK(count_host(r.calls, "nominatim.openstreetmap.org") == g["geocoder_requests"].get<std::size_t>());
  CHECK(std::count(r.sleeps.begin(), r.sleeps.end(), 30.0) == g["backoff_waits"].get<int>());

  const auto island = parse_data_island(testing::slurp(folder / "citation_map.html"));
  CHECK(island.clusters.size() == g["clusters"].size());
  CHECK(island.heat.size() == g["heat_points"].get<std::size_t>());
  for (std::size_t i = 0; i < island.clusters.size(); ++i) {
    const auto& want = g["clusters"][i];
    CHECK(island.clusters[i].city == want["city"].get<std::string>());
    CHECK(island.clusters[i].n == want["n"].get<int>());
    CHECK(island.clusters[i].radius_px == doctest::Approx(want["radius_px"].get<double>()).epsilon(1e-12));
    CHECK(to_string(island.clusters[i].color_bucket) == want["color_bucket"].get<std::string>());
  }
}

TEST_CASE("two runs are byte-identical") {
  testing::TempDir a("det_a"), b("det_b");
  run("case1", a.path());
  run("case1", b.path());
  const auto sa = testing::snapshot(a.path());
  CHECK(sa.size() == 7);
  CHECK(sa == testing::snapshot(b.path()));
}

TEST_CASE("resume after every stage boundary reproduces the full run") {
  testing::TempDir ref("ref");
  const auto full = run("case1", ref.path());
  const auto expected = testing::snapshot(ref.path());
  const auto scholar_total = count_host(full.calls, "scholar.google.com");

  for (int stop = 1; stop <= 4; ++stop) {
    CAPTURE(stop);
    testing::TempDir out("resume");
    const auto first = run("case1", out.path(), false, stop);
    CHECK(first.report.last_completed_stage == stop);
    const auto second = run("case1", out.path(), true);
    CHECK(second.report.exit_code == kExitOk);
    std::vector<int> rest;
    for (int s = stop + 1; s <= 5; ++s) rest.push_back(s);
    CHECK(second.report.stages_run == rest);
    if (stop >= 2) CHECK(count_host(second.calls, "scholar.google.com") == 0);
    if (stop == 1) CHECK(count_host(second.calls, "scholar.google.com") == scholar_total - 1);
    CHECK(first.calls.size() + second.calls.size() == full.calls.size());
    CHECK(testing::snapshot(out.path()) == expected);
  }
}

TEST_CASE("resume with everything done does no work") {
  testing::TempDir out("done");
  run("case1", out.path());
  const auto before = testing::snapshot(out.path());
  const auto again = run("case1", out.path(), true);
  CHECK(again.calls.empty());
  CHECK(again.report.stages_run.empty());
  CHECK(again.report.last_completed_stage == 5);
  CHECK(testing::snapshot(out.path()) == before);
}

TEST_CASE("resume rebuilds a stage whose file went missing and sweeps temp files") {
  testing::TempDir ref("ref2");
  run("case1", ref.path());
  const auto expected = testing::snapshot(ref.path());

  testing::TempDir out("partial");
  const auto first = run("case1", out.path(), false, 4);
  const auto folder = first.report.folder;
  std::ofstream(folder / ".summary.txt.tmp") << "half written";
  fs::remove(folder / "ranked_by_hindex.csv");
  const auto second = run("case1", out.path(), true);
  CHECK(second.report.stages_run == std::vector<int>{4, 5});
  CHECK(count_host(second.calls, "scholar.google.com") == 0);
  CHECK(testing::snapshot(out.path()) == expected);
}

TEST_CASE("resume without a checkpoint runs from the start") {
  testing::TempDir out("nocp");
  const auto r = run("mini", out.path(), true);
  CHECK(r.report.stages_run == std::vector<int>{1, 2, 3, 4, 5});
  CHECK(r.report.exit_code == kExitOk);
}

TEST_CASE("skip-hindex writes five files and never searches authors") {
  testing::TempDir out("skiph");
  const auto r = run("case1", out.path(), false, 0, true);
  CHECK(r.report.exit_code == kExitOk);
  auto five = std::set<std::string>(kSixFiles.begin(), kSixFiles.end());
  five.erase("ranked_by_hindex.csv");
  CHECK(visible_files(r.report.folder) == five);
  CHECK(count_prefix(r.calls, "https://api.openalex.org/authors") == 0);
}

TEST_CASE("rate-limited citing page: partial exit, every file, skipped flag") {
  testing::TempDir out("rl");
  const auto r = run("ratelimit", out.path());
  CHECK(r.report.exit_code == kExitPartial);
  CHECK(r.report.skipped_pages == 1);
  CHECK(visible_files(r.report.folder) == std::set<std::string>(kSixFiles.begin(), kSixFiles.end()));
  const auto rows = body_rows(r.report.folder / "citing_papers.csv");
  CHECK(std::count_if(rows.begin(), rows.end(), [](const csv::Row& row) { return row[6] == "true"; }) == 1);
  CHECK(rows.size() == testing::golden("ratelimit")["citing_papers_csv"].size());

  // a resume keeps the partial status from the checkpoint
  const auto again = run("ratelimit", out.path(), true);
  CHECK(again.report.exit_code == kExitPartial);
  CHECK(again.calls.empty());
}

TEST_CASE("incomplete publication list is a partial run") {
  testing::TempDir out("pl");
  const auto r = run("profile_ratelimit", out.path());
  CHECK(r.report.exit_code == kExitPartial);
  CHECK(r.report.publications_incomplete);
  CHECK(body_rows(r.report.folder / "papers.csv").size() == 100);
}

TEST_CASE("empty profile: header-only tables") {
  testing::TempDir out("empty");
  const auto r = run("empty_profile", out.path());
  CHECK(r.report.exit_code == kExitOk);
  CHECK(testing::slurp(r.report.folder / "papers.csv") == "title,authors,venue,year,citation_count,detail_url\r\n");
  CHECK(parse_data_island(testing::slurp(r.report.folder / "citation_map.html")).clusters.empty());
}

TEST_CASE("unparseable profile fails stage one") {
  testing::TempDir out("broken");
  const auto r = run("broken_profile", out.path());
  CHECK(r.report.exit_code == kExitStage1);
  CHECK(r.log.find("stage 1") != std::string::npos);
  CHECK(fs::is_empty(out.path()));
}

TEST_CASE("command-line smoke test") {
  testing::TempDir out("cli");
  const auto fixtures = (testing::fixtures() / "mini").string();
  const std::string base = std::string("\"") + CITESCOPE_CLI + "\"";
  const auto cmd = base + " miniPROFILE1 --fixtures \"" + fixtures + "\" --outdir \"" + out.path().string() +
                   "\" 2>\"" + (out.path() / "log.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(fs::exists(out.path() / "Rowan_Test-Author" / "citation_map.html"));
  CHECK(testing::slurp(out.path() / "log.txt").find("[5/5]") != std::string::npos);

  const int usage = std::system((base + " >/dev/null 2>&1").c_str());
  CHECK(WEXITSTATUS(usage) == 1);
  const int broken = std::system((base + " brokenPROFIL --fixtures \"" + (testing::fixtures() / "broken_profile").string() +
                                  "\" --outdir \"" + out.path().string() + "\" >/dev/null 2>&1")
                                     .c_str());
  CHECK(WEXITSTATUS(broken) == 2);
}
