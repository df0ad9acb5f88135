#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <algorithm>
#include <string>

#include <json.hpp>

#include "pacset/csv.hpp"
#include "pacset/iw.hpp"
#include "pacset/harness.hpp"
#include "pacset/report.hpp"

using namespace pacset;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name, const std::string& body) {
    path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << body;
  }
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("ingest_scores minimal file") {
  const TempFile f("pacset_cal_min.csv",
                   "example_id,true_score\n"
                   "a,0.25\n"
                   "b,0.75\n");
  const auto cal = ingest_scores(f.path);
  CHECK(cal.ids == std::vector<std::string>({"a", "b"}));
  CHECK(cal.true_scores == std::vector<double>({0.25, 0.75}));
  CHECK_FALSE(cal.domain_probs.has_value());
  CHECK_FALSE(cal.intervals.has_value());
}

TEST_CASE("ingest_scores with optional columns") {
  const TempFile f("pacset_cal_full.csv",
                   "example_id,true_score,domain_prob,true_iw,iw_lower,iw_upper\n"
                   "a,0.25,0.5,1.0,0.8,1.4\n"
                   "b,0.75,0.2,4.0,3.0,5.5\n");
  const auto cal = ingest_scores(f.path);
  REQUIRE(cal.domain_probs.has_value());
  REQUIRE(cal.true_iws.has_value());
  REQUIRE(cal.intervals.has_value());
  CHECK((*cal.domain_probs)[1] == 0.2);
  CHECK((*cal.true_iws)[1] == 4.0);
  CHECK((*cal.intervals)[0].upper == 1.4);
}

TEST_CASE("ingest_scores clamps domain probabilities") {
  const TempFile f("pacset_cal_clamp.csv",
                   "example_id,true_score,domain_prob\n"
                   "a,0.5,0.0\n"
                   "b,0.5,1.0\n");
  const auto cal = ingest_scores(f.path);
  CHECK((*cal.domain_probs)[0] == kProbClamp);
  CHECK((*cal.domain_probs)[1] == 1.0 - kProbClamp);
}

TEST_CASE("ingest_scores errors carry line numbers and missing columns") {
  const TempFile bad_row("pacset_cal_bad.csv",
                         "example_id,true_score\n"
                         "a,0.25\n"
                         "b,not-a-number\n");
  CHECK_THROWS_WITH_AS(ingest_scores(bad_row.path),
                       doctest::Contains(":3:"), CsvError);

  const TempFile bad_cols("pacset_cal_cols.csv", "example_id,score\nx,1\n");
  CHECK_THROWS_WITH_AS(ingest_scores(bad_cols.path),
                       doctest::Contains("true_score"), CsvError);

  const TempFile bad_width("pacset_cal_width.csv",
                           "example_id,true_score\n"
                           "a,0.25,extra\n");
  CHECK_THROWS_WITH_AS(ingest_scores(bad_width.path),
                       doctest::Contains(":2:"), CsvError);

  const TempFile nan_row("pacset_cal_nan.csv",
                         "example_id,true_score\n"
                         "a,nan\n");
  CHECK_THROWS_AS(ingest_scores(nan_row.path), CsvError);
}

TEST_CASE("ingest test files, long and compact") {
  const TempFile scores("pacset_test_long.csv",
                        "example_id,label_id,score\n"
                        "e1,cat,0.9\n"
                        "e1,dog,0.4\n"
                        "e2,cat,0.2\n"
                        "e2,dog,0.7\n");
  const TempFile truth("pacset_test_truth.csv",
                       "example_id,true_label_id\n"
                       "e1,cat\n"
                       "e2,cat\n");
  const auto test = ingest_test_long(scores.path, truth.path);
  REQUIRE(test.examples.size() == 2);
  CHECK(test.true_scores() == std::vector<double>({0.9, 0.2}));
  CHECK(test.sizes_at(0.5) == std::vector<double>({1.0, 1.0}));
  CHECK(test.sizes_at(0.0) == std::vector<double>({2.0, 2.0}));

  const TempFile compact("pacset_test_compact.csv",
                         "example_id,true_score,n_labels_ge_tau\n"
                         "e1,0.9,1\n"
                         "e2,0.2,1\n");
  const auto comp = ingest_test_compact(compact.path);
  CHECK(comp.true_scores == std::vector<double>({0.9, 0.2}));
  CHECK(comp.sizes == std::vector<double>({1.0, 1.0}));
}

TEST_CASE("ingest_test_long requires truth coverage") {
  const TempFile scores("pacset_test_long2.csv",
                        "example_id,label_id,score\n"
                        "e1,cat,0.9\n");
  const TempFile truth("pacset_test_truth2.csv",
                       "example_id,true_label_id\n"
                       "e9,cat\n");
  CHECK_THROWS_AS(ingest_test_long(scores.path, truth.path), CsvError);
}

TEST_CASE("report rendering schema and round trip") {
  RunConfig config;
  config.method = Method::ps_r;
  config.trials = 3;
  config.seed = 5;
  config.data.m = 120;
  config.data.n = 120;
  config.data.test_size = 400;
  const TrialReport report = mc_validate(config);

  const std::string json_text = render_report_json(report);
  const auto doc = nlohmann::json::parse(json_text);
  CHECK(doc.at("method") == "ps-r");
  CHECK(doc.at("trials").size() == 3);
  CHECK(doc.at("config").at("epsilon") == 0.1);
  CHECK(doc.at("aggregate").contains("violation_rate"));
  CHECK(doc.at("aggregate").at("size_quantiles").contains("p50"));
  CHECK(doc.at("tau_hat") == doc.at("trials")[0].at("tau_hat"));

  const std::string csv_text = render_report_csv(report);
  // Header + 3 trial rows + marker + aggregate header + aggregate row.
  CHECK(std::count(csv_text.begin(), csv_text.end(), '\n') == 7);
  CHECK(csv_text.starts_with(
      "trial,method,tau_hat,bound,n_accepted,feasible,error,mean_size\n"));
  CHECK(csv_text.find("# aggregate\n") != std::string::npos);
}

TEST_CASE("empty report is rejected") {
  TrialReport report;
  CHECK_THROWS_AS(render_report_json(report), std::invalid_argument);
  CHECK_THROWS_AS(render_report_csv(report), std::invalid_argument);
}

TEST_CASE("emit_report writes files byte-identically") {
  RunConfig config;
  config.method = Method::ps;
  config.trials = 2;
  config.data.m = 80;
  config.data.n = 80;
  config.data.test_size = 200;
  const TrialReport report = mc_validate(config);
  const auto dir = std::filesystem::temp_directory_path();
  const auto p1 = dir / "pacset_report_1.json";
  const auto p2 = dir / "pacset_report_2.json";
  emit_report(report, p1, ReportFormat::json);
  emit_report(report, p2, ReportFormat::json);
  std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
  const std::string s1((std::istreambuf_iterator<char>(f1)), {});
  const std::string s2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(s1 == s2);
  CHECK(!s1.empty());
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}
