#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pacset/robust.hpp"

namespace pacset {

// CSV ingestion for the calibrate/evaluate subcommands. All files are UTF-8
// with a header row; floats are plain decimals. NaN/inf scores are rejected.

class CsvError : public std::runtime_error {
 public:
  explicit CsvError(const std::string& what) : std::runtime_error(what) {}
};

// Header: example_id,true_score[,domain_prob][,true_iw][,iw_lower,iw_upper]
struct CalibrationFile {
  std::vector<std::string> ids;
  std::vector<double> true_scores;
  std::optional<std::vector<double>> domain_probs;  // clamped into (0, 1)
  std::optional<std::vector<double>> true_iws;
  std::optional<std::vector<IwInterval>> intervals;
};

CalibrationFile ingest_scores(const std::filesystem::path& path);

// Header: example_id,domain_prob — unlabeled target sample for IW estimation.
struct TargetFile {
  std::vector<std::string> ids;
  std::vector<double> domain_probs;  // clamped into (0, 1)
};

TargetFile ingest_target(const std::filesystem::path& path);

// Long form: example_id,label_id,score (several rows per example) plus a
// truth file example_id,true_label_id.
struct TestSetLong {
  struct Example {
    std::string id;
    double true_score = 0.0;
    std::vector<double> label_scores;  // all labels, truth included
  };
  std::vector<Example> examples;

  // Per-example counts of labels scoring >= tau.
  std::vector<double> sizes_at(double tau) const;
  std::vector<double> true_scores() const;
};

TestSetLong ingest_test_long(const std::filesystem::path& scores_path,
                             const std::filesystem::path& truth_path);

// Compact form: example_id,true_score,n_labels_ge_tau (sizes precomputed
// externally for the tau in use).
struct TestSetCompact {
  std::vector<std::string> ids;
  std::vector<double> true_scores;
  std::vector<double> sizes;
};

TestSetCompact ingest_test_compact(const std::filesystem::path& path);

}  // namespace pacset
