#include "pacset/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include "pacset/iw.hpp"

namespace pacset {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t begin = 0;
  while (true) {
    const std::size_t comma = line.find(',', begin);
    std::string field = line.substr(
        begin, comma == std::string::npos ? std::string::npos : comma - begin);
    // Tolerate surrounding spaces and trailing CR from CRLF files.
    while (!field.empty() && (field.back() == '\r' || field.back() == ' '))
      field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    fields.push_back(std::move(field));
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return fields;
}

double parse_double(const std::string& field, const std::filesystem::path& path,
                    std::size_t line_no, const char* column) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw CsvError(path.string() + ":" + std::to_string(line_no) +
                   ": cannot parse '" + field + "' as a number (column " +
                   column + ")");
  if (!std::isfinite(value))
    throw CsvError(path.string() + ":" + std::to_string(line_no) +
                   ": non-finite value in column " + column);
  return value;
}

struct Header {
  std::unordered_map<std::string, std::size_t> columns;

  std::optional<std::size_t> find(const std::string& name) const {
    const auto it = columns.find(name);
    if (it == columns.end()) return std::nullopt;
    return it->second;
  }
};

struct CsvReader {
  std::filesystem::path path;
  std::ifstream file;
  Header header;
  std::size_t field_count = 0;
  std::size_t line_no = 1;  // header consumed in open()

  explicit CsvReader(const std::filesystem::path& p) : path(p), file(p) {
    if (!file) throw CsvError("cannot open " + path.string());
    std::string line;
    if (!std::getline(file, line))
      throw CsvError(path.string() + ": empty file");
    const auto names = split_fields(line);
    field_count = names.size();
    for (std::size_t i = 0; i < names.size(); ++i) header.columns[names[i]] = i;
  }

  void require(std::initializer_list<const char*> names) const {
    std::string missing;
    for (const char* name : names) {
      if (!header.find(name)) {
        if (!missing.empty()) missing += ", ";
        missing += name;
      }
    }
    if (!missing.empty())
      throw CsvError(path.string() + ": missing required columns: " + missing);
  }

  // Returns false at end of input; skips blank lines.
  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(file, line)) {
      ++line_no;
      if (line.empty() || line == "\r") continue;
      fields = split_fields(line);
      if (fields.size() != field_count)
        throw CsvError(path.string() + ":" + std::to_string(line_no) + ": has " +
                       std::to_string(fields.size()) + " fields, expected " +
                       std::to_string(field_count));
      return true;
    }
    return false;
  }
};

}  // namespace

CalibrationFile ingest_scores(const std::filesystem::path& path) {
  CsvReader reader(path);
  reader.require({"example_id", "true_score"});
  const std::size_t id_col = *reader.header.find("example_id");
  const std::size_t score_col = *reader.header.find("true_score");
  const auto prob_col = reader.header.find("domain_prob");
  const auto iw_col = reader.header.find("true_iw");
  const auto lower_col = reader.header.find("iw_lower");
  const auto upper_col = reader.header.find("iw_upper");
  if (lower_col.has_value() != upper_col.has_value())
    throw CsvError(path.string() +
                   ": iw_lower and iw_upper must appear together");

  CalibrationFile out;
  if (prob_col) out.domain_probs.emplace();
  if (iw_col) out.true_iws.emplace();
  if (lower_col) out.intervals.emplace();

  std::vector<std::string> fields;
  while (reader.next(fields)) {
    out.ids.push_back(fields[id_col]);
    out.true_scores.push_back(
        parse_double(fields[score_col], path, reader.line_no, "true_score"));
    if (prob_col) {
      out.domain_probs->push_back(clamp_domain_prob(
          parse_double(fields[*prob_col], path, reader.line_no, "domain_prob")));
    }
    if (iw_col) {
      const double w =
          parse_double(fields[*iw_col], path, reader.line_no, "true_iw");
      if (w < 0.0)
        throw CsvError(path.string() + ":" + std::to_string(reader.line_no) +
                       ": true_iw must be >= 0");
      out.true_iws->push_back(w);
    }
    if (lower_col) {
      IwInterval iv;
      iv.lower =
          parse_double(fields[*lower_col], path, reader.line_no, "iw_lower");
      iv.upper =
          parse_double(fields[*upper_col], path, reader.line_no, "iw_upper");
      if (!(iv.lower >= 0.0 && iv.lower <= iv.upper))
        throw CsvError(path.string() + ":" + std::to_string(reader.line_no) +
                       ": need 0 <= iw_lower <= iw_upper");
      out.intervals->push_back(iv);
    }
  }
  if (out.ids.empty()) throw CsvError(path.string() + ": no data rows");
  return out;
}

TargetFile ingest_target(const std::filesystem::path& path) {
  CsvReader reader(path);
  reader.require({"example_id", "domain_prob"});
  const std::size_t id_col = *reader.header.find("example_id");
  const std::size_t prob_col = *reader.header.find("domain_prob");

  TargetFile out;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    out.ids.push_back(fields[id_col]);
    out.domain_probs.push_back(clamp_domain_prob(
        parse_double(fields[prob_col], path, reader.line_no, "domain_prob")));
  }
  if (out.ids.empty()) throw CsvError(path.string() + ": no data rows");
  return out;
}

std::vector<double> TestSetLong::sizes_at(double tau) const {
  std::vector<double> sizes;
  sizes.reserve(examples.size());
  for (const auto& ex : examples) {
    sizes.push_back(static_cast<double>(
        std::count_if(ex.label_scores.begin(), ex.label_scores.end(),
                      [&](double s) { return s >= tau; })));
  }
  return sizes;
}

std::vector<double> TestSetLong::true_scores() const {
  std::vector<double> scores;
  scores.reserve(examples.size());
  for (const auto& ex : examples) scores.push_back(ex.true_score);
  return scores;
}

TestSetLong ingest_test_long(const std::filesystem::path& scores_path,
                             const std::filesystem::path& truth_path) {
  std::unordered_map<std::string, std::string> truth;
  {
    CsvReader reader(truth_path);
    reader.require({"example_id", "true_label_id"});
    const std::size_t id_col = *reader.header.find("example_id");
    const std::size_t label_col = *reader.header.find("true_label_id");
    std::vector<std::string> fields;
    while (reader.next(fields)) truth[fields[id_col]] = fields[label_col];
  }

  CsvReader reader(scores_path);
  reader.require({"example_id", "label_id", "score"});
  const std::size_t id_col = *reader.header.find("example_id");
  const std::size_t label_col = *reader.header.find("label_id");
  const std::size_t score_col = *reader.header.find("score");

  TestSetLong out;
  std::unordered_map<std::string, std::size_t> index;  // id -> position
  std::vector<bool> truth_seen;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    const std::string& id = fields[id_col];
    auto [it, inserted] = index.try_emplace(id, out.examples.size());
    if (inserted) {
      if (!truth.contains(id))
        throw CsvError(scores_path.string() + ":" +
                       std::to_string(reader.line_no) + ": example '" + id +
                       "' missing from the truth file");
      out.examples.push_back({id, 0.0, {}});
      truth_seen.push_back(false);
    }
    auto& ex = out.examples[it->second];
    const double score =
        parse_double(fields[score_col], scores_path, reader.line_no, "score");
    ex.label_scores.push_back(score);
    if (fields[label_col] == truth.at(id)) {
      ex.true_score = score;
      truth_seen[it->second] = true;
    }
  }
  if (out.examples.empty())
    throw CsvError(scores_path.string() + ": no data rows");
  for (std::size_t i = 0; i < out.examples.size(); ++i) {
    if (!truth_seen[i])
      throw CsvError(scores_path.string() + ": example '" +
                     out.examples[i].id + "' has no row for its true label");
  }
  return out;
}

TestSetCompact ingest_test_compact(const std::filesystem::path& path) {
  CsvReader reader(path);
  reader.require({"example_id", "true_score", "n_labels_ge_tau"});
  const std::size_t id_col = *reader.header.find("example_id");
  const std::size_t score_col = *reader.header.find("true_score");
  const std::size_t size_col = *reader.header.find("n_labels_ge_tau");

  TestSetCompact out;
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    out.ids.push_back(fields[id_col]);
    out.true_scores.push_back(
        parse_double(fields[score_col], path, reader.line_no, "true_score"));
    out.sizes.push_back(parse_double(fields[size_col], path, reader.line_no,
                                     "n_labels_ge_tau"));
  }
  if (out.ids.empty()) throw CsvError(path.string() + ": no data rows");
  return out;
}

}  // namespace pacset
