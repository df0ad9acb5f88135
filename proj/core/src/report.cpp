#include "pacset/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace pacset {

namespace {

using Json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

Json config_json(const RunConfig& config) {
  Json c;
  c["method"] = std::string(method_name(config.method));
  c["epsilon"] = config.epsilon;
  c["delta"] = config.delta;
  c["delta_c"] = config.resolved_delta_c();
  c["delta_w"] = config.resolved_delta_w();
  c["bins"] = config.bins;
  c["smoothness_e"] = config.smoothness_e;
  c["grid"] = {{"step", config.grid.step},
               {"stop_factor", config.grid.stop_factor},
               {"start", config.grid.start}};
  c["seed"] = config.seed;
  c["trials"] = config.trials;
  c["data"] = {{"dim", config.data.dim},
               {"source_var1", config.data.source_var1},
               {"other_var", config.data.other_var},
               {"target_var1", config.data.target_var1},
               {"label_slope", config.data.label_slope},
               {"m", config.data.m},
               {"n", config.data.n},
               {"test_size", config.data.test_size},
               {"domain_temp", config.data.domain_temp}};
  c["use_true_iw"] = config.use_true_iw;
  c["scan"] = config.scan == ScanPolicy::break_on_violation ? "break"
                                                            : "scan-to-stop";
  c["threads"] = config.threads;
  return c;
}

void require_trials(const TrialReport& report) {
  if (report.trials.empty())
    throw std::invalid_argument("report: no trials to emit");
}

}  // namespace

ReportFormat report_format_from_name(std::string_view name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv") return ReportFormat::csv;
  throw std::invalid_argument("unknown report format: " + std::string(name));
}

std::string render_report_json(const TrialReport& report) {
  require_trials(report);
  Json doc;
  doc["config"] = config_json(report.config);
  doc["method"] = std::string(method_name(report.config.method));
  const TrialRow& first = report.trials.front();
  doc["tau_hat"] = first.tau_hat;
  doc["bound"] = first.bound;
  doc["n_accepted"] = first.n_accepted;
  doc["feasible"] = first.feasible;
  auto rows = Json::array();
  for (const auto& row : report.trials) {
    Json r;
    r["trial"] = row.trial;
    r["method"] = std::string(method_name(report.config.method));
    r["tau_hat"] = row.tau_hat;
    r["bound"] = row.bound;
    r["n_accepted"] = row.n_accepted;
    r["feasible"] = row.feasible;
    r["error"] = row.error;
    r["mean_size"] = row.mean_size;
    rows.push_back(std::move(r));
  }
  doc["trials"] = std::move(rows);
  doc["aggregate"] = {
      {"violation_rate", report.aggregate.violation_rate},
      {"mean_error", report.aggregate.mean_error},
      {"mean_size", report.aggregate.mean_size},
      {"size_quantiles",
       {{"p25", report.aggregate.size_p25},
        {"p50", report.aggregate.size_p50},
        {"p75", report.aggregate.size_p75}}}};
  return doc.dump(2) + "\n";
}

std::string render_report_csv(const TrialReport& report) {
  require_trials(report);
  std::string out;
  out += "trial,method,tau_hat,bound,n_accepted,feasible,error,mean_size\n";
  const std::string method(method_name(report.config.method));
  for (const auto& row : report.trials) {
    out += std::to_string(row.trial);
    out += ',';
    out += method;
    out += ',';
    out += format_double(row.tau_hat);
    out += ',';
    out += format_double(row.bound);
    out += ',';
    out += std::to_string(row.n_accepted);
    out += ',';
    out += row.feasible ? '1' : '0';
    out += ',';
    out += format_double(row.error);
    out += ',';
    out += format_double(row.mean_size);
    out += '\n';
  }
  out += "# aggregate\n";
  out +=
      "method,trials,violation_rate,mean_error,mean_size,size_p25,size_p50,"
      "size_p75\n";
  out += method;
  out += ',';
  out += std::to_string(report.trials.size());
  out += ',';
  out += format_double(report.aggregate.violation_rate);
  out += ',';
  out += format_double(report.aggregate.mean_error);
  out += ',';
  out += format_double(report.aggregate.mean_size);
  out += ',';
  out += format_double(report.aggregate.size_p25);
  out += ',';
  out += format_double(report.aggregate.size_p50);
  out += ',';
  out += format_double(report.aggregate.size_p75);
  out += '\n';
  return out;
}

void emit_report(const TrialReport& report, const std::filesystem::path& path,
                 ReportFormat format) {
  const std::string body = format == ReportFormat::json
                               ? render_report_json(report)
                               : render_report_csv(report);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path.string());
  file << body;
  if (!file) throw std::runtime_error("failed writing " + path.string());
}

std::string render_calibration_json(const CalibrationResult& result,
                                    const std::string& config_echo_json,
                                    bool include_trace) {
  Json doc;
  doc["config"] = nlohmann::json::parse(config_echo_json);
  doc["method"] = std::string(method_name(result.method));
  doc["tau_hat"] = result.tau_hat;
  doc["bound"] = result.bound_at_tau;
  doc["n_accepted"] = result.n_accepted;
  doc["feasible"] = result.feasible;
  doc["error_count"] = result.error_count;
  if (include_trace) {
    auto trace = Json::array();
    for (const auto& point : result.trace) {
      trace.push_back(Json::array({point.tau, point.bound}));
    }
    doc["trace"] = std::move(trace);
  }
  return doc.dump(2) + "\n";
}

}  // namespace pacset
