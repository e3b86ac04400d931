// aud/eval-report.cc

// Copyright 2026  The audkit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "aud/eval-report.h"

#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "aud/aud-common.h"
#include "aud/feature-io.h"

namespace aud {

using Json = nlohmann::ordered_json;

namespace {

Json row_to_json(const MetricRow &r, bool integral_counts) {
  Json j;
  j["nmi_pct"] = r.nmi_pct;
  j["precision_pct"] = r.precision_pct;
  j["recall_pct"] = r.recall_pct;
  j["fscore_pct"] = r.fscore_pct;
  if (integral_counts) {
    j["n_hyp_boundaries"] = static_cast<std::int64_t>(std::llround(r.n_hyp_boundaries));
    j["n_ref_boundaries"] = static_cast<std::int64_t>(std::llround(r.n_ref_boundaries));
  } else {
    j["n_hyp_boundaries"] = r.n_hyp_boundaries;
    j["n_ref_boundaries"] = r.n_ref_boundaries;
  }
  j["inertia"] = r.inertia;
  return j;
}

MetricRow row_from_json(const Json &j) {
  MetricRow r;
  r.nmi_pct = j.at("nmi_pct").get<double>();
  r.precision_pct = j.at("precision_pct").get<double>();
  r.recall_pct = j.at("recall_pct").get<double>();
  r.fscore_pct = j.at("fscore_pct").get<double>();
  r.n_hyp_boundaries = j.at("n_hyp_boundaries").get<double>();
  r.n_ref_boundaries = j.at("n_ref_boundaries").get<double>();
  r.inertia = j.at("inertia").get<double>();
  return r;
}

Json report_to_json(const EvalReport &report) {
  const ReportConfig &c = report.config;
  Json config;
  config["mode"] = c.mode;
  config["k"] = c.k;
  config["method"] = c.method;
  config["s"] = c.s;
  config["reps"] = c.reps;
  config["tolerance_ms"] = c.tolerance_ms;
  config["frame_shift_ms"] = c.frame_shift_ms;
  config["tolerance_frames"] = c.tolerance_frames;
  config["nmi_norm"] = c.nmi_norm;
  config["nmi_log_base"] = 2;
  config["boundary_average"] = c.boundary_average;
  config["boundary_matching"] = c.boundary_matching;
  config["boundaries_scored"] = "internal";
  config["std"] = "sample";
  config["merge_adjacent"] = c.merge_adjacent;
  config["seeds"] = c.seeds;
  Json resolved = Json::object();
  for (const auto &[key, value] : c.resolved) resolved[key] = value;
  config["resolved"] = resolved;

  Json j;
  j["config"] = config;
  Json reps = Json::array();
  for (const MetricRow &r : report.per_rep) reps.push_back(row_to_json(r, true));
  j["per_rep"] = reps;
  j["mean"] = row_to_json(report.mean, false);
  j["std"] = row_to_json(report.std, false);
  return j;
}

// nlohmann's dump prints the shortest round-trip form of a double; reports
// need a fixed six-decimal rendering, so the tree is printed here.
void dump(const Json &j, int indent, std::string &out) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += ": ";
        dump(it.value(), indent + 2, out);
      }
      out += '\n';
      out.append(static_cast<std::size_t>(indent), ' ');
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Scalar arrays on one line.
      bool scalars = true;
      for (const auto &e : j) scalars = scalars && !e.is_structured();
      if (scalars) {
        out += '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump(j[i], indent, out);
        }
        out += ']';
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(j[i], indent + 2, out);
      }
      out += '\n';
      out.append(static_cast<std::size_t>(indent), ' ');
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? fmt::format("{:.6f}", v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

std::string render(const Json &j) {
  std::string out;
  dump(j, 0, out);
  out += '\n';
  return out;
}

}  // namespace

std::string eval_report_to_json(const EvalReport &report) {
  return render(report_to_json(report));
}

EvalReport eval_report_from_json(const std::string &text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception &e) {
    throw FormatError(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    EvalReport r;
    const Json &c = j.at("config");
    r.config.mode = c.at("mode").get<std::string>();
    r.config.k = c.at("k").get<int>();
    r.config.method = c.at("method").get<std::string>();
    r.config.s = c.at("s").get<int>();
    r.config.reps = c.at("reps").get<int>();
    r.config.tolerance_ms = c.at("tolerance_ms").get<double>();
    r.config.frame_shift_ms = c.at("frame_shift_ms").get<double>();
    r.config.tolerance_frames = c.at("tolerance_frames").get<std::int64_t>();
    r.config.nmi_norm = c.at("nmi_norm").get<std::string>();
    r.config.boundary_average = c.at("boundary_average").get<std::string>();
    r.config.boundary_matching = c.at("boundary_matching").get<std::string>();
    r.config.merge_adjacent = c.at("merge_adjacent").get<bool>();
    r.config.seeds = c.at("seeds").get<std::vector<std::uint64_t>>();
    for (auto it = c.at("resolved").begin(); it != c.at("resolved").end(); ++it)
      r.config.resolved.emplace_back(it.key(), it.value().get<std::string>());
    for (const auto &row : j.at("per_rep")) r.per_rep.push_back(row_from_json(row));
    r.mean = row_from_json(j.at("mean"));
    r.std = row_from_json(j.at("std"));
    return r;
  } catch (const Json::exception &e) {
    throw FormatError(std::string("malformed report: ") + e.what());
  }
}

void write_eval_report(const EvalReport &report, const std::filesystem::path &path) {
  internal::write_file_atomically(path, eval_report_to_json(report));
}

EvalReport read_eval_report(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string());
  return eval_report_from_json(
      std::string(std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()));
}

std::string format_report_row(const std::string &system, const EvalReport &report) {
  return fmt::format("{:<14} {:>6.2f}±{:<5.2f} {:>6.2f}±{:<5.2f} {:>7.2f} {:>7.2f}", system,
                     report.mean.nmi_pct, report.std.nmi_pct, report.mean.fscore_pct,
                     report.std.fscore_pct, report.mean.recall_pct, report.mean.precision_pct);
}

std::string sweep_table_to_json(const SweepTable &table) {
  Json j;
  Json ks = Json::array(), nmi = Json::array(), f = Json::array(), reports = Json::array();
  for (const auto &[k, report] : table) {
    ks.push_back(k);
    nmi.push_back(Json{{"mean", report.mean.nmi_pct}, {"std", report.std.nmi_pct}});
    f.push_back(Json{{"mean", report.mean.fscore_pct}, {"std", report.std.fscore_pct}});
    reports.push_back(report_to_json(report));
  }
  j["k"] = ks;
  j["nmi_pct"] = nmi;
  j["fscore_pct"] = f;
  j["reports"] = reports;
  return render(j);
}

std::string format_sweep_table(const SweepTable &table) {
  std::string k_row = fmt::format("{:<8}", "k");
  std::string nmi_row = fmt::format("{:<8}", "NMI");
  std::string f_row = fmt::format("{:<8}", "F-score");
  for (const auto &[k, report] : table) {
    k_row += fmt::format(" {:>13}", k);
    nmi_row += fmt::format(" {:>13}",
                           fmt::format("{:.2f}±{:.2f}", report.mean.nmi_pct, report.std.nmi_pct));
    f_row += fmt::format(
        " {:>13}", fmt::format("{:.2f}±{:.2f}", report.mean.fscore_pct, report.std.fscore_pct));
  }
  return k_row + '\n' + nmi_row + '\n' + f_row + '\n';
}

}  // namespace aud
