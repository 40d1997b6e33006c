#include "salgraph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace salgraph {

EpisodeRecord episode_from_trace(const NavigationTrace& trace) {
  EpisodeRecord record;
  record.success = trace.status == NavStatus::kSuccess;
  record.oracle_success = trace.oracle_reached || record.success;
  record.shortest_length = trace.shortest_length;
  record.actual_length = trace.actual_length;
  record.localization_correct_per_hop = trace.localization_correct;
  return record;
}

MetricsReport compute_metrics(const std::vector<EpisodeRecord>& episodes,
                              const std::vector<LocalizationTrial>& localizations,
                              const std::vector<PositioningTrial>& positionings) {
  MetricsReport report;
  report.episodes = episodes.size();
  report.localizations = localizations.size();
  report.positionings = positionings.size();

  if (!episodes.empty()) {
    double sr = 0.0, osr = 0.0, spl = 0.0;
    for (const auto& ep : episodes) {
      if (ep.shortest_length <= 0.0) {
        throw std::invalid_argument("episode shortest length must be positive");
      }
      sr += ep.success ? 1.0 : 0.0;
      osr += ep.oracle_success ? 1.0 : 0.0;
      if (ep.success) {
        spl += ep.shortest_length / std::max(ep.shortest_length, ep.actual_length);
      }
    }
    report.sr = sr / episodes.size();
    report.osr = osr / episodes.size();
    report.spl = spl / episodes.size();
  }
  if (!localizations.empty()) {
    double correct = 0.0;
    for (const auto& trial : localizations) correct += trial.correct ? 1.0 : 0.0;
    report.acc = correct / localizations.size();
  }
  if (!positionings.empty()) {
    double ep_sum = 0.0, et_sum = 0.0;
    for (const auto& trial : positionings) {
      ep_sum += trial.position_error;
      et_sum += trial.orientation_error;
    }
    report.e_p = ep_sum / positionings.size();
    report.e_theta = et_sum / positionings.size();
  }
  return report;
}

namespace {

double metric_value(const MetricsReport& report, const std::string& column) {
  if (column == "acc") return report.acc;
  if (column == "sr") return report.sr;
  if (column == "osr") return report.osr;
  if (column == "spl") return report.spl;
  if (column == "e_p") return report.e_p;
  if (column == "e_theta") return report.e_theta;
  throw std::invalid_argument("unknown metrics column: " + column);
}

std::string format_value(double v) {
  char buf[32];
  if (v != 0.0 && std::fabs(v) < 1e-3) {
    std::snprintf(buf, sizeof(buf), "%.3e", v);
  } else {
    std::snprintf(buf, sizeof(buf), "%.4f", v);
  }
  return buf;
}

}  // namespace

std::string format_metrics_table(const std::string& title,
                                 const std::vector<std::string>& columns,
                                 const std::vector<std::pair<std::string, MetricsReport>>& rows) {
  std::size_t label_width = std::string("condition").size();
  for (const auto& [name, _] : rows) label_width = std::max(label_width, name.size());

  std::ostringstream out;
  out << title << "\n";
  out << std::string(title.size(), '-') << "\n";
  out << std::string(label_width, ' ') << "  ";
  for (const auto& column : columns) {
    out << ' ';
    out << std::string(column.size() < 10 ? 10 - column.size() : 0, ' ') << column;
  }
  out << "\n";
  for (const auto& [name, report] : rows) {
    out << name << std::string(label_width - name.size(), ' ') << "  ";
    for (const auto& column : columns) {
      const std::string value = format_value(metric_value(report, column));
      out << ' ' << std::string(value.size() < 10 ? 10 - value.size() : 0, ' ') << value;
    }
    out << "\n";
  }
  return out.str();
}

std::string metrics_table_tsv(const std::vector<std::string>& columns,
                              const std::vector<std::pair<std::string, MetricsReport>>& rows) {
  std::ostringstream out;
  out << "condition";
  for (const auto& column : columns) out << '\t' << column;
  out << "\n";
  for (const auto& [name, report] : rows) {
    out << name;
    for (const auto& column : columns) out << '\t' << metric_value(report, column);
    out << "\n";
  }
  return out.str();
}

}  // namespace salgraph
