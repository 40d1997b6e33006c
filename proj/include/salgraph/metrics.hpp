#pragma once

#include <string>
#include <vector>

#include "salgraph/navigation.hpp"

namespace salgraph {

struct EpisodeRecord {
  bool success = false;
  bool oracle_success = false;
  double shortest_length = 0.0;  // metres, > 0
  double actual_length = 0.0;
  std::vector<std::uint8_t> localization_correct_per_hop;
};

EpisodeRecord episode_from_trace(const NavigationTrace& trace);

struct LocalizationTrial {
  bool correct = false;
};

struct PositioningTrial {
  double position_error = 0.0;     // metres
  double orientation_error = 0.0;  // radians, wrapped magnitude
};

struct MetricsReport {
  double acc = 0.0;      // localization accuracy
  double sr = 0.0;       // episode success rate
  double osr = 0.0;      // oracle success rate
  double spl = 0.0;      // success weighted by shortest/actual length
  double e_p = 0.0;      // mean position error
  double e_theta = 0.0;  // mean orientation error
  std::size_t episodes = 0;
  std::size_t localizations = 0;
  std::size_t positionings = 0;
};

// Aggregates whatever inputs are present; empty slices leave their metrics
// at zero. SPL <= SR <= OSR holds by construction.
MetricsReport compute_metrics(const std::vector<EpisodeRecord>& episodes,
                              const std::vector<LocalizationTrial>& localizations,
                              const std::vector<PositioningTrial>& positionings = {});

// Aligned-column rendering of per-condition metric rows; `columns` picks the
// MetricsReport fields to show.
std::string format_metrics_table(const std::string& title,
                                 const std::vector<std::string>& columns,
                                 const std::vector<std::pair<std::string, MetricsReport>>& rows);

// Tab-separated rows of the same content for downstream tooling.
std::string metrics_table_tsv(const std::vector<std::string>& columns,
                              const std::vector<std::pair<std::string, MetricsReport>>& rows);

}  // namespace salgraph
