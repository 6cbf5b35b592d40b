#pragma once

#include <map>
#include <string>

#include "seeds3d/engine.hpp"
#include "seeds3d/metrics.hpp"

namespace seeds3d {

inline constexpr const char* kRunReportSchema = "seeds3d.run_report/1";
inline constexpr const char* kMetricsSchema = "seeds3d.metrics/1";

/// JSON documents described in docs/schemas.md.
std::string run_report_json(const RunReport& report, const SeedsParams& params, const Dims& dims);
std::string metrics_json(const MetricsReport& report, const std::map<int, std::string>& class_names = {});

/// CSV header and one row per foreground class: class,name,dice,present.
std::string metrics_csv(const MetricsReport& report, const std::map<int, std::string>& class_names = {});

}  // namespace seeds3d
