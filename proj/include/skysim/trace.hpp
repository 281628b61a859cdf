// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skysim/rrc.hpp"

namespace skysim {

// Malformed or non-monotone replay input.
class TraceError : public std::runtime_error {
  public:
    explicit TraceError(const std::string& what) : std::runtime_error(what) {}
};

struct HeightSample {
    double height_m = 0.0;
    Vec3 velocity_mps;
};

// All trace rows sharing one timestamp, fed to the engines as one step.
struct TraceTick {
    double t_ms = 0.0;
    std::map<int, double> rsrp_dbm;  // per cell
    std::optional<HeightSample> height;
};

// Replay input: 3-field rows (t_ms,cell_id,rsrp_dbm) mixed with 5-field
// rows (t_ms,height_m,vx,vy,vz); an optional header line is skipped. Rows
// must be non-decreasing in time; equal timestamps group into one tick.
std::vector<TraceTick> parse_trace(std::istream& in);
std::vector<TraceTick> load_trace(const std::string& path);

struct ReportRow {
    double t_ms = 0.0;
    std::string kind;  // multi_cell | height_up | height_down
    std::vector<TriggeredCell> cells;
    std::optional<UeMeasContext> ue;
};

// Runs the measurement-event engine (and the height reporter, when height
// rows are present and a config is given) over the trace.
std::vector<ReportRow> replay_trace(const std::vector<TraceTick>& trace,
                                    const MeasConfig& meas,
                                    const std::optional<HeightReportConfig>& height = {});

// Report log: t_ms,kind,cells,height_m,x_m,y_m,h_speed_mps,v_speed_mps
// with cells joined by ';'. LF line endings, header row included.
std::string report_log_csv(const std::vector<ReportRow>& rows);

// Serialises ticks back to the replay input format.
std::string trace_csv(const std::vector<TraceTick>& trace);

}  // namespace skysim
