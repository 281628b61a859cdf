// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "skysim/common.hpp"

namespace skysim {

enum class MeasEvent { a3, a4, a5 };

const char* to_string(MeasEvent e);
MeasEvent meas_event_from_string(const std::string& s);

struct MeasConfig {
    MeasEvent event = MeasEvent::a4;
    double a3_offset_db = 0.0;
    double a4_threshold_dbm = -100.0;
    double a5_threshold1_dbm = -100.0;
    double a5_threshold2_dbm = -100.0;
    double hysteresis_db = 0.0;
    double ttt_ms = 0.0;
    int cell_count_x = 1;
    int l3_filter_k = 4;
    int serving_cell_id = -1;  // excluded from neighbour evaluation

    void validate() const;
};

// Layer-3 smoothing: F = (1-a)*prev + a*sample with a = 1/2^(k/4).
double l3_filter(double prev_dbm, double sample_dbm, int k);

// Entry condition for one neighbour measurement mn against serving mp
// (mp is ignored for A4). The leave condition flips the hysteresis sign,
// so entry and leave are mutually exclusive for any hysteresis >= 0.
bool evaluate_entry(MeasEvent event, double mn_dbm, double mp_dbm, const MeasConfig& cfg);
bool evaluate_leave(MeasEvent event, double mn_dbm, double mp_dbm, const MeasConfig& cfg);

struct TriggeredCell {
    int cell_id = 0;
    double rsrp_dbm = 0.0;
    double rsrq_db = 0.0;
};

// Optional UE context stamped into reports.
struct UeMeasContext {
    double height_m = 0.0;
    Vec2 location;
    double horizontal_speed_mps = 0.0;
    double vertical_speed_mps = 0.0;
};

struct MeasReport {
    double t_ms = 0.0;
    std::vector<TriggeredCell> cells;  // ascending cell_id
    UeMeasContext ue;
};

struct MeasState {
    std::map<int, double> filtered_rsrp_dbm;
    // Per neighbour: time its entry condition has held continuously
    // (absent = not currently holding, or already triggered).
    std::map<int, double> condition_met_since_ms;
    std::set<int> cells_triggered;
    bool report_armed = true;
    double last_t_ms = -1.0;
    bool started = false;
};

// Advances the engine by one measurement occasion. `measurements` holds raw
// RSRP per measured cell; cells absent this tick keep their state. A report
// is emitted when the triggered list first reaches cell_count_x while
// armed; the engine re-arms only after the list falls below X again.
// Time must be strictly increasing across calls.
std::optional<MeasReport> meas_step(MeasState& state, double t_ms,
                                    const std::map<int, double>& measurements,
                                    const MeasConfig& cfg,
                                    const UeMeasContext* context = nullptr);

struct HeightReportConfig {
    double height_threshold_m = 100.0;
    double hysteresis_m = 5.0;

    void validate() const;
};

enum class HeightCrossing { upward, downward };

struct HeightReport {
    double t_ms = 0.0;
    HeightCrossing crossing = HeightCrossing::upward;
    UeMeasContext ue;
};

struct HeightReportState {
    int side = 0;  // -1 confirmed below, +1 confirmed above, 0 not yet known
    double last_t_ms = -1.0;
    bool started = false;
};

// Debounced threshold-crossing detector: a side is confirmed only outside
// the hysteresis band, so jitter inside the band never duplicates reports.
// The first confirmed side initialises the detector without reporting.
std::optional<HeightReport> height_step(HeightReportState& state, double t_ms,
                                        double height_m, Vec3 velocity_mps, Vec2 location,
                                        const HeightReportConfig& cfg);

}  // namespace skysim
