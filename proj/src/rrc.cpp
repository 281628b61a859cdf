// SPDX-License-Identifier: Apache-2.0

#include "skysim/rrc.hpp"

#include <cmath>

namespace skysim {

const char* to_string(MeasEvent e) {
    switch (e) {
        case MeasEvent::a3: return "A3";
        case MeasEvent::a4: return "A4";
        case MeasEvent::a5: return "A5";
    }
    return "?";
}

MeasEvent meas_event_from_string(const std::string& s) {
    if (s == "A3" || s == "a3") return MeasEvent::a3;
    if (s == "A4" || s == "a4") return MeasEvent::a4;
    if (s == "A5" || s == "a5") return MeasEvent::a5;
    throw ConfigError("unknown measurement event '" + s + "' (expected A3, A4 or A5)");
}

void MeasConfig::validate() const {
    if (ttt_ms < 0.0) throw ConfigError("ttt_ms must be >= 0");
    if (cell_count_x < 1) throw ConfigError("cell_count_x must be >= 1");
    if (hysteresis_db < 0.0) throw ConfigError("hysteresis_db must be >= 0");
    if (l3_filter_k < 0) throw ConfigError("l3_filter_k must be >= 0");
}

void HeightReportConfig::validate() const {
    if (height_threshold_m <= 0.0) throw ConfigError("height_threshold_m must be > 0");
    if (hysteresis_m < 0.0) throw ConfigError("hysteresis_m must be >= 0");
}

double l3_filter(double prev_dbm, double sample_dbm, int k) {
    const double a = 1.0 / std::pow(2.0, static_cast<double>(k) / 4.0);
    return (1.0 - a) * prev_dbm + a * sample_dbm;
}

bool evaluate_entry(MeasEvent event, double mn_dbm, double mp_dbm, const MeasConfig& cfg) {
    const double hys = cfg.hysteresis_db;
    switch (event) {
        case MeasEvent::a3: return mn_dbm - hys > mp_dbm + cfg.a3_offset_db;
        case MeasEvent::a4: return mn_dbm - hys > cfg.a4_threshold_dbm;
        case MeasEvent::a5:
            return (mp_dbm + hys < cfg.a5_threshold1_dbm) &&
                   (mn_dbm - hys > cfg.a5_threshold2_dbm);
    }
    return false;
}

bool evaluate_leave(MeasEvent event, double mn_dbm, double mp_dbm, const MeasConfig& cfg) {
    const double hys = cfg.hysteresis_db;
    switch (event) {
        case MeasEvent::a3: return mn_dbm + hys < mp_dbm + cfg.a3_offset_db;
        case MeasEvent::a4: return mn_dbm + hys < cfg.a4_threshold_dbm;
        case MeasEvent::a5:
            return (mp_dbm - hys > cfg.a5_threshold1_dbm) ||
                   (mn_dbm + hys < cfg.a5_threshold2_dbm);
    }
    return false;
}

namespace {

// RSRQ proxy over the measured set: per-cell share of the total received
// power. Reports carry it; no event evaluates it.
double rsrq_proxy(double rsrp_dbm, double total_lin) {
    return rsrp_dbm - 10.0 * std::log10(total_lin);
}

}  // namespace

std::optional<MeasReport> meas_step(MeasState& state, double t_ms,
                                    const std::map<int, double>& measurements,
                                    const MeasConfig& cfg, const UeMeasContext* context) {
    cfg.validate();
    if (state.started && t_ms <= state.last_t_ms)
        throw ContractError("meas_step: time must be strictly increasing");
    state.started = true;
    state.last_t_ms = t_ms;

    for (const auto& [cell, sample] : measurements) {
        auto it = state.filtered_rsrp_dbm.find(cell);
        if (it == state.filtered_rsrp_dbm.end()) {
            state.filtered_rsrp_dbm.emplace(cell, sample);  // filter starts at first sample
        } else {
            it->second = l3_filter(it->second, sample, cfg.l3_filter_k);
        }
    }

    const auto serving_it = state.filtered_rsrp_dbm.find(cfg.serving_cell_id);
    const bool have_serving = serving_it != state.filtered_rsrp_dbm.end();
    const double mp = have_serving ? serving_it->second : 0.0;
    const bool needs_serving = cfg.event != MeasEvent::a4;

    for (const auto& [cell, raw] : measurements) {
        (void)raw;
        if (cell == cfg.serving_cell_id) continue;
        const double mn = state.filtered_rsrp_dbm.at(cell);
        // A3/A5 cannot be evaluated before the serving cell was measured.
        const bool entry =
            (!needs_serving || have_serving) && evaluate_entry(cfg.event, mn, mp, cfg);
        const bool leave =
            (!needs_serving || have_serving) && evaluate_leave(cfg.event, mn, mp, cfg);

        if (state.cells_triggered.count(cell)) {
            if (leave) state.cells_triggered.erase(cell);
            continue;
        }
        if (!entry) {
            state.condition_met_since_ms.erase(cell);
            continue;
        }
        auto [it, inserted] = state.condition_met_since_ms.emplace(cell, t_ms);
        if (t_ms - it->second >= cfg.ttt_ms) {
            state.cells_triggered.insert(cell);
            state.condition_met_since_ms.erase(it);
        }
    }

    const int triggered = static_cast<int>(state.cells_triggered.size());
    if (triggered < cfg.cell_count_x) {
        state.report_armed = true;
        return std::nullopt;
    }
    if (!state.report_armed) return std::nullopt;
    state.report_armed = false;

    MeasReport report;
    report.t_ms = t_ms;
    double total_lin = 0.0;
    for (const auto& [cell, rsrp] : state.filtered_rsrp_dbm) {
        (void)cell;
        total_lin += db_to_linear(rsrp);
    }
    for (int cell : state.cells_triggered) {
        const double rsrp = state.filtered_rsrp_dbm.at(cell);
        report.cells.push_back({cell, rsrp, rsrq_proxy(rsrp, total_lin)});
    }
    if (context != nullptr) report.ue = *context;
    return report;
}

std::optional<HeightReport> height_step(HeightReportState& state, double t_ms,
                                        double height_m, Vec3 velocity_mps, Vec2 location,
                                        const HeightReportConfig& cfg) {
    cfg.validate();
    if (state.started && t_ms <= state.last_t_ms)
        throw ContractError("height_step: time must be strictly increasing");
    state.started = true;
    state.last_t_ms = t_ms;

    int side = 0;
    if (height_m >= cfg.height_threshold_m + cfg.hysteresis_m) side = 1;
    if (height_m <= cfg.height_threshold_m - cfg.hysteresis_m) side = -1;
    if (side == 0 || side == state.side) return std::nullopt;

    const bool initialising = state.side == 0;
    state.side = side;
    if (initialising) return std::nullopt;

    HeightReport report;
    report.t_ms = t_ms;
    report.crossing = side > 0 ? HeightCrossing::upward : HeightCrossing::downward;
    report.ue.height_m = height_m;
    report.ue.location = location;
    report.ue.horizontal_speed_mps = velocity_mps.xy().norm();
    report.ue.vertical_speed_mps = velocity_mps.z;
    return report;
}

}  // namespace skysim
