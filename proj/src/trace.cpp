// SPDX-License-Identifier: Apache-2.0

#include "skysim/trace.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "skysim/csv.hpp"

namespace skysim {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

bool parse_number(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

}  // namespace

std::vector<TraceTick> parse_trace(std::istream& in) {
    std::vector<TraceTick> ticks;
    std::string line;
    int line_no = 0;
    double last_t = -std::numeric_limits<double>::infinity();
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_fields(line);
        double t;
        if (!parse_number(fields[0], t)) {
            if (line_no == 1) continue;  // header
            throw TraceError("trace line " + std::to_string(line_no) +
                             ": timestamp is not a number");
        }
        if (t < last_t)
            throw TraceError("trace line " + std::to_string(line_no) +
                             ": time went backwards");
        if (ticks.empty() || t > last_t) ticks.push_back({t, {}, {}});
        last_t = t;
        TraceTick& tick = ticks.back();

        if (fields.size() == 3) {
            double cell, rsrp;
            if (!parse_number(fields[1], cell) || !parse_number(fields[2], rsrp))
                throw TraceError("trace line " + std::to_string(line_no) +
                                 ": bad measurement row");
            tick.rsrp_dbm[static_cast<int>(cell)] = rsrp;
        } else if (fields.size() == 5) {
            double h, vx, vy, vz;
            if (!parse_number(fields[1], h) || !parse_number(fields[2], vx) ||
                !parse_number(fields[3], vy) || !parse_number(fields[4], vz))
                throw TraceError("trace line " + std::to_string(line_no) +
                                 ": bad height row");
            tick.height = HeightSample{h, {vx, vy, vz}};
        } else {
            throw TraceError("trace line " + std::to_string(line_no) +
                             ": expected 3 fields (t,cell,rsrp) or 5 (t,h,vx,vy,vz)");
        }
    }
    return ticks;
}

std::vector<TraceTick> load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TraceError("cannot open trace file '" + path + "'");
    return parse_trace(in);
}

std::vector<ReportRow> replay_trace(const std::vector<TraceTick>& trace,
                                    const MeasConfig& meas,
                                    const std::optional<HeightReportConfig>& height) {
    MeasState meas_state;
    HeightReportState height_state;
    UeMeasContext context{};
    bool have_context = false;

    std::vector<ReportRow> rows;
    for (const TraceTick& tick : trace) {
        if (tick.height.has_value()) {
            context.height_m = tick.height->height_m;
            context.horizontal_speed_mps = tick.height->velocity_mps.xy().norm();
            context.vertical_speed_mps = tick.height->velocity_mps.z;
            have_context = true;
            if (height.has_value()) {
                auto hr = height_step(height_state, tick.t_ms, tick.height->height_m,
                                      tick.height->velocity_mps, {}, *height);
                if (hr.has_value()) {
                    rows.push_back({tick.t_ms,
                                    hr->crossing == HeightCrossing::upward ? "height_up"
                                                                           : "height_down",
                                    {},
                                    hr->ue});
                }
            }
        }
        if (!tick.rsrp_dbm.empty()) {
            auto mr = meas_step(meas_state, tick.t_ms, tick.rsrp_dbm, meas,
                                have_context ? &context : nullptr);
            if (mr.has_value()) {
                rows.push_back({tick.t_ms, "multi_cell", mr->cells,
                                have_context ? std::optional<UeMeasContext>(mr->ue)
                                             : std::nullopt});
            }
        }
    }
    return rows;
}

std::string report_log_csv(const std::vector<ReportRow>& rows) {
    std::string out = "t_ms,kind,cells,height_m,x_m,y_m,h_speed_mps,v_speed_mps\n";
    for (const ReportRow& r : rows) {
        out += csv_num(r.t_ms);
        out += ',';
        out += r.kind;
        out += ',';
        for (std::size_t i = 0; i < r.cells.size(); ++i) {
            if (i > 0) out += ';';
            out += std::to_string(r.cells[i].cell_id);
        }
        if (r.ue.has_value()) {
            out += ',' + csv_num(r.ue->height_m) + ',' + csv_num(r.ue->location.x) + ',' +
                   csv_num(r.ue->location.y) + ',' + csv_num(r.ue->horizontal_speed_mps) +
                   ',' + csv_num(r.ue->vertical_speed_mps);
        } else {
            out += ",,,,,";
        }
        out += '\n';
    }
    return out;
}

std::string trace_csv(const std::vector<TraceTick>& trace) {
    std::string out;
    for (const TraceTick& tick : trace) {
        if (tick.height.has_value()) {
            out += csv_num(tick.t_ms) + ',' + csv_num(tick.height->height_m) + ',' +
                   csv_num(tick.height->velocity_mps.x) + ',' +
                   csv_num(tick.height->velocity_mps.y) + ',' +
                   csv_num(tick.height->velocity_mps.z) + '\n';
        }
        for (const auto& [cell, rsrp] : tick.rsrp_dbm) {
            out += csv_num(tick.t_ms) + ',' + std::to_string(cell) + ',' + csv_num(rsrp) +
                   '\n';
        }
    }
    return out;
}

}  // namespace skysim
