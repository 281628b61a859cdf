// SPDX-License-Identifier: Apache-2.0

#include "skysim/uas.hpp"

#include <algorithm>
#include <cmath>

#include "skysim/csv.hpp"

namespace skysim {

bool identify_aerial(bool subscription_authorized, bool capability_indicated,
                     IdentificationPolicy policy) {
    switch (policy) {
        case IdentificationPolicy::both_required:
            return subscription_authorized && capability_indicated;
        case IdentificationPolicy::subscription_only: return subscription_authorized;
        case IdentificationPolicy::capability_only: return capability_indicated;
    }
    return false;
}

FlightPathSession::FlightPathSession(UeContext ue, bool suppress_when_unavailable)
    : ue_(ue), suppress_when_unavailable_(suppress_when_unavailable) {
    ue_.identified_aerial =
        identify_aerial(ue_.subscription_aerial_authorized, ue_.radio_capability_aerial);
}

FlightPathMessage FlightPathSession::connect(bool flight_path_available,
                                             std::optional<FlightPath> path) {
    connected_ = true;
    available_ = flight_path_available;
    path_ = std::move(path);
    if (available_ && !path_.has_value())
        throw ConfigError("session declared flight path available without a path");
    ue_.flight_path_available = available_;
    FlightPathMessage msg;
    msg.kind = FlightPathMessageKind::availability_indication;
    msg.available = available_;
    log_.push_back(msg);
    return msg;
}

void FlightPathSession::disconnect() {
    connected_ = false;
    available_ = false;
    path_.reset();
}

std::optional<FlightPathMessage> FlightPathSession::request_flight_path() {
    if (!connected_)
        throw ContractError("flight path requested before connection establishment");
    if (suppress_when_unavailable_ && !available_) return std::nullopt;

    FlightPathMessage request;
    request.kind = FlightPathMessageKind::request;
    log_.push_back(request);

    FlightPathMessage answer;
    if (available_) {
        answer.kind = FlightPathMessageKind::report;
        answer.flight_path = path_;
    } else {
        answer.kind = FlightPathMessageKind::no_info;
    }
    log_.push_back(answer);
    return answer;
}

namespace {

// Liang-Barsky clip of segment a->b against the region; true when any part
// of the segment lies inside.
bool segment_enters(Vec2 a, Vec2 b, const Region& r) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    double t0 = 0.0;
    double t1 = 1.0;
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {a.x - r.x_min, r.x_max - a.x, a.y - r.y_min, r.y_max - a.y};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return false;  // parallel and outside
            continue;
        }
        const double t = q[i] / p[i];
        if (p[i] < 0.0) {
            t0 = std::max(t0, t);
        } else {
            t1 = std::min(t1, t);
        }
    }
    return t0 <= t1;
}

}  // namespace

std::string flight_path_log_csv(const std::vector<std::pair<int, FlightPath>>& reports) {
    std::string out = "ue_id,i,t_ms,x_m,y_m,z_m\n";
    for (const auto& [ue_id, path] : reports) {
        path.validate();
        for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
            const Waypoint& wp = path.waypoints[i];
            out += std::to_string(ue_id) + "," + std::to_string(i) + "," +
                   csv_num(wp.t_ms) + "," + csv_num(wp.position.x) + "," +
                   csv_num(wp.position.y) + "," + csv_num(wp.position.z) + "\n";
        }
    }
    return out;
}

int paths_per_area(const std::vector<FlightPath>& reports, const Region& region,
                   const TimeWindow& window) {
    if (region.x_min > region.x_max || region.y_min > region.y_max)
        throw ConfigError("region bounds are inverted");
    if (window.begin_ms > window.end_ms) throw ConfigError("time window is inverted");

    int count = 0;
    for (const FlightPath& path : reports) {
        path.validate();
        const double t0 = std::max(window.begin_ms, path.start_ms());
        const double t1 = std::min(window.end_ms, path.end_ms());
        if (t0 > t1) continue;

        bool inside = false;
        const auto& wps = path.waypoints;
        if (wps.size() == 1) {
            const Vec2 p = wps.front().position.xy();
            inside = p.x >= region.x_min && p.x <= region.x_max && p.y >= region.y_min &&
                     p.y <= region.y_max;
        }
        for (std::size_t i = 0; i + 1 < wps.size() && !inside; ++i) {
            const double sa = wps[i].t_ms;
            const double sb = wps[i + 1].t_ms;
            if (sb < t0 || sa > t1) continue;
            // Clip the segment to the window before the spatial test.
            const double ca = std::max(sa, t0);
            const double cb = std::min(sb, t1);
            const double fa = (ca - sa) / (sb - sa);
            const double fb = (cb - sa) / (sb - sa);
            const Vec3 pa = wps[i].position + (wps[i + 1].position - wps[i].position) * fa;
            const Vec3 pb = wps[i].position + (wps[i + 1].position - wps[i].position) * fb;
            inside = segment_enters(pa.xy(), pb.xy(), region);
        }
        if (inside) ++count;
    }
    return count;
}

}  // namespace skysim
