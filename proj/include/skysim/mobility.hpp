// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "skysim/channel.hpp"
#include "skysim/common.hpp"
#include "skysim/scenario.hpp"

namespace skysim {

struct Waypoint {
    Vec3 position;
    double t_ms = 0.0;
};

struct FlightPath {
    std::vector<Waypoint> waypoints;  // strictly increasing timestamps

    void validate() const;
    double start_ms() const { return waypoints.front().t_ms; }
    double end_ms() const { return waypoints.back().t_ms; }
};

// Linear interpolation between bracketing waypoints; throws DomainError
// outside [t_first, t_last].
Vec3 position_at(const FlightPath& path, double t_ms);

// CSV rows (t_ms, x, y, z), optional header.
FlightPath load_flight_path_csv(const std::string& path);

struct HandoverConfig {
    double a3_offset_db = 3.0;
    double ttt_ms = 160.0;
    double prep_delay_ms = 50.0;
    double exec_time_ms = 40.0;
    double qout_db = -8.0;
    double qin_db = -6.0;
    double t310_ms = 1000.0;
    int l3_filter_k = 4;

    void validate() const;
};

struct MobilityStats {
    int handover_attempts = 0;
    int handovers = 0;  // completed
    int handover_failures = 0;
    int radio_link_failures = 0;
    int ping_pongs = 0;
    double time_in_outage_ms = 0.0;
};

struct MobileUe {
    int ue_id = 0;
    UeKind kind = UeKind::aerial;
    FlightPath path;
};

// Tick-driven run over frozen per-link LOS/shadow states: per tick the UE
// re-filters RSRP, evaluates A3+TTT handover, and tracks qout/qin radio
// link supervision. Interference is full-load downlink from every
// non-serving cell.
std::vector<MobilityStats> simulate_mobility(const ScenarioConfig& cfg,
                                             const ChannelModel& model,
                                             const std::vector<Cell>& cells,
                                             const std::vector<MobileUe>& ues,
                                             const HandoverConfig& ho, double duration_ms,
                                             double tick_ms, std::uint64_t seed);

// Straight constant-speed path through the layout; heading and offset come
// from the seed so independent runs cover different chords.
FlightPath random_chord_path(const ScenarioConfig& cfg, double height_m, double speed_mps,
                             double duration_ms, Rng& rng);

}  // namespace skysim
