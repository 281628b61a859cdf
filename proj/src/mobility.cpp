// SPDX-License-Identifier: Apache-2.0

#include "skysim/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "skysim/rrc.hpp"

namespace skysim {

void FlightPath::validate() const {
    if (waypoints.empty()) throw ConfigError("flight path needs at least one waypoint");
    for (std::size_t i = 0; i < waypoints.size(); ++i) {
        const double z = waypoints[i].position.z;
        if (z < 0.0 || z > 300.0)
            throw ConfigError("flight path heights must lie within [0, 300] m");
        if (i > 0 && waypoints[i].t_ms <= waypoints[i - 1].t_ms)
            throw ConfigError("flight path timestamps must be strictly increasing");
    }
}

Vec3 position_at(const FlightPath& path, double t_ms) {
    path.validate();
    if (t_ms < path.start_ms() || t_ms > path.end_ms())
        throw DomainError("position_at: time outside the flight path");
    const auto& wps = path.waypoints;
    auto upper = std::upper_bound(
        wps.begin(), wps.end(), t_ms,
        [](double t, const Waypoint& w) { return t < w.t_ms; });
    if (upper == wps.begin()) return wps.front().position;
    if (upper == wps.end()) return wps.back().position;
    const Waypoint& b = *upper;
    const Waypoint& a = *(upper - 1);
    const double f = (t_ms - a.t_ms) / (b.t_ms - a.t_ms);
    return a.position + (b.position - a.position) * f;
}

FlightPath load_flight_path_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open trajectory file '" + path + "'");
    FlightPath fp;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        double t, x, y, z;
        char comma;
        if (!(ls >> t)) continue;  // header
        if (!(ls >> comma >> x >> comma >> y >> comma >> z))
            throw ConfigError("trajectory row needs 4 fields (t_ms,x,y,z): " + line);
        fp.waypoints.push_back({{x, y, z}, t});
    }
    fp.validate();
    return fp;
}

void HandoverConfig::validate() const {
    if (qout_db >= qin_db) throw ConfigError("qout must be below qin");
    if (ttt_ms < 0 || prep_delay_ms < 0 || exec_time_ms < 0 || t310_ms < 0)
        throw ConfigError("handover durations must be >= 0");
}

FlightPath random_chord_path(const ScenarioConfig& cfg, double height_m, double speed_mps,
                             double duration_ms, Rng& rng) {
    // Chord through a disc around the layout centre: random bearing, random
    // signed offset from the centre line.
    const double radius = cfg.inter_site_distance_m * (cfg.n_sites == 19 ? 2.0 : 1.0);
    const double bearing = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double offset = rng.uniform(-0.6, 0.6) * radius;
    const Vec2 dir{std::cos(bearing), std::sin(bearing)};
    const Vec2 normal{-dir.y, dir.x};
    const double half_len = speed_mps * duration_ms / 1e3 / 2.0;
    const Vec2 mid = normal * offset;
    const Vec2 start = mid - dir * half_len;
    const Vec2 end = mid + dir * half_len;
    FlightPath fp;
    fp.waypoints.push_back({{start.x, start.y, height_m}, 0.0});
    fp.waypoints.push_back({{end.x, end.y, height_m}, duration_ms});
    return fp;
}

namespace {

// Frozen link randomness for one mobility run: LOS and shadowing are drawn
// once per (UE, cell) so handover decisions track geometry, not re-rolled
// fading.
struct FrozenLink {
    bool is_los = true;
    double shadow_db = 0.0;
};

class RunChannel {
  public:
    RunChannel(const ScenarioConfig& cfg, const ChannelModel& model,
               const std::vector<Cell>& cells, const MobileUe& ue, std::uint64_t seed)
        : cfg_(cfg), model_(model), cells_(cells),
          wrap_(cfg.n_sites, cfg.inter_site_distance_m) {
        // Sample at the path midpoint so the frozen state is representative.
        const double t_mid = (ue.path.start_ms() + ue.path.end_ms()) / 2.0;
        const Vec3 mid = position_at(ue.path, t_mid);
        frozen_.reserve(cells.size());
        for (const Cell& cell : cells) {
            Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(ue.ue_id),
                                  static_cast<std::uint64_t>(cell.cell_id));
            const double d2d = wrap_.distance(cell.site_position, mid.xy());
            FrozenLink fl;
            fl.is_los = sample_los(model.los_probability(mid.z, d2d), rng);
            fl.shadow_db = shadow_sample(model, fl.is_los, mid.z, d2d, rng);
            frozen_.push_back(fl);
        }
    }

    double rsrp_dbm(std::size_t cell_idx, Vec3 pos) const {
        const Cell& cell = cells_[cell_idx];
        const FrozenLink& fl = frozen_[cell_idx];
        const Vec2 d = wrap_.displacement(cell.site_position, pos.xy());
        const double d2d = d.norm();
        const double dh = pos.z - cell.antenna_height_m;
        const double d3d = std::max(std::sqrt(d2d * d2d + dh * dh), 1.0);
        const double pl = fl.is_los ? model_.pathloss_los_db(pos.z, d3d)
                                    : model_.pathloss_nlos_db(pos.z, d3d);
        const double gain = antenna_gain_wrapped(cfg_.antenna, cell, d, pos.z);
        return cell.tx_power_dbm - pl - fl.shadow_db + gain + cfg_.ue_antenna_gain_dbi;
    }

  private:
    const ScenarioConfig& cfg_;
    const ChannelModel& model_;
    const std::vector<Cell>& cells_;
    Wraparound wrap_;
    std::vector<FrozenLink> frozen_;
};

struct UeRunState {
    std::size_t serving = 0;
    std::vector<double> filtered;  // per cell
    bool filter_init = false;
    std::vector<double> a3_held_ms;  // per cell TTT clocks

    enum class HoPhase { idle, prep, exec };
    HoPhase phase = HoPhase::idle;
    std::size_t target = 0;
    double phase_left_ms = 0.0;

    double t310_elapsed_ms = -1.0;  // <0: supervision timer stopped
    std::size_t previous_cell = 0;
    double last_ho_t_ms = -1e18;
};

}  // namespace

std::vector<MobilityStats> simulate_mobility(const ScenarioConfig& cfg,
                                             const ChannelModel& model,
                                             const std::vector<Cell>& cells,
                                             const std::vector<MobileUe>& ues,
                                             const HandoverConfig& ho, double duration_ms,
                                             double tick_ms, std::uint64_t seed) {
    ho.validate();
    if (tick_ms <= 0.0) throw ConfigError("tick_ms must be positive");
    const auto n_ticks = static_cast<long long>(std::llround(duration_ms / tick_ms));
    if (std::abs(n_ticks * tick_ms - duration_ms) > 1e-6)
        throw ConfigError("tick_ms must divide duration_ms");

    const double noise_lin =
        db_to_linear(cfg.thermal_noise_density_dbm_hz +
                     10.0 * std::log10(cfg.bandwidth_rbs * kRbBandwidthHz) +
                     cfg.noise_figure_db);

    std::vector<MobilityStats> stats(ues.size());
    for (std::size_t u = 0; u < ues.size(); ++u) {
        const MobileUe& ue = ues[u];
        ue.path.validate();
        const RunChannel chan(cfg, model, cells, ue, seed);

        UeRunState st;
        st.filtered.assign(cells.size(), 0.0);
        st.a3_held_ms.assign(cells.size(), 0.0);
        MobilityStats& out = stats[u];

        std::vector<double> rsrp(cells.size());
        for (long long tick = 0; tick <= n_ticks; ++tick) {
            const double t = ue.path.start_ms() + static_cast<double>(tick) * tick_ms;
            if (t > ue.path.end_ms()) break;
            const Vec3 pos = position_at(ue.path, t);

            for (std::size_t c = 0; c < cells.size(); ++c) rsrp[c] = chan.rsrp_dbm(c, pos);
            if (!st.filter_init) {
                st.filtered = rsrp;
                st.filter_init = true;
                st.serving = static_cast<std::size_t>(
                    std::max_element(rsrp.begin(), rsrp.end()) - rsrp.begin());
                st.previous_cell = st.serving;
            } else {
                for (std::size_t c = 0; c < cells.size(); ++c)
                    st.filtered[c] = l3_filter(st.filtered[c], rsrp[c], ho.l3_filter_k);
            }

            // Wideband downlink SINR toward the serving cell.
            double interference = noise_lin;
            for (std::size_t c = 0; c < cells.size(); ++c) {
                if (c == st.serving) continue;
                interference += db_to_linear(rsrp[c]);
            }
            const double sinr_db = rsrp[st.serving] - 10.0 * std::log10(interference);

            if (sinr_db < ho.qout_db) out.time_in_outage_ms += tick_ms;

            // Radio link supervision: the timer runs from the first
            // out-of-sync tick and stops once SINR recovers above qin.
            if (st.t310_elapsed_ms >= 0.0) {
                if (sinr_db > ho.qin_db) {
                    st.t310_elapsed_ms = -1.0;
                } else {
                    st.t310_elapsed_ms += tick_ms;
                }
            } else if (sinr_db < ho.qout_db) {
                st.t310_elapsed_ms = 0.0;
            }
            if (st.t310_elapsed_ms >= ho.t310_ms) {
                ++out.radio_link_failures;
                // An in-flight handover dies with the link.
                if (st.phase != UeRunState::HoPhase::idle) ++out.handover_failures;
                // Re-establish on the strongest cell.
                st.serving = static_cast<std::size_t>(
                    std::max_element(st.filtered.begin(), st.filtered.end()) -
                    st.filtered.begin());
                st.t310_elapsed_ms = -1.0;
                st.phase = UeRunState::HoPhase::idle;
                std::fill(st.a3_held_ms.begin(), st.a3_held_ms.end(), 0.0);
                continue;
            }

            switch (st.phase) {
                case UeRunState::HoPhase::idle: {
                    // Per-neighbour A3 + TTT.
                    std::size_t trigger = cells.size();
                    for (std::size_t c = 0; c < cells.size(); ++c) {
                        if (c == st.serving) {
                            st.a3_held_ms[c] = 0.0;
                            continue;
                        }
                        if (st.filtered[c] > st.filtered[st.serving] + ho.a3_offset_db) {
                            st.a3_held_ms[c] += tick_ms;
                            if (st.a3_held_ms[c] >= ho.ttt_ms && trigger == cells.size())
                                trigger = c;
                        } else {
                            st.a3_held_ms[c] = 0.0;
                        }
                    }
                    if (trigger != cells.size()) {
                        ++out.handover_attempts;
                        st.phase = UeRunState::HoPhase::prep;
                        st.target = trigger;
                        st.phase_left_ms = ho.prep_delay_ms;
                    }
                    break;
                }
                case UeRunState::HoPhase::prep:
                case UeRunState::HoPhase::exec: {
                    if (sinr_db < ho.qout_db) {
                        // Command or completion lost mid-procedure.
                        ++out.handover_failures;
                        st.phase = UeRunState::HoPhase::idle;
                        st.serving = static_cast<std::size_t>(
                            std::max_element(st.filtered.begin(), st.filtered.end()) -
                            st.filtered.begin());
                        st.t310_elapsed_ms = -1.0;
                        std::fill(st.a3_held_ms.begin(), st.a3_held_ms.end(), 0.0);
                        break;
                    }
                    st.phase_left_ms -= tick_ms;
                    if (st.phase_left_ms > 0.0) break;
                    if (st.phase == UeRunState::HoPhase::prep) {
                        st.phase = UeRunState::HoPhase::exec;
                        st.phase_left_ms = ho.exec_time_ms;
                        break;
                    }
                    // Execution complete.
                    ++out.handovers;
                    out.time_in_outage_ms += ho.exec_time_ms;  // interruption
                    if (st.target == st.previous_cell && t - st.last_ho_t_ms <= 1000.0)
                        ++out.ping_pongs;
                    st.previous_cell = st.serving;
                    st.serving = st.target;
                    st.last_ho_t_ms = t;
                    st.phase = UeRunState::HoPhase::idle;
                    st.t310_elapsed_ms = -1.0;
                    std::fill(st.a3_held_ms.begin(), st.a3_held_ms.end(), 0.0);
                    break;
                }
            }
        }
    }
    return stats;
}

}  // namespace skysim
