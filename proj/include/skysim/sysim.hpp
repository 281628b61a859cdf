// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "skysim/cdf.hpp"
#include "skysim/channel.hpp"
#include "skysim/power.hpp"
#include "skysim/scenario.hpp"

namespace skysim {

// One generated deployment: layout, UE drop, and the full link matrix.
struct Drop {
    ScenarioConfig cfg;
    std::vector<Cell> cells;
    std::vector<UEntity> ues;
    Wraparound wrap;
    std::vector<LinkState> links;            // row-major [ue][cell]
    std::vector<int> serving;                // per UE: argmax coupling gain
    std::vector<std::vector<int>> cell_ues;  // attached UE ids per cell

    const LinkState& link(int ue_id, int cell_id) const {
        return links[static_cast<std::size_t>(ue_id) * cells.size() +
                     static_cast<std::size_t>(cell_id)];
    }
    bool cell_serves_terrestrial(int cell_id) const;
};

Drop make_drop(const ScenarioConfig& cfg, const ChannelModel& model, std::uint64_t drop_seed);

struct ThroughputParams {
    double min_sinr_db = -10.0;
    double efficiency = 0.6;
    double max_bps_hz = 4.8;
};

// Attenuated, truncated Shannon mapping from SINR to spectral efficiency.
double throughput_map(double sinr_db, const ThroughputParams& params = {});

struct CellIotSample {
    int cell_id = 0;
    bool serves_terrestrial = false;
    double iot_db = 0.0;
};

struct UeUlSample {
    int ue_id = 0;
    UeKind kind = UeKind::terrestrial_outdoor;
    double height_m = 0.0;
    double sinr_db = 0.0;
    double throughput_bps_hz = 0.0;
    double tx_power_dbm = 0.0;
};

struct UeDlSample {
    int ue_id = 0;
    UeKind kind = UeKind::terrestrial_outdoor;
    double height_m = 0.0;
    double geometry_db = 0.0;
};

struct SnapshotResult {
    std::vector<CellIotSample> iot;
    std::vector<UeUlSample> ul;
};

// One uplink snapshot round: every active cell grants its round-robin UE
// the full band; IoT is measured at every cell, SINR at every serving cell.
SnapshotResult uplink_snapshot(const Drop& drop, const PowerControlConfig& pc,
                               int snapshot_index, Rng& activity_rng,
                               const ThroughputParams& tput = {});

// Long-term downlink geometry per UE under full-load transmission.
std::vector<UeDlSample> downlink_geometry(const Drop& drop);

// One sweep point: either an aerial-ratio override or a power-class table.
struct SweepSetting {
    std::string label;
    std::optional<double> aerial_ratio;
    std::optional<PowerControlConfig> power;
};

// samples[metric][kind] for one drop. Metrics: ul_iot, ul_sinr,
// ul_throughput, dl_geometry. Kinds: all/terrestrial/aerial(+_above50m)
// for UE metrics, all_cells/terrestrial_cells for IoT.
using MetricSamples = std::map<std::string, std::map<std::string, std::vector<double>>>;

struct SettingResult {
    std::string label;
    std::vector<MetricSamples> per_drop;

    // All drops merged and sorted; empty CDF if the kind never appears.
    MetricsCdf merged(const std::string& metric, const std::string& kind) const;
};

struct CampaignResult {
    std::vector<SettingResult> settings;
};

struct ChannelOptions {
    // When set, every link uses this shadow sigma (0 disables shadowing).
    std::optional<double> shadow_sigma_override_db;
    // Optional (h_ut, d_2d, p_los) grid replacing the default LOS model.
    std::string los_table_csv;
};

// Builds the default model, optionally wrapped with a LOS table.
std::shared_ptr<ChannelModel> make_channel_model(const ScenarioConfig& cfg,
                                                 const ChannelOptions& opts = {});

// Runs n_drops x n_snapshots per sweep setting. Drop seeds derive from
// (master_seed, drop_index) only, so settings share drops: ratio sweeps are
// coupled and power sweeps are exactly paired per drop. Drops execute on
// `jobs` workers; aggregation is order-independent.
CampaignResult run_campaign(const ScenarioConfig& base, const PowerControlConfig& base_pc,
                            const std::vector<SweepSetting>& sweep, int n_drops,
                            int n_snapshots, std::uint64_t master_seed, int jobs = 1,
                            const ThroughputParams& tput = {},
                            const ChannelOptions& channel_opts = {});

}  // namespace skysim
