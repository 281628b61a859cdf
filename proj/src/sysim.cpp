// SPDX-License-Identifier: Apache-2.0

#include "skysim/sysim.hpp"

#include <algorithm>
#include <cmath>

#include "skysim/parallel.hpp"

namespace skysim {

namespace {

double thermal_noise_dbm(const ScenarioConfig& cfg) {
    return cfg.thermal_noise_density_dbm_hz +
           10.0 * std::log10(cfg.bandwidth_rbs * kRbBandwidthHz) + cfg.noise_figure_db;
}

}  // namespace

bool Drop::cell_serves_terrestrial(int cell_id) const {
    for (int u : cell_ues[static_cast<std::size_t>(cell_id)]) {
        if (ues[static_cast<std::size_t>(u)].kind != UeKind::aerial) return true;
    }
    return false;
}

Drop make_drop(const ScenarioConfig& cfg, const ChannelModel& model, std::uint64_t drop_seed) {
    Drop drop;
    drop.cfg = cfg;
    drop.cfg.rng_seed = drop_seed;
    drop.cells = build_layout(cfg);
    drop.wrap = Wraparound(cfg.n_sites, cfg.inter_site_distance_m);

    Rng drop_rng = Rng::derive(drop_seed, std::uint64_t{0xD0});
    drop.ues = drop_ues(cfg, drop.cells, drop_rng);
    drop.links = compute_links(cfg, model, drop.wrap, drop.cells, drop.ues,
                               mix64(drop_seed ^ 0x11));

    drop.serving.resize(drop.ues.size());
    drop.cell_ues.assign(drop.cells.size(), {});
    for (const UEntity& ue : drop.ues) {
        int best = 0;
        double best_gain = -1e300;
        for (const Cell& cell : drop.cells) {
            const double g = drop.link(ue.ue_id, cell.cell_id).coupling_gain_db;
            if (g > best_gain) {
                best_gain = g;
                best = cell.cell_id;
            }
        }
        drop.serving[static_cast<std::size_t>(ue.ue_id)] = best;
        drop.cell_ues[static_cast<std::size_t>(best)].push_back(ue.ue_id);
    }
    return drop;
}

double throughput_map(double sinr_db, const ThroughputParams& params) {
    if (sinr_db < params.min_sinr_db) return 0.0;
    const double se = params.efficiency * std::log2(1.0 + db_to_linear(sinr_db));
    return std::min(se, params.max_bps_hz);
}

SnapshotResult uplink_snapshot(const Drop& drop, const PowerControlConfig& pc,
                               int snapshot_index, Rng& activity_rng,
                               const ThroughputParams& tput) {
    const int n_cells = static_cast<int>(drop.cells.size());
    const int m_rbs = drop.cfg.bandwidth_rbs;
    const double noise_dbm = thermal_noise_dbm(drop.cfg);
    const double noise_lin = db_to_linear(noise_dbm);

    // Activity draws happen for every cell, scheduled or not, to keep the
    // stream layout independent of the drop's attachment pattern.
    std::vector<char> active(static_cast<std::size_t>(n_cells), 1);
    for (int c = 0; c < n_cells; ++c) {
        const bool a = activity_rng.bernoulli(drop.cfg.activity_factor);
        active[static_cast<std::size_t>(c)] = a ? 1 : 0;
    }

    struct Tx {
        int ue_id;
        int cell_id;  // serving
        double power_dbm;
    };
    std::vector<Tx> transmitters;
    transmitters.reserve(static_cast<std::size_t>(n_cells));
    for (int c = 0; c < n_cells; ++c) {
        const auto& attached = drop.cell_ues[static_cast<std::size_t>(c)];
        if (attached.empty() || !active[static_cast<std::size_t>(c)]) continue;
        const int ue_id =
            attached[static_cast<std::size_t>(snapshot_index) % attached.size()];
        // Open-loop pathloss estimate: the downlink coupling loss to the
        // serving cell, as a UE would derive from filtered RSRP.
        const double pl = -drop.link(ue_id, c).coupling_gain_db;
        const double p =
            pusch_power_dbm(pc, drop.ues[static_cast<std::size_t>(ue_id)].kind, m_rbs, pl);
        transmitters.push_back({ue_id, c, p});
    }

    SnapshotResult result;
    result.iot.reserve(static_cast<std::size_t>(n_cells));

    std::vector<double> interference(static_cast<std::size_t>(n_cells), 0.0);
    for (int c = 0; c < n_cells; ++c) {
        double i_lin = 0.0;
        for (const Tx& tx : transmitters) {
            if (tx.cell_id == c) continue;
            i_lin += db_to_linear(tx.power_dbm + drop.link(tx.ue_id, c).coupling_gain_db);
        }
        interference[static_cast<std::size_t>(c)] = i_lin;
        result.iot.push_back(
            {c, drop.cell_serves_terrestrial(c), 10.0 * std::log10(1.0 + i_lin / noise_lin)});
    }

    result.ul.reserve(transmitters.size());
    for (const Tx& tx : transmitters) {
        const UEntity& ue = drop.ues[static_cast<std::size_t>(tx.ue_id)];
        const double signal_dbm =
            tx.power_dbm + drop.link(tx.ue_id, tx.cell_id).coupling_gain_db;
        const double sinr =
            signal_dbm -
            10.0 * std::log10(interference[static_cast<std::size_t>(tx.cell_id)] + noise_lin);
        result.ul.push_back(
            {tx.ue_id, ue.kind, ue.height_m, sinr, throughput_map(sinr, tput), tx.power_dbm});
    }
    return result;
}

std::vector<UeDlSample> downlink_geometry(const Drop& drop) {
    const double noise_lin = db_to_linear(thermal_noise_dbm(drop.cfg));
    std::vector<UeDlSample> out;
    out.reserve(drop.ues.size());
    for (const UEntity& ue : drop.ues) {
        const int s = drop.serving[static_cast<std::size_t>(ue.ue_id)];
        double denom = noise_lin;
        for (const Cell& cell : drop.cells) {
            if (cell.cell_id == s) continue;
            denom += db_to_linear(cell.tx_power_dbm +
                                  drop.link(ue.ue_id, cell.cell_id).coupling_gain_db);
        }
        const double serving_dbm = drop.cells[static_cast<std::size_t>(s)].tx_power_dbm +
                                   drop.link(ue.ue_id, s).coupling_gain_db;
        out.push_back(
            {ue.ue_id, ue.kind, ue.height_m, serving_dbm - 10.0 * std::log10(denom)});
    }
    return out;
}

MetricsCdf SettingResult::merged(const std::string& metric, const std::string& kind) const {
    std::vector<double> all;
    for (const MetricSamples& drop : per_drop) {
        auto mit = drop.find(metric);
        if (mit == drop.end()) continue;
        auto kit = mit->second.find(kind);
        if (kit == mit->second.end()) continue;
        all.insert(all.end(), kit->second.begin(), kit->second.end());
    }
    return MetricsCdf(std::move(all));
}

namespace {

void add_ue_sample(MetricSamples& ms, const std::string& metric, UeKind kind, double height_m,
                   double value) {
    auto& per_kind = ms[metric];
    per_kind["all"].push_back(value);
    if (kind == UeKind::aerial) {
        per_kind["aerial"].push_back(value);
        if (height_m >= 50.0) per_kind["aerial_above50m"].push_back(value);
    } else {
        per_kind["terrestrial"].push_back(value);
    }
}

MetricSamples run_one_drop(const ScenarioConfig& cfg, const PowerControlConfig& pc,
                           const ChannelModel& model, std::uint64_t drop_seed,
                           int n_snapshots, const ThroughputParams& tput) {
    const Drop drop = make_drop(cfg, model, drop_seed);

    MetricSamples ms;
    for (int snap = 0; snap < n_snapshots; ++snap) {
        Rng activity =
            Rng::derive(drop_seed, std::uint64_t{0xAC}, static_cast<std::uint64_t>(snap));
        const SnapshotResult sr = uplink_snapshot(drop, pc, snap, activity, tput);
        for (const CellIotSample& s : sr.iot) {
            ms["ul_iot"]["all_cells"].push_back(s.iot_db);
            if (s.serves_terrestrial) ms["ul_iot"]["terrestrial_cells"].push_back(s.iot_db);
        }
        for (const UeUlSample& s : sr.ul) {
            add_ue_sample(ms, "ul_sinr", s.kind, s.height_m, s.sinr_db);
            add_ue_sample(ms, "ul_throughput", s.kind, s.height_m, s.throughput_bps_hz);
        }
    }
    for (const UeDlSample& s : downlink_geometry(drop)) {
        add_ue_sample(ms, "dl_geometry", s.kind, s.height_m, s.geometry_db);
    }
    return ms;
}

}  // namespace

std::shared_ptr<ChannelModel> make_channel_model(const ScenarioConfig& cfg,
                                                 const ChannelOptions& opts) {
    DefaultChannelParams cp;
    cp.fixed_shadow_sigma_db = opts.shadow_sigma_override_db;
    auto base = std::make_shared<DefaultChannelModel>(cfg.kind, cfg.enb_height_m,
                                                      cfg.carrier_freq_ghz, cp);
    if (opts.los_table_csv.empty()) return base;
    return std::make_shared<TableLosChannelModel>(
        TableLosChannelModel::from_csv(base, opts.los_table_csv));
}

CampaignResult run_campaign(const ScenarioConfig& base, const PowerControlConfig& base_pc,
                            const std::vector<SweepSetting>& sweep, int n_drops,
                            int n_snapshots, std::uint64_t master_seed, int jobs,
                            const ThroughputParams& tput,
                            const ChannelOptions& channel_opts) {
    if (n_drops < 1) throw ConfigError("n_drops must be >= 1");
    if (n_snapshots < 1) throw ConfigError("n_snapshots must be >= 1");
    base.validate();
    base_pc.validate();
    for (const SweepSetting& s : sweep) {
        if (s.power.has_value()) s.power->validate();
        if (s.aerial_ratio.has_value() && (*s.aerial_ratio < 0.0 || *s.aerial_ratio > 1.0))
            throw ConfigError("sweep aerial_ratio must lie in [0, 1]");
    }

    CampaignResult result;
    result.settings.resize(sweep.size());
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        result.settings[i].label = sweep[i].label;
        result.settings[i].per_drop.resize(static_cast<std::size_t>(n_drops));
    }

    const std::size_t n_work = sweep.size() * static_cast<std::size_t>(n_drops);
    parallel_for(n_work, jobs, [&](std::size_t w) {
        const std::size_t setting_idx = w / static_cast<std::size_t>(n_drops);
        const int drop_idx = static_cast<int>(w % static_cast<std::size_t>(n_drops));

        ScenarioConfig cfg = base;
        PowerControlConfig pc = base_pc;
        const SweepSetting& setting = sweep[setting_idx];
        if (setting.aerial_ratio.has_value()) cfg.aerial_ratio = *setting.aerial_ratio;
        if (setting.power.has_value()) pc = *setting.power;

        const auto model = make_channel_model(cfg, channel_opts);

        // Seeded by drop index only: sweep settings share their drops.
        const std::uint64_t drop_seed =
            mix64(master_seed ^ mix64(static_cast<std::uint64_t>(drop_idx) + 1));
        result.settings[setting_idx].per_drop[static_cast<std::size_t>(drop_idx)] =
            run_one_drop(cfg, pc, *model, drop_seed, n_snapshots, tput);
    });
    return result;
}

}  // namespace skysim
