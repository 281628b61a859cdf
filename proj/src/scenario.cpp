// SPDX-License-Identifier: Apache-2.0

#include "skysim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace skysim {

const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::uma_av: return "UMa-AV";
        case ScenarioKind::umi_av: return "UMi-AV";
        case ScenarioKind::rma_av: return "RMa-AV";
    }
    return "?";
}

ScenarioKind scenario_kind_from_string(const std::string& s) {
    if (s == "UMa-AV") return ScenarioKind::uma_av;
    if (s == "UMi-AV") return ScenarioKind::umi_av;
    if (s == "RMa-AV") return ScenarioKind::rma_av;
    throw ConfigError("unknown scenario kind '" + s + "' (expected UMa-AV, UMi-AV or RMa-AV)");
}

const char* to_string(UeKind k) {
    switch (k) {
        case UeKind::terrestrial_outdoor: return "terrestrial_outdoor";
        case UeKind::terrestrial_indoor: return "terrestrial_indoor";
        case UeKind::aerial: return "aerial";
    }
    return "?";
}

ScenarioConfig ScenarioConfig::preset(ScenarioKind kind) {
    ScenarioConfig cfg;
    cfg.kind = kind;
    switch (kind) {
        case ScenarioKind::uma_av:
            cfg.inter_site_distance_m = 500.0;
            cfg.enb_height_m = 25.0;
            cfg.downtilt_deg = 6.0;
            cfg.enb_tx_power_dbm = 46.0;
            break;
        case ScenarioKind::umi_av:
            cfg.inter_site_distance_m = 200.0;
            cfg.enb_height_m = 10.0;
            cfg.downtilt_deg = 10.0;
            cfg.enb_tx_power_dbm = 38.0;
            break;
        case ScenarioKind::rma_av:
            cfg.inter_site_distance_m = 1732.0;
            cfg.enb_height_m = 35.0;
            cfg.downtilt_deg = 6.0;
            cfg.enb_tx_power_dbm = 46.0;
            break;
    }
    return cfg;
}

void ScenarioConfig::validate() const {
    if (n_sites != 1 && n_sites != 7 && n_sites != 19)
        throw ConfigError("n_sites must be 1, 7 or 19 (got " + std::to_string(n_sites) + ")");
    if (sectors_per_site < 1)
        throw ConfigError("sectors_per_site must be >= 1");
    if (inter_site_distance_m <= 0.0)
        throw ConfigError("inter_site_distance_m must be positive");
    if (ues_per_cell < 1)
        throw ConfigError("ues_per_cell must be >= 1");
    if (aerial_ratio < 0.0 || aerial_ratio > 1.0)
        throw ConfigError("aerial_ratio must lie in [0, 1]");
    if (aerial_height_min_m < 1.5)
        throw ConfigError("aerial_height_min_m must be >= 1.5 m");
    if (aerial_height_max_m > 300.0)
        throw ConfigError("aerial_height_max_m must be <= 300 m");
    if (aerial_height_min_m > aerial_height_max_m)
        throw ConfigError("aerial height range: min must be <= max");
    if (bandwidth_rbs < 1)
        throw ConfigError("bandwidth_rbs must be >= 1");
    if (carrier_freq_ghz <= 0.0)
        throw ConfigError("carrier_freq_ghz must be positive");
    if (indoor_fraction < 0.0 || indoor_fraction > 1.0)
        throw ConfigError("indoor_fraction must lie in [0, 1]");
    if (activity_factor <= 0.0 || activity_factor > 1.0)
        throw ConfigError("activity_factor must lie in (0, 1]");
    if (shadow_sector_correlation < 0.0 || shadow_sector_correlation > 1.0)
        throw ConfigError("shadow_sector_correlation must lie in [0, 1]");
}

namespace {

// Triangular-lattice basis: a1 along +x, a2 at 60 degrees.
Vec2 lattice(double isd, double i, double j) {
    return {isd * (i + 0.5 * j), isd * (std::sqrt(3.0) / 2.0 * j)};
}

std::vector<Vec2> site_positions(int n_sites, double isd) {
    std::vector<Vec2> sites;
    sites.push_back({0.0, 0.0});
    if (n_sites >= 7) {
        // ring 1
        const int ring1[6][2] = {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}};
        for (auto& ij : ring1) sites.push_back(lattice(isd, ij[0], ij[1]));
    }
    if (n_sites == 19) {
        // ring 2
        const int ring2[12][2] = {{2, 0}, {1, 1},  {0, 2},  {-1, 2}, {-2, 2}, {-2, 1},
                                  {-2, 0}, {-1, -1}, {0, -2}, {1, -2}, {2, -2}, {2, -1}};
        for (auto& ij : ring2) sites.push_back(lattice(isd, ij[0], ij[1]));
    }
    return sites;
}

}  // namespace

Wraparound::Wraparound(int n_sites, double isd_m) {
    offsets_.fill({0.0, 0.0});
    if (n_sites != 19) return;
    active_ = true;
    // Cluster translation lattice for the 19-site hexagon: generator
    // (i,j) = (3,2) in site-lattice coordinates and its 60-degree rotations.
    const Vec2 c1 = lattice(isd_m, 3, 2);
    const Vec2 c2 = lattice(isd_m, -2, 5);
    offsets_ = {Vec2{0.0, 0.0}, c1,          c2,
                c2 - c1,        c1 * -1.0,   c2 * -1.0,
                (c2 - c1) * -1.0};
}

Vec2 Wraparound::displacement(Vec2 from, Vec2 to) const {
    Vec2 direct = to - from;
    if (!active_) return direct;
    Vec2 best = direct;
    double best_norm = direct.norm();
    for (const Vec2& off : offsets_) {
        const Vec2 cand = direct + off;
        const double n = cand.norm();
        if (n < best_norm) {
            best_norm = n;
            best = cand;
        }
    }
    return best;
}

std::vector<Cell> build_layout(const ScenarioConfig& cfg) {
    cfg.validate();
    const auto sites = site_positions(cfg.n_sites, cfg.inter_site_distance_m);
    std::vector<Cell> cells;
    cells.reserve(sites.size() * static_cast<std::size_t>(cfg.sectors_per_site));
    int id = 0;
    for (const Vec2& site : sites) {
        for (int s = 0; s < cfg.sectors_per_site; ++s) {
            Cell c;
            c.cell_id = id++;
            c.site_position = site;
            c.antenna_bearing_deg = 360.0 * s / cfg.sectors_per_site;
            c.antenna_height_m = cfg.enb_height_m;
            c.downtilt_deg = cfg.downtilt_deg;
            c.tx_power_dbm = cfg.enb_tx_power_dbm;
            cells.push_back(c);
        }
    }
    return cells;
}

int aerial_count(double aerial_ratio, int total_ues) {
    return static_cast<int>(std::floor(aerial_ratio * total_ues + 0.5));
}

namespace {

// Site hexagon = Voronoi cell of the triangular lattice: flat-to-flat
// width ISD, faces perpendicular to the 0/60/120-degree axes.
bool in_site_hexagon(Vec2 p, double isd) {
    const double half = isd / 2.0;
    const double c60 = 0.5;
    const double s60 = std::sqrt(3.0) / 2.0;
    if (std::abs(p.x) > half) return false;
    if (std::abs(p.x * c60 + p.y * s60) > half) return false;
    if (std::abs(-p.x * c60 + p.y * s60) > half) return false;
    return true;
}

Vec2 sample_in_sector(const Cell& cell, double isd, int sectors, Rng& rng) {
    const double circumradius = isd / std::sqrt(3.0);
    const double half_wedge = 180.0 / sectors;
    for (;;) {
        Vec2 p{rng.uniform(-circumradius, circumradius),
               rng.uniform(-circumradius, circumradius)};
        if (!in_site_hexagon(p, isd)) continue;
        const double az = rad_to_deg(std::atan2(p.y, p.x));
        if (std::abs(wrap_deg(az - cell.antenna_bearing_deg)) >= half_wedge) continue;
        return cell.site_position + p;
    }
}

}  // namespace

std::vector<UEntity> drop_ues(const ScenarioConfig& cfg, const std::vector<Cell>& cells,
                              Rng& rng) {
    if (cells.empty()) throw ConfigError("drop_ues: cell list is empty");

    const int total = cfg.ues_per_cell * static_cast<int>(cells.size());
    std::vector<UEntity> ues(static_cast<std::size_t>(total));

    for (int i = 0; i < total; ++i) {
        const auto& cell = cells[static_cast<std::size_t>(i) % cells.size()];
        ues[i].ue_id = i;
        ues[i].position =
            sample_in_sector(cell, cfg.inter_site_distance_m, cfg.sectors_per_site, rng);
    }

    // Kind assignment: shuffle once, take the prefix as aerial. Because the
    // order does not depend on aerial_ratio, sweeping the ratio only grows
    // the aerial set, which keeps sweep points comparable under common seeds.
    std::vector<int> order(static_cast<std::size_t>(total));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    const int n_aerial = aerial_count(cfg.aerial_ratio, total);
    const int n_terrestrial = total - n_aerial;
    const int n_indoor =
        static_cast<int>(std::floor(cfg.indoor_fraction * n_terrestrial + 0.5));

    for (int rank = 0; rank < total; ++rank) {
        UEntity& ue = ues[static_cast<std::size_t>(order[rank])];
        if (rank < n_aerial) {
            ue.kind = UeKind::aerial;
            ue.height_m = rng.uniform(cfg.aerial_height_min_m, cfg.aerial_height_max_m);
        } else if (rank < n_aerial + n_indoor) {
            ue.kind = UeKind::terrestrial_indoor;
            // floors at 3 m spacing: 1.5, 4.5, ..., 22.5
            ue.height_m = 1.5 + 3.0 * static_cast<double>(rng.uniform_int(8));
        } else {
            ue.kind = UeKind::terrestrial_outdoor;
            ue.height_m = 1.5;
        }
    }
    return ues;
}

std::vector<UEntity> drop_ues(const ScenarioConfig& cfg, const std::vector<Cell>& cells) {
    Rng rng(cfg.rng_seed);
    return drop_ues(cfg, cells, rng);
}

double antenna_gain_wrapped(const AntennaPattern& pattern, const Cell& cell,
                            Vec2 wrapped_displacement, double target_height_m) {
    const Vec2 d = wrapped_displacement;
    const double horiz = d.norm();

    // Azimuth deviation from boresight; degenerate overhead geometry counts
    // as on-boresight horizontally.
    double az_dev = 0.0;
    if (horiz > 1e-12) {
        const double az = rad_to_deg(std::atan2(d.y, d.x));
        az_dev = wrap_deg(az - cell.antenna_bearing_deg);
    }

    // Depression angle, positive toward the ground, so the boresight sits
    // at exactly downtilt_deg.
    const double depression =
        rad_to_deg(std::atan2(cell.antenna_height_m - target_height_m, horiz));

    const double am = pattern.front_back_ratio_db;
    const double slav = pattern.sidelobe_floor_db;
    const double ah =
        -std::min(12.0 * std::pow(az_dev / pattern.horizontal_hpbw_deg, 2.0), am);
    const double av = -std::min(
        12.0 * std::pow((depression - cell.downtilt_deg) / pattern.vertical_hpbw_deg, 2.0),
        slav);
    return pattern.max_gain_dbi - std::min(-(ah + av), am);
}

double antenna_gain(const AntennaPattern& pattern, const Cell& cell, Vec3 target) {
    return antenna_gain_wrapped(pattern, cell, target.xy() - cell.site_position, target.z);
}

}  // namespace skysim
