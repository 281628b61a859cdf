// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "skysim/common.hpp"
#include "skysim/rng.hpp"

namespace skysim {

enum class ScenarioKind { uma_av, umi_av, rma_av };

const char* to_string(ScenarioKind k);
ScenarioKind scenario_kind_from_string(const std::string& s);

enum class UeKind { terrestrial_outdoor, terrestrial_indoor, aerial };

const char* to_string(UeKind k);

// Sector antenna: parabolic main lobe in both planes, clamped at the
// front-to-back ratio horizontally and the sidelobe floor vertically.
struct AntennaPattern {
    double horizontal_hpbw_deg = 65.0;
    double vertical_hpbw_deg = 10.0;
    double front_back_ratio_db = 30.0;  // Am
    double sidelobe_floor_db = 30.0;    // SLAv
    double max_gain_dbi = 15.0;
};

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::uma_av;
    double inter_site_distance_m = 500.0;
    double enb_height_m = 25.0;
    double carrier_freq_ghz = 2.0;
    int bandwidth_rbs = 50;
    int ues_per_cell = 15;
    double aerial_ratio = 0.0;
    double aerial_height_min_m = 1.5;
    double aerial_height_max_m = 300.0;
    int n_sites = 19;
    int sectors_per_site = 3;
    std::uint64_t rng_seed = 1;
    double noise_figure_db = 5.0;
    double thermal_noise_density_dbm_hz = -174.0;

    double enb_tx_power_dbm = 46.0;
    double downtilt_deg = 6.0;
    AntennaPattern antenna;
    double ue_antenna_gain_dbi = 0.0;
    double indoor_fraction = 0.8;       // of terrestrial UEs
    double penetration_loss_db = 20.0;  // indoor links
    double activity_factor = 1.0;       // per-cell transmit probability per snapshot
    // Shadow-fading correlation between sectors of one site (0 = independent).
    double shadow_sector_correlation = 0.0;

    // Fills ISD / eNB height / downtilt / tx power with the per-kind
    // defaults while keeping anything the caller already overrode.
    static ScenarioConfig preset(ScenarioKind kind);

    // Throws ConfigError on any invariant violation.
    void validate() const;
};

struct Cell {
    int cell_id = 0;
    Vec2 site_position;
    double antenna_bearing_deg = 0.0;  // boresight azimuth, CCW from +x
    double antenna_height_m = 25.0;
    double downtilt_deg = 6.0;
    double tx_power_dbm = 46.0;
};

struct UEntity {
    int ue_id = 0;
    UeKind kind = UeKind::terrestrial_outdoor;
    Vec2 position;
    double height_m = 1.5;
    Vec3 velocity_mps;
};

// Maps a point to its nearest image among the 7 mirror positions of a
// 19-site hex cluster. Layouts smaller than 19 sites get the identity map.
class Wraparound {
  public:
    Wraparound() = default;
    Wraparound(int n_sites, double isd_m);

    // Shortest displacement from -> to over all cluster images.
    Vec2 displacement(Vec2 from, Vec2 to) const;
    double distance(Vec2 from, Vec2 to) const { return displacement(from, to).norm(); }

    bool active() const { return active_; }
    const std::array<Vec2, 7>& offsets() const { return offsets_; }

  private:
    bool active_ = false;
    std::array<Vec2, 7> offsets_{};  // first entry is always (0,0)
};

// Hexagonal site grid with evenly spaced sector bearings. n_sites must be
// 1, 7 or 19.
std::vector<Cell> build_layout(const ScenarioConfig& cfg);

// Drops ues_per_cell UEs uniformly over each cell's area (site hexagon cut
// to the sector wedge). round(aerial_ratio * total) UEs, chosen by seeded
// shuffle, become aerial; the shuffle order is ratio-independent so the
// aerial set grows monotonically with the ratio.
std::vector<UEntity> drop_ues(const ScenarioConfig& cfg, const std::vector<Cell>& cells,
                              Rng& rng);

// Same, seeded from cfg.rng_seed.
std::vector<UEntity> drop_ues(const ScenarioConfig& cfg, const std::vector<Cell>& cells);

// Gain toward a target point, dB relative to isotropic.
double antenna_gain(const AntennaPattern& pattern, const Cell& cell, Vec3 target);

// Same, with the horizontal displacement already wrapped.
double antenna_gain_wrapped(const AntennaPattern& pattern, const Cell& cell,
                            Vec2 wrapped_displacement, double target_height_m);

// Number of aerial UEs for a drop; round-half-up keeps campaigns reproducible.
int aerial_count(double aerial_ratio, int total_ues);

}  // namespace skysim
