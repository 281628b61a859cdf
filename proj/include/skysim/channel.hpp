// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "skysim/common.hpp"
#include "skysim/rng.hpp"
#include "skysim/scenario.hpp"

namespace skysim {

struct HeightThresholds {
    double lower_m = 22.5;
    std::optional<double> upper_m = 100.0;
};

// Scenario-fixed thresholds separating ground / intermediate / high regions.
HeightThresholds height_thresholds(ScenarioKind kind);

struct LinkState {
    int ue_id = 0;
    int cell_id = 0;
    bool is_los = false;
    double pathloss_db = 0.0;  // includes penetration loss on indoor links
    double shadow_db = 0.0;
    double antenna_gain_db = 0.0;  // eNB side
    double ue_gain_db = 0.0;
    double coupling_gain_db = 0.0;  // -pathloss - shadow + antenna_gain + ue_gain
};

// Propagation model interface. The defaults below implement the published
// ground-level urban/rural formulas plus a height-interpolated LOS model and
// a free-space-like high-altitude pathloss; alternate coefficient sets can
// be slotted in behind the same four functions.
class ChannelModel {
  public:
    virtual ~ChannelModel() = default;

    virtual double los_probability(double h_ut_m, double d_2d_m) const = 0;
    virtual double pathloss_los_db(double h_ut_m, double d_3d_m) const = 0;
    virtual double pathloss_nlos_db(double h_ut_m, double d_3d_m) const = 0;
    virtual double shadow_sigma_db(bool is_los, double h_ut_m, double d_2d_m) const = 0;
};

struct DefaultChannelParams {
    // Aerial-region shadow defaults; LOS sigma decays with height.
    double nlos_sigma_aerial_db = 6.0;
    // When set, every link uses this sigma (0 disables shadowing).
    std::optional<double> fixed_shadow_sigma_db;
    // RMa clutter geometry for the ground model.
    double avg_building_height_m = 5.0;
    double avg_street_width_m = 20.0;
};

class DefaultChannelModel : public ChannelModel {
  public:
    DefaultChannelModel(ScenarioKind kind, double enb_height_m, double carrier_freq_ghz,
                        DefaultChannelParams params = {});

    double los_probability(double h_ut_m, double d_2d_m) const override;
    double pathloss_los_db(double h_ut_m, double d_3d_m) const override;
    double pathloss_nlos_db(double h_ut_m, double d_3d_m) const override;
    double shadow_sigma_db(bool is_los, double h_ut_m, double d_2d_m) const override;

    ScenarioKind kind() const { return kind_; }
    const HeightThresholds& thresholds() const { return thresholds_; }

  private:
    double ground_los_probability(double h_ut_m, double d_2d_m) const;
    double ground_pathloss_los(double h_ut_m, double d_3d_m) const;
    double ground_pathloss_nlos(double h_ut_m, double d_3d_m) const;
    double breakpoint_distance(double h_ut_m) const;

    ScenarioKind kind_;
    double enb_height_m_;
    double fc_ghz_;
    DefaultChannelParams params_;
    HeightThresholds thresholds_;
};

// LOS-probability override loaded from a (h_ut, d_2d, p_los) grid; bilinear
// interpolation inside the grid, clamped at its edges. Pathloss and
// shadowing fall through to the wrapped model.
class TableLosChannelModel : public ChannelModel {
  public:
    TableLosChannelModel(std::shared_ptr<ChannelModel> base, std::vector<double> heights,
                         std::vector<double> distances, std::vector<double> p_los);

    static TableLosChannelModel from_csv(std::shared_ptr<ChannelModel> base,
                                         const std::string& csv_path);

    double los_probability(double h_ut_m, double d_2d_m) const override;
    double pathloss_los_db(double h_ut_m, double d_3d_m) const override {
        return base_->pathloss_los_db(h_ut_m, d_3d_m);
    }
    double pathloss_nlos_db(double h_ut_m, double d_3d_m) const override {
        return base_->pathloss_nlos_db(h_ut_m, d_3d_m);
    }
    double shadow_sigma_db(bool is_los, double h_ut_m, double d_2d_m) const override {
        return base_->shadow_sigma_db(is_los, h_ut_m, d_2d_m);
    }

  private:
    std::shared_ptr<ChannelModel> base_;
    std::vector<double> heights_;    // ascending
    std::vector<double> distances_;  // ascending
    std::vector<double> p_;          // row-major [height][distance]
};

double free_space_pathloss_db(double d_3d_m, double fc_ghz);

// Bernoulli LOS draw; deterministic per (seed, ue_id, cell_id) when the
// caller derives the stream that way.
bool sample_los(double p, Rng& rng);

// Zero-mean Gaussian shadow sample with model sigma.
double shadow_sample(const ChannelModel& model, bool is_los, double h_ut_m, double d_2d_m,
                     Rng& rng);

// Assembles one UE-cell link. The LOS flag and shadow draw come from a
// substream keyed by (seed, ue_id, cell_id), so links can be generated in
// any order.
LinkState compute_link(const ScenarioConfig& cfg, const ChannelModel& model,
                       const Wraparound& wrap, const Cell& cell, const UEntity& ue,
                       std::uint64_t link_seed);

// Full drop: one LinkState per (UE, cell), row-major by UE.
std::vector<LinkState> compute_links(const ScenarioConfig& cfg, const ChannelModel& model,
                                     const Wraparound& wrap, const std::vector<Cell>& cells,
                                     const std::vector<UEntity>& ues,
                                     std::uint64_t drop_seed);

}  // namespace skysim
