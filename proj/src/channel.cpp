// SPDX-License-Identifier: Apache-2.0

#include "skysim/channel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

namespace skysim {

namespace {
constexpr double kSpeedOfLight = 3.0e8;
}

HeightThresholds height_thresholds(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::uma_av: return {22.5, 100.0};
        case ScenarioKind::umi_av: return {22.5, std::nullopt};
        case ScenarioKind::rma_av: return {10.0, 40.0};
    }
    return {};
}

double free_space_pathloss_db(double d_3d_m, double fc_ghz) {
    return 32.45 + 20.0 * std::log10(d_3d_m) + 20.0 * std::log10(fc_ghz);
}

DefaultChannelModel::DefaultChannelModel(ScenarioKind kind, double enb_height_m,
                                         double carrier_freq_ghz, DefaultChannelParams params)
    : kind_(kind),
      enb_height_m_(enb_height_m),
      fc_ghz_(carrier_freq_ghz),
      params_(params),
      thresholds_(height_thresholds(kind)) {}

double DefaultChannelModel::ground_los_probability(double h_ut_m, double d_2d_m) const {
    switch (kind_) {
        case ScenarioKind::uma_av: {
            if (d_2d_m <= 18.0) return 1.0;
            const double base =
                18.0 / d_2d_m + std::exp(-d_2d_m / 63.0) * (1.0 - 18.0 / d_2d_m);
            double c = 0.0;
            if (h_ut_m > 13.0) {
                const double h = std::min(h_ut_m, 23.0);
                c = std::pow((h - 13.0) / 10.0, 1.5);
            }
            const double boost =
                1.0 + c * (5.0 / 4.0) * std::pow(d_2d_m / 100.0, 3.0) * std::exp(-d_2d_m / 150.0);
            return std::clamp(base * boost, 0.0, 1.0);
        }
        case ScenarioKind::umi_av: {
            if (d_2d_m <= 18.0) return 1.0;
            return 18.0 / d_2d_m + std::exp(-d_2d_m / 36.0) * (1.0 - 18.0 / d_2d_m);
        }
        case ScenarioKind::rma_av: {
            if (d_2d_m <= 10.0) return 1.0;
            return std::exp(-(d_2d_m - 10.0) / 1000.0);
        }
    }
    return 0.0;
}

double DefaultChannelModel::los_probability(double h_ut_m, double d_2d_m) const {
    const double lower = thresholds_.lower_m;
    if (!thresholds_.upper_m.has_value()) {
        // UMi-AV: the below-rooftop model applies at every height.
        return ground_los_probability(std::min(h_ut_m, lower), d_2d_m);
    }
    const double upper = *thresholds_.upper_m;
    if (h_ut_m >= upper) return 1.0;
    if (h_ut_m <= lower) return ground_los_probability(h_ut_m, d_2d_m);
    // Between thresholds: interpolate in log10(h) from the ground value at
    // the lower threshold up to certainty at the upper threshold.
    const double p_lower = ground_los_probability(lower, d_2d_m);
    const double t = (std::log10(h_ut_m) - std::log10(lower)) /
                     (std::log10(upper) - std::log10(lower));
    return p_lower + t * (1.0 - p_lower);
}

double DefaultChannelModel::breakpoint_distance(double h_ut_m) const {
    const double fc_hz = fc_ghz_ * 1e9;
    if (kind_ == ScenarioKind::rma_av) {
        return 2.0 * std::numbers::pi * enb_height_m_ * h_ut_m * fc_hz / kSpeedOfLight;
    }
    // Effective antenna heights with a 1 m environment height.
    const double hb = std::max(enb_height_m_ - 1.0, 0.0);
    const double hu = std::max(h_ut_m - 1.0, 0.0);
    return 4.0 * hb * hu * fc_hz / kSpeedOfLight;
}

double DefaultChannelModel::ground_pathloss_los(double h_ut_m, double d_3d_m) const {
    const double dbp = breakpoint_distance(h_ut_m);
    const double dh = enb_height_m_ - h_ut_m;
    const double d_2d = std::sqrt(std::max(d_3d_m * d_3d_m - dh * dh, 0.0));
    switch (kind_) {
        case ScenarioKind::uma_av: {
            if (d_2d <= dbp || dbp <= 0.0)
                return 28.0 + 22.0 * std::log10(d_3d_m) + 20.0 * std::log10(fc_ghz_);
            return 28.0 + 40.0 * std::log10(d_3d_m) + 20.0 * std::log10(fc_ghz_) -
                   9.0 * std::log10(dbp * dbp + dh * dh);
        }
        case ScenarioKind::umi_av: {
            if (d_2d <= dbp || dbp <= 0.0)
                return 32.4 + 21.0 * std::log10(d_3d_m) + 20.0 * std::log10(fc_ghz_);
            return 32.4 + 40.0 * std::log10(d_3d_m) + 20.0 * std::log10(fc_ghz_) -
                   9.5 * std::log10(dbp * dbp + dh * dh);
        }
        case ScenarioKind::rma_av: {
            const double h = params_.avg_building_height_m;
            auto pl1 = [&](double d) {
                return 20.0 * std::log10(40.0 * std::numbers::pi * d * fc_ghz_ / 3.0) +
                       std::min(0.03 * std::pow(h, 1.72), 10.0) * std::log10(d) -
                       std::min(0.044 * std::pow(h, 1.72), 14.77) +
                       0.002 * std::log10(h) * d;
            };
            if (d_2d <= dbp || dbp <= 0.0) return pl1(d_3d_m);
            return pl1(dbp) + 40.0 * std::log10(d_3d_m / dbp);
        }
    }
    return 0.0;
}

double DefaultChannelModel::ground_pathloss_nlos(double h_ut_m, double d_3d_m) const {
    switch (kind_) {
        case ScenarioKind::uma_av:
            return 13.54 + 39.08 * std::log10(d_3d_m) + 20.0 * std::log10(fc_ghz_) -
                   0.6 * (h_ut_m - 1.5);
        case ScenarioKind::umi_av:
            return 35.3 * std::log10(d_3d_m) + 22.4 + 21.3 * std::log10(fc_ghz_) -
                   0.3 * (h_ut_m - 1.5);
        case ScenarioKind::rma_av: {
            const double h = params_.avg_building_height_m;
            const double w = params_.avg_street_width_m;
            const double hbs = enb_height_m_;
            const double hut = std::clamp(h_ut_m, 1.0, 22.5);
            return 161.04 - 7.1 * std::log10(w) + 7.5 * std::log10(h) -
                   (24.37 - 3.7 * std::pow(h / hbs, 2.0)) * std::log10(hbs) +
                   (43.42 - 3.1 * std::log10(hbs)) * (std::log10(d_3d_m) - 3.0) +
                   20.0 * std::log10(fc_ghz_) -
                   (3.2 * std::pow(std::log10(11.75 * hut), 2.0) - 4.97);
        }
    }
    return 0.0;
}

double DefaultChannelModel::pathloss_los_db(double h_ut_m, double d_3d_m) const {
    if (d_3d_m < 1.0) throw DomainError("pathloss: d_3d below 1 m model validity");
    double pl;
    if (h_ut_m <= thresholds_.lower_m) {
        pl = ground_pathloss_los(h_ut_m, d_3d_m);
    } else {
        // High-altitude LOS: free-space slope with the urban LOS intercept.
        pl = 28.0 + 22.0 * std::log10(d_3d_m) + 20.0 * std::log10(fc_ghz_);
    }
    return std::max(pl, free_space_pathloss_db(d_3d_m, fc_ghz_));
}

double DefaultChannelModel::pathloss_nlos_db(double h_ut_m, double d_3d_m) const {
    if (d_3d_m < 1.0) throw DomainError("pathloss: d_3d below 1 m model validity");
    // Above the lower threshold the ground NLOS expression is evaluated at
    // altitude and floored by the aerial LOS curve via the max below.
    const double los = pathloss_los_db(h_ut_m, d_3d_m);
    return std::max(ground_pathloss_nlos(h_ut_m, d_3d_m), los);
}

double DefaultChannelModel::shadow_sigma_db(bool is_los, double h_ut_m, double d_2d_m) const {
    if (params_.fixed_shadow_sigma_db.has_value()) return *params_.fixed_shadow_sigma_db;
    if (h_ut_m > thresholds_.lower_m) {
        if (is_los) return std::max(5.0 * std::exp(-0.01 * h_ut_m), 2.0);
        return params_.nlos_sigma_aerial_db;
    }
    switch (kind_) {
        case ScenarioKind::uma_av: return is_los ? 4.0 : 6.0;
        case ScenarioKind::umi_av: return is_los ? 4.0 : 7.82;
        case ScenarioKind::rma_av:
            if (!is_los) return 8.0;
            return d_2d_m <= breakpoint_distance(h_ut_m) ? 4.0 : 6.0;
    }
    return 8.0;
}

TableLosChannelModel::TableLosChannelModel(std::shared_ptr<ChannelModel> base,
                                           std::vector<double> heights,
                                           std::vector<double> distances,
                                           std::vector<double> p_los)
    : base_(std::move(base)),
      heights_(std::move(heights)),
      distances_(std::move(distances)),
      p_(std::move(p_los)) {
    if (heights_.size() < 2 || distances_.size() < 2)
        throw ConfigError("LOS table needs at least a 2x2 grid");
    if (p_.size() != heights_.size() * distances_.size())
        throw ConfigError("LOS table size does not match its axes");
    if (!std::is_sorted(heights_.begin(), heights_.end()) ||
        !std::is_sorted(distances_.begin(), distances_.end()))
        throw ConfigError("LOS table axes must be ascending");
}

TableLosChannelModel TableLosChannelModel::from_csv(std::shared_ptr<ChannelModel> base,
                                                    const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) throw ConfigError("cannot open LOS table '" + csv_path + "'");
    std::vector<std::array<double, 3>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::array<double, 3> row{};
        char comma;
        if (!(ls >> row[0])) continue;  // header line
        ls >> comma >> row[1] >> comma >> row[2];
        rows.push_back(row);
    }
    std::vector<double> hs, ds;
    for (auto& r : rows) {
        if (std::find(hs.begin(), hs.end(), r[0]) == hs.end()) hs.push_back(r[0]);
        if (std::find(ds.begin(), ds.end(), r[1]) == ds.end()) ds.push_back(r[1]);
    }
    std::sort(hs.begin(), hs.end());
    std::sort(ds.begin(), ds.end());
    std::vector<double> p(hs.size() * ds.size(), -1.0);
    for (auto& r : rows) {
        const auto hi = std::lower_bound(hs.begin(), hs.end(), r[0]) - hs.begin();
        const auto di = std::lower_bound(ds.begin(), ds.end(), r[1]) - ds.begin();
        p[static_cast<std::size_t>(hi) * ds.size() + static_cast<std::size_t>(di)] = r[2];
    }
    if (std::find(p.begin(), p.end(), -1.0) != p.end())
        throw ConfigError("LOS table '" + csv_path + "' is not a complete grid");
    return TableLosChannelModel(std::move(base), std::move(hs), std::move(ds), std::move(p));
}

double TableLosChannelModel::los_probability(double h_ut_m, double d_2d_m) const {
    auto bracket = [](const std::vector<double>& axis, double v, std::size_t& lo, double& t) {
        if (v <= axis.front()) {
            lo = 0;
            t = 0.0;
        } else if (v >= axis.back()) {
            lo = axis.size() - 2;
            t = 1.0;
        } else {
            lo = static_cast<std::size_t>(
                     std::upper_bound(axis.begin(), axis.end(), v) - axis.begin()) -
                 1;
            t = (v - axis[lo]) / (axis[lo + 1] - axis[lo]);
        }
    };
    std::size_t hi, di;
    double th, td;
    bracket(heights_, h_ut_m, hi, th);
    bracket(distances_, d_2d_m, di, td);
    const std::size_t n = distances_.size();
    const double p00 = p_[hi * n + di];
    const double p01 = p_[hi * n + di + 1];
    const double p10 = p_[(hi + 1) * n + di];
    const double p11 = p_[(hi + 1) * n + di + 1];
    const double p = (1 - th) * ((1 - td) * p00 + td * p01) + th * ((1 - td) * p10 + td * p11);
    return std::clamp(p, 0.0, 1.0);
}

bool sample_los(double p, Rng& rng) {
    if (p < 0.0 || p > 1.0) throw DomainError("sample_los: probability outside [0,1]");
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return rng.bernoulli(p);
}

double shadow_sample(const ChannelModel& model, bool is_los, double h_ut_m, double d_2d_m,
                     Rng& rng) {
    const double sigma = model.shadow_sigma_db(is_los, h_ut_m, d_2d_m);
    if (sigma <= 0.0) {
        rng.normal();  // keep the draw sequence identical either way
        return 0.0;
    }
    return rng.normal(0.0, sigma);
}

LinkState compute_link(const ScenarioConfig& cfg, const ChannelModel& model,
                       const Wraparound& wrap, const Cell& cell, const UEntity& ue,
                       std::uint64_t link_seed) {
    const Vec2 d = wrap.displacement(cell.site_position, ue.position);
    const double d_2d = d.norm();
    const double dh = ue.height_m - cell.antenna_height_m;
    const double d_3d = std::max(std::sqrt(d_2d * d_2d + dh * dh), 1.0);

    Rng link_rng = Rng::derive(link_seed, static_cast<std::uint64_t>(ue.ue_id),
                               static_cast<std::uint64_t>(cell.cell_id));

    LinkState link;
    link.ue_id = ue.ue_id;
    link.cell_id = cell.cell_id;
    link.is_los = sample_los(model.los_probability(ue.height_m, d_2d), link_rng);
    link.pathloss_db = link.is_los ? model.pathloss_los_db(ue.height_m, d_3d)
                                   : model.pathloss_nlos_db(ue.height_m, d_3d);
    if (ue.kind == UeKind::terrestrial_indoor) link.pathloss_db += cfg.penetration_loss_db;
    link.shadow_db = shadow_sample(model, link.is_los, ue.height_m, d_2d, link_rng);
    if (cfg.shadow_sector_correlation > 0.0) {
        // Mix in a per-(UE, site) component: corr(sectors of one site) = rho.
        const double rho = cfg.shadow_sector_correlation;
        const int site = cell.cell_id / cfg.sectors_per_site;
        Rng site_rng = Rng::derive(link_seed, std::uint64_t{0x517E},
                                   static_cast<std::uint64_t>(ue.ue_id),
                                   static_cast<std::uint64_t>(site));
        const double sigma = model.shadow_sigma_db(link.is_los, ue.height_m, d_2d);
        link.shadow_db = std::sqrt(rho) * sigma * site_rng.normal() +
                         std::sqrt(1.0 - rho) * link.shadow_db;
    }
    link.antenna_gain_db =
        antenna_gain_wrapped(cfg.antenna, cell, d, ue.height_m);
    link.ue_gain_db = cfg.ue_antenna_gain_dbi;
    link.coupling_gain_db =
        -link.pathloss_db - link.shadow_db + link.antenna_gain_db + link.ue_gain_db;
    return link;
}

std::vector<LinkState> compute_links(const ScenarioConfig& cfg, const ChannelModel& model,
                                     const Wraparound& wrap, const std::vector<Cell>& cells,
                                     const std::vector<UEntity>& ues,
                                     std::uint64_t drop_seed) {
    std::vector<LinkState> links;
    links.reserve(ues.size() * cells.size());
    for (const UEntity& ue : ues) {
        for (const Cell& cell : cells) {
            links.push_back(compute_link(cfg, model, wrap, cell, ue, drop_seed));
        }
    }
    return links;
}

}  // namespace skysim
