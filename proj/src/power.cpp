// SPDX-License-Identifier: Apache-2.0

#include "skysim/power.hpp"

#include <algorithm>
#include <cmath>

namespace skysim {

bool is_valid_alpha(double alpha) {
    static constexpr double kAllowed[] = {0.0, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    for (double a : kAllowed) {
        if (std::abs(alpha - a) < 1e-12) return true;
    }
    return false;
}

P0Range validate_p0_ue(int p0_ue_specific_db) {
    if (p0_ue_specific_db < -16 || p0_ue_specific_db > 15) {
        throw ConfigError("p0_ue_specific_db " + std::to_string(p0_ue_specific_db) +
                          " outside the legal range [-16, +15] dB");
    }
    if (p0_ue_specific_db < -8 || p0_ue_specific_db > 7) return P0Range::extended;
    return P0Range::legacy_compatible;
}

PowerClass PowerControlConfig::effective_class(UeKind kind) const {
    const UeKind key = (kind == UeKind::aerial) ? UeKind::aerial : UeKind::terrestrial_outdoor;
    if (auto it = classes.find(key); it != classes.end()) return it->second;
    return PowerClass{alpha, p0_ue_specific_db};
}

void PowerControlConfig::validate() const {
    if (!is_valid_alpha(alpha))
        throw ConfigError("alpha must be one of {0, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}");
    validate_p0_ue(p0_ue_specific_db);
    if (tpc_step_db <= 0.0) throw ConfigError("tpc_step_db must be positive");
    if (min_power_dbm >= p_cmax_dbm)
        throw ConfigError("min_power_dbm must be below p_cmax_dbm");
    for (const auto& [kind, cls] : classes) {
        (void)kind;
        if (!is_valid_alpha(cls.alpha))
            throw ConfigError("class alpha must be one of {0, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}");
        validate_p0_ue(cls.p0_ue_specific_db);
    }
}

TpcState apply_tpc(TpcState state, TpcCommand command, double step_db) {
    if (step_db <= 0.0) throw ConfigError("TPC step must be positive");
    switch (command) {
        case TpcCommand::up: state.accumulated_offset_db += step_db; break;
        case TpcCommand::down: state.accumulated_offset_db -= step_db; break;
        case TpcCommand::hold: break;
    }
    return state;
}

double pusch_power_dbm(const PowerControlConfig& cfg, UeKind kind, int m_rbs,
                       double pathloss_db, double tpc_offset_db) {
    if (m_rbs < 1) throw DomainError("pusch_power: grant must span at least one RB");
    const PowerClass cls = cfg.effective_class(kind);
    const double p = 10.0 * std::log10(static_cast<double>(m_rbs)) + cfg.p0_nominal_dbm +
                     cls.p0_ue_specific_db + cls.alpha * pathloss_db + tpc_offset_db;
    return std::clamp(p, cfg.min_power_dbm, cfg.p_cmax_dbm);
}

}  // namespace skysim
