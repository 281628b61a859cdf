// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>

#include "skysim/common.hpp"
#include "skysim/scenario.hpp"

namespace skysim {

// Allowed fractional pathloss compensation values.
bool is_valid_alpha(double alpha);

enum class P0Range { legacy_compatible, extended };

// Accepts integers in [-16, +15] dB and reports whether the value needed
// the extended range; throws ConfigError outside it.
P0Range validate_p0_ue(int p0_ue_specific_db);

struct PowerClass {
    double alpha = 1.0;
    int p0_ue_specific_db = 0;
};

struct PowerControlConfig {
    double p0_nominal_dbm = -96.0;  // per resource block
    int p0_ue_specific_db = 0;
    double alpha = 0.8;
    double p_cmax_dbm = 23.0;
    double min_power_dbm = -100.0;
    double tpc_step_db = 1.0;
    // Per-UE-kind overrides of (alpha, p0_ue_specific); kinds without an
    // entry use the top-level values. Both terrestrial kinds share the
    // "terrestrial" row.
    std::map<UeKind, PowerClass> classes;

    PowerClass effective_class(UeKind kind) const;
    void validate() const;
};

struct TpcState {
    double accumulated_offset_db = 0.0;
};

enum class TpcCommand { up, down, hold };

TpcState apply_tpc(TpcState state, TpcCommand command, double step_db);

// Open-loop + accumulated closed-loop PUSCH power for a grant of m_rbs
// resource blocks, clamped to [min_power, p_cmax].
double pusch_power_dbm(const PowerControlConfig& cfg, UeKind kind, int m_rbs,
                       double pathloss_db, double tpc_offset_db = 0.0);

}  // namespace skysim
