// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "skysim/config.hpp"

namespace skysim {

struct PresetInfo {
    std::string name;
    std::string description;
};

std::vector<PresetInfo> preset_list();
bool is_preset(const std::string& name);
CampaignSpec preset_spec(const std::string& name);

}  // namespace skysim
