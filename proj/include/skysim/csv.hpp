// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <string>

namespace skysim {

// Fixed CSV number format: '.' decimal separator, up to 9 significant
// digits, no locale influence. Golden-file tests byte-compare outputs, so
// every emitted double goes through here.
inline std::string csv_num(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

inline std::string csv_num(long long v) { return std::to_string(v); }
inline std::string csv_num(int v) { return std::to_string(v); }
inline std::string csv_num(std::size_t v) { return std::to_string(v); }

}  // namespace skysim
