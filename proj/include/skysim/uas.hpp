// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "skysim/common.hpp"
#include "skysim/mobility.hpp"

namespace skysim {

enum class IdentificationPolicy { both_required, subscription_only, capability_only };

// Default policy requires both the subscription authorisation and the radio
// capability indication.
bool identify_aerial(bool subscription_authorized, bool capability_indicated,
                     IdentificationPolicy policy = IdentificationPolicy::both_required);

struct UeContext {
    int ue_id = 0;
    bool flight_path_available = false;
    bool subscription_aerial_authorized = false;
    bool radio_capability_aerial = false;
    bool identified_aerial = false;
};

enum class FlightPathMessageKind { availability_indication, request, report, no_info };

struct FlightPathMessage {
    FlightPathMessageKind kind = FlightPathMessageKind::no_info;
    bool available = false;                 // availability_indication payload
    std::optional<FlightPath> flight_path;  // report payload
};

// One UE's signalling session. The availability flag latches at connection
// setup; with suppression on, the network never queries a UE that indicated
// unavailability.
class FlightPathSession {
  public:
    explicit FlightPathSession(UeContext ue, bool suppress_when_unavailable = true);

    // Connection setup; emits the availability indication. Refreshing the
    // latched flag requires reconnecting.
    FlightPathMessage connect(bool flight_path_available,
                              std::optional<FlightPath> path = std::nullopt);
    void disconnect();
    bool connected() const { return connected_; }

    // Network-side query. Returns the UE's answer (Report or NoInfo), or
    // nullopt when suppression withheld the request. Throws ContractError
    // before connection setup.
    std::optional<FlightPathMessage> request_flight_path();

    const std::vector<FlightPathMessage>& log() const { return log_; }
    const UeContext& ue() const { return ue_; }

  private:
    UeContext ue_;
    bool suppress_when_unavailable_;
    bool connected_ = false;
    bool available_ = false;
    std::optional<FlightPath> path_;
    std::vector<FlightPathMessage> log_;
};

struct Region {
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;
};

struct TimeWindow {
    double begin_ms = 0.0;
    double end_ms = 0.0;
};

// Number of reported paths whose interpolated position enters the region
// during the window.
int paths_per_area(const std::vector<FlightPath>& reports, const Region& region,
                   const TimeWindow& window);

// Flight-path report log: ue_id,i,t_ms,x_m,y_m,z_m per waypoint.
std::string flight_path_log_csv(const std::vector<std::pair<int, FlightPath>>& reports);

}  // namespace skysim
