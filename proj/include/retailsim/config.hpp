#pragma once

#include "retailsim/types.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace retailsim {

// Opening hours, expected footfall, and staffing demand for one weekday.
// Times are minutes after midnight; footfall entries are expected arrivals
// per hour for consecutive one-hour slices from opening (the last slice may
// be shorter and is scaled pro rata when arrivals are generated).
struct DaySchedule {
    bool open = false;
    double open_minute = 0.0;
    double close_minute = 0.0;
    std::vector<double> hourly_footfall;
    std::array<int, kDedicatedRoleCount> staff_required{};

    double duration() const { return close_minute - open_minute; }
    bool operator==(const DaySchedule&) const = default;
};

struct Calendar {
    Weekday start_day = Weekday::Sunday;
    std::array<DaySchedule, 7> days{}; // indexed by Weekday

    bool operator==(const Calendar&) const = default;
};

// Word-of-mouth feedback: net satisfied customers yesterday recruit
// (or deter) extra arrivals today.
struct WomConfig {
    double adoption_fraction = 0.0;
    double contact_rate = 1.0;
    bool operator==(const WomConfig&) const = default;
};

// Base probabilities for customer decision points, before per-type correction.
struct DecisionTable {
    double purchase_after_browse = 0.37;
    double requires_help = 0.38;
    double purchase_after_help = 0.56;
    double expert_help = 0.25;
    double refund_granted = 0.90;
    double reshop_after_refund = 0.50;
    bool operator==(const DecisionTable&) const = default;
};

// Triangular duration distributions (minutes), before per-type correction.
struct DelayTable {
    TriangularParams browse{1.0, 7.0, 15.0};
    TriangularParams help{3.0, 15.0, 30.0};
    TriangularParams pay{1.0, 3.0, 6.0};
    TriangularParams refund{2.0, 5.0, 10.0};
    TriangularParams pay_patience{5.0, 12.0, 20.0};
    TriangularParams help_patience{5.0, 12.0, 20.0};
    TriangularParams refund_patience{5.0, 12.0, 20.0};
    bool operator==(const DelayTable&) const = default;
};

// Satisfaction weight per scored transition, indexed by TransitionKind.
struct WeightTable {
    std::array<int, kTransitionKindCount> weight{2, 2, -2, 1, -1, 1, 0};

    int of(TransitionKind k) const { return weight[static_cast<int>(k)]; }
    bool operator==(const WeightTable&) const = default;
};

enum class PickPolicyKind : int { Uniform = 0, TypeQuota, SatisfactionBiased };

struct PickPolicy {
    PickPolicyKind kind = PickPolicyKind::Uniform;
    // Only read for TypeQuota: target share per customer type.
    std::array<double, kCustomerTypeCount> quota{};
    bool operator==(const PickPolicy&) const = default;
};

// Staff pool sizing. With auto sizing the full-time pool per dedicated role
// is the weekly maximum requirement for that role, and the part-time pool is
// the largest single-day staffing gap left after full-timers are counted.
struct StaffingPlan {
    bool explicit_sizing = false;
    std::array<int, kDedicatedRoleCount> full_time{};
    int part_time = 0;
    bool operator==(const StaffingPlan&) const = default;
};

struct ScenarioConfig {
    std::string department_name = "department";
    int pool_size = 1000;
    std::uint64_t seed = 1;
    SimMode mode = SimMode::Normal;
    int neutral_band = 0;
    double refund_goal_probability = 0.05;
    std::array<double, kCustomerTypeCount> type_split{0.2, 0.2, 0.2, 0.2, 0.2};
    std::array<TypeProfile, kCustomerTypeCount> type_profiles;
    DecisionTable decisions;
    DelayTable delays;
    WeightTable weights;
    PickPolicy pick_policy;
    StaffingPlan staffing;
    WomConfig wom;
    Calendar calendar;

    ScenarioConfig();
    bool operator==(const ScenarioConfig&) const = default;
};

// Built-in likelihood profiles per customer type.
std::array<TypeProfile, kCustomerTypeCount> default_type_profiles();

// A seven-day default calendar (09:00-19:00, flat footfall, one of each role).
Calendar default_calendar();

// Throws ConfigError describing the first problem found.
void validate(const ScenarioConfig& cfg);

// JSON text <-> config. Loaders validate before returning.
ScenarioConfig scenario_from_json_text(const std::string& text);
std::string scenario_to_json_text(const ScenarioConfig& cfg, int indent = 2);
ScenarioConfig load_scenario(const std::string& path);
void save_scenario(const ScenarioConfig& cfg, const std::string& path);

// Variance-reduction transform: every open day gets the mean opening span, a
// constant arrival rate preserving total weekly footfall, and per-role mean
// staffing (rounded half up). Already-transformed configs pass through
// unchanged, so the transform is idempotent.
ScenarioConfig to_noise_reduction(const ScenarioConfig& cfg);

} // namespace retailsim
