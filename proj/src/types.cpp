#include "retailsim/types.hpp"

#include "retailsim/errors.hpp"

#include <algorithm>

namespace retailsim {
namespace {

template <std::size_t N>
const std::string& lookup(const std::array<std::string, N>& names, int idx, const char* what) {
    if (idx < 0 || idx >= static_cast<int>(N))
        throw ConfigError(std::string("invalid ") + what + " value");
    return names[static_cast<std::size_t>(idx)];
}

template <std::size_t N>
int find_name(const std::array<std::string, N>& names, const std::string& s, const char* what) {
    auto it = std::find(names.begin(), names.end(), s);
    if (it == names.end())
        throw ConfigError(std::string("unknown ") + what + ": '" + s + "'");
    return static_cast<int>(it - names.begin());
}

const std::array<std::string, 3> kLikelihood = {"low", "moderate", "high"};
const std::array<std::string, 5> kCustomerType = {
    "shopping_enthusiast", "solution_demander", "service_seeker",
    "disinterested_shopper", "internet_shopper"};
const std::array<std::string, 5> kStaffRole = {
    "normal_service", "expert", "cashier", "manager", "generic_pt"};
const std::array<std::string, 4> kQueueKind = {"till", "normal_help", "expert_help", "refund"};
const std::array<std::string, 7> kTransition = {
    "immediate_service", "service_completed", "reneged", "purchase_made",
    "left_empty_handed", "refund_granted", "quick_exit"};
const std::array<std::string, 5> kExitReason = {
    "after_making_a_purchase", "before_finding_anything", "before_receiving_normal_help",
    "before_receiving_expert_help", "whilst_waiting_to_pay"};
const std::array<std::string, 3> kSatisfaction = {"satisfied", "neutral", "dissatisfied"};
const std::array<std::string, 2> kMode = {"normal", "noise_reduction"};
const std::array<std::string, 7> kWeekday = {
    "sunday", "monday", "tuesday", "wednesday", "thursday", "friday", "saturday"};

} // namespace

const std::string& to_string(LikelihoodLevel v) { return lookup(kLikelihood, static_cast<int>(v), "likelihood"); }
const std::string& to_string(CustomerType v) { return lookup(kCustomerType, static_cast<int>(v), "customer type"); }
const std::string& to_string(StaffRole v) { return lookup(kStaffRole, static_cast<int>(v), "staff role"); }
const std::string& to_string(QueueKind v) { return lookup(kQueueKind, static_cast<int>(v), "queue kind"); }
const std::string& to_string(TransitionKind v) { return lookup(kTransition, static_cast<int>(v), "transition"); }
const std::string& to_string(ExitReason v) { return lookup(kExitReason, static_cast<int>(v), "exit reason"); }
const std::string& to_string(SatisfactionClass v) { return lookup(kSatisfaction, static_cast<int>(v), "satisfaction class"); }
const std::string& to_string(SimMode v) { return lookup(kMode, static_cast<int>(v), "mode"); }
const std::string& to_string(Weekday v) { return lookup(kWeekday, static_cast<int>(v), "weekday"); }

LikelihoodLevel likelihood_from_string(const std::string& s) {
    return static_cast<LikelihoodLevel>(find_name(kLikelihood, s, "likelihood"));
}
CustomerType customer_type_from_string(const std::string& s) {
    return static_cast<CustomerType>(find_name(kCustomerType, s, "customer type"));
}
StaffRole staff_role_from_string(const std::string& s) {
    return static_cast<StaffRole>(find_name(kStaffRole, s, "staff role"));
}
TransitionKind transition_from_string(const std::string& s) {
    return static_cast<TransitionKind>(find_name(kTransition, s, "transition"));
}
SimMode mode_from_string(const std::string& s) {
    return static_cast<SimMode>(find_name(kMode, s, "mode"));
}
Weekday weekday_from_string(const std::string& s) {
    return static_cast<Weekday>(find_name(kWeekday, s, "weekday"));
}

} // namespace retailsim
