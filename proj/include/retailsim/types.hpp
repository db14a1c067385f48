#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace retailsim {

// ---- shared enumerations -------------------------------------------------

enum class LikelihoodLevel : int { Low = 0, Moderate = 1, High = 2 };

enum class CustomerType : int {
    ShoppingEnthusiast = 0,
    SolutionDemander,
    ServiceSeeker,
    DisinterestedShopper,
    InternetShopper,
};
inline constexpr int kCustomerTypeCount = 5;

// Dedicated roles first; GenericPT staff can cover any queue.
enum class StaffRole : int {
    NormalService = 0,
    Expert,
    Cashier,
    Manager,
    GenericPT,
};
inline constexpr int kDedicatedRoleCount = 4;
inline constexpr int kStaffRoleCount = 5;

enum class QueueKind : int {
    Till = 0,
    NormalHelp,
    ExpertHelp,
    RefundDecision,
};
inline constexpr int kQueueKindCount = 4;

enum class CustomerState : int {
    Resting = 0,        // in the pool, outside the department
    Browsing,
    WaitingNormalHelp,
    ReceivingNormalHelp,
    WaitingExpertHelp,
    ReceivingExpertHelp,
    WaitingToPay,
    Paying,
    WaitingRefund,
    InRefund,
};

// Scored state transitions (satisfaction weights attach to these).
enum class TransitionKind : int {
    ImmediateService = 0,
    ServiceCompleted,
    Reneged,
    PurchaseMade,
    LeftEmptyHanded,
    RefundGranted,
    QuickExit,
};
inline constexpr int kTransitionKindCount = 7;

enum class ExitReason : int {
    AfterPurchase = 0,
    BeforeFindingAnything,
    BeforeNormalHelp,
    BeforeExpertHelp,
    WhileWaitingToPay,
};
inline constexpr int kExitReasonCount = 5;

enum class SatisfactionClass : int { Satisfied = 0, Neutral, Dissatisfied };

enum class SimMode : int { Normal = 0, NoiseReduction };

enum class Weekday : int {
    Sunday = 0, Monday, Tuesday, Wednesday, Thursday, Friday, Saturday,
};

// ---- small value types ----------------------------------------------------

struct TriangularParams {
    double min = 0.0;
    double mode = 0.0;
    double max = 0.0;
    bool operator==(const TriangularParams&) const = default;
};

// Per-customer-type likelihood profile.
struct TypeProfile {
    LikelihoodLevel buy = LikelihoodLevel::Moderate;
    LikelihoodLevel wait = LikelihoodLevel::Moderate;
    LikelihoodLevel ask_help = LikelihoodLevel::Moderate;
    LikelihoodLevel ask_refund = LikelihoodLevel::Moderate;
    bool operator==(const TypeProfile&) const = default;
};

// ---- name tables ----------------------------------------------------------

const std::string& to_string(LikelihoodLevel v);
const std::string& to_string(CustomerType v);
const std::string& to_string(StaffRole v);
const std::string& to_string(QueueKind v);
const std::string& to_string(TransitionKind v);
const std::string& to_string(ExitReason v);
const std::string& to_string(SatisfactionClass v);
const std::string& to_string(SimMode v);
const std::string& to_string(Weekday v);

LikelihoodLevel likelihood_from_string(const std::string& s);
CustomerType customer_type_from_string(const std::string& s);
StaffRole staff_role_from_string(const std::string& s);
TransitionKind transition_from_string(const std::string& s);
SimMode mode_from_string(const std::string& s);
Weekday weekday_from_string(const std::string& s);

} // namespace retailsim
