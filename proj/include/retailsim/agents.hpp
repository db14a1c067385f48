#pragma once

#include "retailsim/config.hpp"
#include "retailsim/metrics.hpp"
#include "retailsim/stochastic.hpp"
#include "retailsim/types.hpp"

#include <array>
#include <cstdint>
#include <deque>
#include <queue>
#include <vector>

namespace retailsim {

struct Customer {
    int id = -1;
    CustomerType type = CustomerType::ShoppingEnthusiast;
    CustomerState state = CustomerState::Resting;
    // Incremented on every exit; events carry the epoch they were scheduled
    // under, so anything referring to an earlier visit is silently dropped.
    std::uint32_t epoch = 0;
    long long lifetime_score = 0;
    int visit_score = 0;
    int visits = 0;
    bool wants_refund = false;
    bool purchase_made = false;
};

struct Staff {
    int id = -1;
    StaffRole role = StaffRole::GenericPT;
    bool on_duty = false;
    int serving = -1; // customer id, -1 when idle
    QueueKind serving_kind = QueueKind::Till;
    double service_start = 0.0;
    double busy_minutes = 0.0;
    double rostered_minutes = 0.0;

    bool full_time() const { return role != StaffRole::GenericPT; }

    bool can_serve(QueueKind k) const {
        switch (role) {
        case StaffRole::GenericPT: return true;
        case StaffRole::Cashier: return k == QueueKind::Till;
        case StaffRole::NormalService: return k == QueueKind::NormalHelp;
        case StaffRole::Expert: return k == QueueKind::ExpertHelp;
        case StaffRole::Manager: return k == QueueKind::RefundDecision;
        }
        return false;
    }
};

enum class EventKind : int { Arrival = 0, BrowseEnd, ServiceEnd, PatienceCheck, Close };

struct Event {
    double time = 0.0;
    std::uint64_t seq = 0; // breaks time ties in insertion order
    EventKind kind = EventKind::Arrival;
    int customer = -1;
    std::uint32_t epoch = 0;
    int staff = -1;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time)
            return a.time > b.time;
        return a.seq > b.seq;
    }
};

struct QueueEntry {
    int customer = -1;
    double enqueued_at = 0.0;
    double deadline = 0.0; // renege moment
    std::uint64_t seq = 0; // breaks enqueue-time ties
};

struct ServiceQueue {
    std::deque<QueueEntry> entries;
};

// Live department state for one day-by-day run: the customer pool, the staff
// pool, four service queues and the pending event heap. The engine owns the
// day cycle; everything inside a day happens through the operations below.
struct Department {
    const ScenarioConfig* cfg = nullptr;
    std::vector<Customer> customers;
    std::vector<Staff> staff;
    std::vector<int> roster; // staff ids on duty today
    std::array<ServiceQueue, kQueueKindCount> queues;
    std::priority_queue<Event, std::vector<Event>, EventAfter> events;
    double now = 0.0;
    double close_at = 0.0; // today's closing time, absolute minutes
    std::uint64_t next_seq = 0;
    int in_department = 0;

    RunOutput* out = nullptr;
    DailyTally* today = nullptr;
    RandomStream* decisions = nullptr;
    RandomStream* delays = nullptr;

    const TypeProfile& profile(const Customer& c) const {
        return cfg->type_profiles[static_cast<int>(c.type)];
    }

    void schedule(double time, EventKind kind, int customer, int staff = -1);
};

// ---- per-customer operations ----------------------------------------------

struct BeginVisitResult {
    bool refund_goal = false;
    double first_event_time = 0.0; // browse end or service/patience deadline
};

// Customer enters: pick the visit goal, then either start browsing or head
// straight for the refund desk.
BeginVisitResult begin_visit(Department& dept, Customer& c);

enum class NextStep : int {
    WentToTill = 0,
    AskedNormalHelp,
    AskedExpertHelp,
    ResumedBrowsing,
    Exited,
};

// Decide what happens when browsing finishes: ask for help, pay, or leave.
NextStep after_browse(Department& dept, Customer& c);

struct ServiceRequestResult {
    bool immediate = false;
    int staff_id = -1;         // set when immediate
    double service_end = 0.0;  // set when immediate
    double deadline = 0.0;     // set when queued
};

// Ask for service of the given kind: grab an idle compatible staff member or
// join the queue with a sampled patience deadline. Throws
// NoStaffConfiguredError if nobody on today's roster could ever serve it.
ServiceRequestResult request_service(Department& dept, Customer& c, QueueKind kind);

// Remove every queued customer whose patience has run out; returns their ids.
std::vector<int> renege_due(Department& dept);

// Finish the staff member's current service and route the customer onwards.
NextStep complete_service(Department& dept, Staff& s);

// Work-conserving assignment sweep: idle rostered staff pull the longest
// waiting compatible customers. Returns the number of services started.
int dispatch(Department& dept);

// At closing time everyone except those paying or waiting to pay leaves.
// Returns ids of the customers swept out.
std::vector<int> quick_exit_sweep(Department& dept);

// Score a transition for this visit.
void add_score(Department& dept, Customer& c, TransitionKind k);

// Record the exit, return the customer to the pool, invalidate their events.
void exit_customer(Department& dept, Customer& c, ExitReason reason);

// Apply one event (stale events are dropped silently).
void handle_event(Department& dept, const Event& e);

// Full consistency audit; throws InvariantViolation naming the first failure.
void check_department(const Department& dept);

} // namespace retailsim
