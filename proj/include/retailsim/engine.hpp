#pragma once

#include "retailsim/agents.hpp"
#include "retailsim/config.hpp"
#include "retailsim/metrics.hpp"
#include "retailsim/stochastic.hpp"

#include <cstdint>
#include <vector>

namespace retailsim {

// One named stream per source of randomness. Replications get disjoint
// streams; within an experiment, scenario variants of the same replication
// share them, so sweeps run under common random numbers.
struct Streams {
    RandomStream arrivals;
    RandomStream picks;
    RandomStream decisions;
    RandomStream delays;
    RandomStream staffing;
};

Streams make_streams(std::uint64_t master_seed, std::uint64_t replication);

struct RunOptions {
    int days = 7;
    bool check_invariants = false;
};

// Customers with ids 0..pool_size-1, typed by largest-remainder shares.
std::vector<Customer> build_customer_pool(const ScenarioConfig& cfg);

// Full-time staff per dedicated role plus a generic part-time pool. Auto
// sizing covers the core (Monday-Friday) requirement with full-timers and
// the worst remaining day with part-timers.
std::vector<Staff> build_staff_pool(const ScenarioConfig& cfg);

// Extra arrivals recruited by yesterday's net satisfied shoppers, rounded
// half away from zero; may be negative.
long wom_additional(long satisfied, long dissatisfied, const WomConfig& wom);

// Arrival times (minutes after midnight, sorted) for one day: a Poisson count
// per hourly slice, uniform within the slice. The word-of-mouth extra scales
// the whole day's intensity, floored at zero.
std::vector<double> daily_arrival_schedule(const ScenarioConfig& cfg, Weekday day, long wom_extra,
                                           RandomStream& arrivals);

// Picks n distinct resting customers (fewer if the pool runs dry).
std::vector<int> pick_customers(const std::vector<Customer>& pool, int n,
                                const PickPolicy& policy, RandomStream& picks);

// Chooses today's on-duty staff: required dedicated staff per role (a random
// subset when more are employed than needed) topped up with random
// part-timers for the remaining gaps. Throws NoStaffConfiguredError if the
// pool cannot cover the requirement.
std::vector<int> select_roster(std::vector<Staff>& staff,
                               const std::array<int, kDedicatedRoleCount>& required,
                               RandomStream& staffing);

// Runs one replication for opt.days calendar days and returns its outputs.
RunOutput run_replication(const ScenarioConfig& cfg, int replication, const RunOptions& opt);

} // namespace retailsim
