#pragma once

#include "retailsim/config.hpp"
#include "retailsim/types.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace retailsim {

// One calendar day of a run. Closed days keep a row with everything zero.
struct DailyTally {
    int day = 0; // 1-based
    Weekday weekday = Weekday::Sunday;
    bool open = false;
    long wom_extra = 0;
    long arrivals = 0;
    long exits = 0;
    long transactions = 0;
    long reneges = 0;
    std::array<long, 3> epv_class{}; // SatisfactionClass-indexed, this day's exits
    long long sum_visit_score = 0;
    long long sum_lifetime_at_exit = 0;
};

// Everything a single replication produces.
struct RunOutput {
    ScenarioConfig params;
    int replication = 0;
    int days = 0;

    std::array<long, kExitReasonCount> exits_by_reason{};
    std::array<long, 3> csm_ahd{}; // classification of lifetime score at exit
    std::array<long, 3> csm_epv{}; // classification of this visit's score at exit
    std::array<long, kQueueKindCount> queue_entered{};
    std::array<long, kQueueKindCount> queue_reneged{};
    long total_visits = 0;
    long transactions = 0;
    long refunds_granted = 0;
    std::map<int, long> visit_score_histogram;
    std::vector<DailyTally> daily;

    std::array<double, kDedicatedRoleCount> dedicated_busy_minutes{};
    std::array<double, kDedicatedRoleCount> dedicated_rostered_minutes{};
    double pt_busy_minutes = 0.0;
    double pt_rostered_minutes = 0.0;
};

// Score -> satisfaction class. Scores above the band are satisfied, below
// its negation dissatisfied, inside it neutral.
SatisfactionClass classify(long long score, int neutral_band);

struct ExitRecord {
    ExitReason reason = ExitReason::BeforeFindingAnything;
    int visit_score = 0;
    long long lifetime_before = 0;
};

// Folds one customer exit into the run totals and the day's tally; returns
// the customer's lifetime score after this visit.
long long record_exit(RunOutput& out, DailyTally& today, const ExitRecord& rec, int neutral_band);

// Writes params.csv, counters.csv, daily.csv and score_histogram.csv into
// dir (created if needed). Byte-deterministic for identical inputs.
void write_outputs(const RunOutput& out, const std::string& dir);

} // namespace retailsim
