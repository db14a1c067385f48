#include <doctest.h>

#include "retailsim/engine.hpp"
#include "retailsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "../support/helpers.hpp"

using namespace retailsim;

namespace {

const std::string kScenarioDir = std::string(RETAILSIM_SOURCE_DIR) + "/scenarios";

int count_role(const std::vector<Staff>& staff, StaffRole role) {
    int n = 0;
    for (const auto& s : staff)
        n += s.role == role ? 1 : 0;
    return n;
}

int count_type(const std::vector<Customer>& pool, const std::vector<int>& ids, CustomerType t) {
    int n = 0;
    for (int id : ids)
        n += pool[id].type == t ? 1 : 0;
    return n;
}

} // namespace

TEST_CASE("wom_additional: net promoters scale by adoption and contacts") {
    CHECK(wom_additional(100, 40, {0.5, 2.0}) == 60);
    CHECK(wom_additional(40, 100, {0.5, 2.0}) == -60);
    CHECK(wom_additional(500, 100, {0.0, 3.0}) == 0);
    CHECK(wom_additional(0, 0, {1.0, 5.0}) == 0);
    // Rounds half away from zero.
    CHECK(wom_additional(3, 0, {0.5, 1.0}) == 2);
    CHECK(wom_additional(0, 3, {0.5, 1.0}) == -2);
}

TEST_CASE("build_customer_pool: typed blocks by largest remainder") {
    ScenarioConfig cfg;
    cfg.pool_size = 10;
    auto pool = build_customer_pool(cfg);
    REQUIRE(pool.size() == 10);
    for (int i = 0; i < 10; ++i) {
        CHECK(pool[i].id == i);
        CHECK(pool[i].state == CustomerState::Resting);
        CHECK(pool[i].visits == 0);
        // Even split over ten: two per type, grouped in enum order.
        CHECK(pool[i].type == static_cast<CustomerType>(i / 2));
    }

    // 7 seats split 50/50: the tie seat goes to the earlier type.
    cfg.pool_size = 7;
    cfg.type_split = {0.5, 0.5, 0.0, 0.0, 0.0};
    pool = build_customer_pool(cfg);
    int enth = 0, dem = 0;
    for (const auto& c : pool) {
        enth += c.type == CustomerType::ShoppingEnthusiast ? 1 : 0;
        dem += c.type == CustomerType::SolutionDemander ? 1 : 0;
    }
    CHECK(enth == 4);
    CHECK(dem == 3);
}

TEST_CASE("build_staff_pool: auto sizing covers the core week plus the worst gap") {
    ScenarioConfig cfg; // default: every day needs one of each role
    auto staff = build_staff_pool(cfg);
    REQUIRE(staff.size() == 4);
    CHECK(staff[0].role == StaffRole::NormalService);
    CHECK(staff[1].role == StaffRole::Expert);
    CHECK(staff[2].role == StaffRole::Cashier);
    CHECK(staff[3].role == StaffRole::Manager);
    for (std::size_t i = 0; i < staff.size(); ++i) {
        CHECK(staff[i].id == static_cast<int>(i));
        CHECK_FALSE(staff[i].on_duty);
    }

    // A busy Saturday is staffed with part-timers on top of the weekday core.
    cfg.calendar.days[static_cast<int>(Weekday::Saturday)].staff_required = {3, 2, 3, 1};
    staff = build_staff_pool(cfg);
    CHECK(count_role(staff, StaffRole::NormalService) == 1);
    CHECK(count_role(staff, StaffRole::Expert) == 1);
    CHECK(count_role(staff, StaffRole::Cashier) == 1);
    CHECK(count_role(staff, StaffRole::Manager) == 1);
    CHECK(count_role(staff, StaffRole::GenericPT) == 5); // (3-1)+(2-1)+(3-1)+0

    // Explicit sizing is taken as given.
    cfg.staffing = {true, {2, 1, 2, 1}, 3};
    staff = build_staff_pool(cfg);
    CHECK(count_role(staff, StaffRole::NormalService) == 2);
    CHECK(count_role(staff, StaffRole::GenericPT) == 3);
    CHECK(staff.size() == 9);
}

TEST_CASE("select_roster: exact cover, random subsets, part-time fill, and hard failure") {
    ScenarioConfig cfg;
    RandomStream staffing(1, "staffing", 0);

    SUBCASE("exact full-time cover uses everyone required and nobody else") {
        auto staff = build_staff_pool(cfg); // one of each role
        const auto roster = select_roster(staff, {1, 1, 1, 1}, staffing);
        CHECK(roster.size() == 4);
        for (int sid : roster)
            CHECK(staff[sid].on_duty);
    }

    SUBCASE("a surplus pool rosters a subset of the right size") {
        cfg.staffing = {true, {0, 0, 3, 0}, 0};
        for (auto& day : cfg.calendar.days)
            day.staff_required = {0, 0, 2, 0};
        auto staff = build_staff_pool(cfg);
        REQUIRE(staff.size() == 3);
        const auto roster = select_roster(staff, {0, 0, 2, 0}, staffing);
        CHECK(roster.size() == 2);
        for (int sid : roster)
            CHECK(staff[sid].role == StaffRole::Cashier);
        CHECK(count_role(staff, StaffRole::Cashier) == 3); // pool untouched
    }

    SUBCASE("part-timers fill the gaps full-timers leave") {
        cfg.staffing = {true, {0, 0, 1, 0}, 2};
        for (auto& day : cfg.calendar.days)
            day.staff_required = {0, 0, 1, 0};
        auto staff = build_staff_pool(cfg);
        const auto roster = select_roster(staff, {0, 0, 2, 1}, staffing);
        CHECK(roster.size() == 3); // cashier + two generics
        int cashiers = 0, generics = 0;
        for (int sid : roster) {
            cashiers += staff[sid].role == StaffRole::Cashier ? 1 : 0;
            generics += staff[sid].role == StaffRole::GenericPT ? 1 : 0;
        }
        CHECK(cashiers == 1);
        CHECK(generics == 2);
    }

    SUBCASE("an impossible requirement throws") {
        cfg.staffing = {true, {0, 0, 3, 0}, 0};
        for (auto& day : cfg.calendar.days)
            day.staff_required = {0, 0, 2, 0};
        auto staff = build_staff_pool(cfg);
        CHECK_THROWS_AS(select_roster(staff, {0, 0, 4, 0}, staffing), NoStaffConfiguredError);
    }
}

TEST_CASE("daily_arrival_schedule: closed days and zeroed rates yield nothing") {
    ScenarioConfig cfg;
    RandomStream arrivals(3, "arrivals", 0);
    cfg.calendar.days[static_cast<int>(Weekday::Tuesday)].open = false;
    CHECK(daily_arrival_schedule(cfg, Weekday::Tuesday, 0, arrivals).empty());
    CHECK(daily_arrival_schedule(cfg, Weekday::Tuesday, 50, arrivals).empty());

    for (auto& day : cfg.calendar.days)
        day.hourly_footfall.assign(10, 0.0);
    CHECK(daily_arrival_schedule(cfg, Weekday::Monday, 0, arrivals).empty());
}

TEST_CASE("daily_arrival_schedule: long-run mean matches the calendar") {
    ScenarioConfig cfg; // 10 per hour for 10 hours
    RandomStream arrivals(3, "arrivals", 1);
    double total = 0.0;
    const auto& sched = cfg.calendar.days[static_cast<int>(Weekday::Monday)];
    for (int i = 0; i < 1000; ++i) {
        const auto times = daily_arrival_schedule(cfg, Weekday::Monday, 0, arrivals);
        total += static_cast<double>(times.size());
        CHECK(std::is_sorted(times.begin(), times.end()));
        if (!times.empty()) {
            CHECK(times.front() >= sched.open_minute);
            CHECK(times.back() < sched.close_minute);
        }
    }
    CHECK(std::abs(total / 1000.0 - 100.0) < 3.0);
}

TEST_CASE("daily_arrival_schedule: word-of-mouth extras scale the day") {
    ScenarioConfig cfg;
    RandomStream arrivals(5, "arrivals", 0);

    // +100 on a base of 100 doubles the expectation.
    double total = 0.0;
    for (int i = 0; i < 500; ++i)
        total += static_cast<double>(daily_arrival_schedule(cfg, Weekday::Monday, 100, arrivals).size());
    CHECK(std::abs(total / 500.0 - 200.0) < 6.0);

    // Negative extras can silence a day entirely.
    for (int i = 0; i < 20; ++i)
        CHECK(daily_arrival_schedule(cfg, Weekday::Monday, -100, arrivals).empty());
    for (int i = 0; i < 20; ++i)
        CHECK(daily_arrival_schedule(cfg, Weekday::Monday, -5000, arrivals).empty());

    // A positive target on a zero base still spreads arrivals over the day.
    for (auto& day : cfg.calendar.days)
        day.hourly_footfall.assign(10, 0.0);
    total = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const auto times = daily_arrival_schedule(cfg, Weekday::Monday, 5, arrivals);
        total += static_cast<double>(times.size());
        for (double t : times) {
            CHECK(t >= 540.0);
            CHECK(t < 1140.0);
        }
    }
    CHECK(std::abs(total / 1000.0 - 5.0) < 0.7);
}

TEST_CASE("pick_customers: uniform picks are distinct resting customers") {
    ScenarioConfig cfg;
    cfg.pool_size = 50;
    auto pool = build_customer_pool(cfg);
    RandomStream picks(7, "picks", 0);
    const PickPolicy uniform;

    CHECK(pick_customers(pool, 0, uniform, picks).empty());

    auto all = pick_customers(pool, 50, uniform, picks);
    CHECK(std::set<int>(all.begin(), all.end()).size() == 50);

    auto ten = pick_customers(pool, 10, uniform, picks);
    CHECK(ten.size() == 10);
    CHECK(std::set<int>(ten.begin(), ten.end()).size() == 10);

    // Busy customers are never picked; a dry pool returns what is left.
    for (int i = 0; i < 45; ++i)
        pool[i].state = CustomerState::Browsing;
    auto rest = pick_customers(pool, 50, uniform, picks);
    CHECK(rest.size() == 5);
    for (int id : rest)
        CHECK(id >= 45);
}

TEST_CASE("pick_customers: type quotas apportion and redistribute shortfalls") {
    ScenarioConfig cfg;
    cfg.pool_size = 50; // ten per type
    const auto pool = build_customer_pool(cfg);
    RandomStream picks(7, "picks", 1);

    PickPolicy policy;
    policy.kind = PickPolicyKind::TypeQuota;
    policy.quota = {0.5, 0.5, 0.0, 0.0, 0.0};
    auto got = pick_customers(pool, 10, policy, picks);
    REQUIRE(got.size() == 10);
    CHECK(count_type(pool, got, CustomerType::ShoppingEnthusiast) == 5);
    CHECK(count_type(pool, got, CustomerType::SolutionDemander) == 5);

    // Only ten enthusiasts exist; the other five picks spill over.
    policy.quota = {1.0, 0.0, 0.0, 0.0, 0.0};
    got = pick_customers(pool, 15, policy, picks);
    REQUIRE(got.size() == 15);
    CHECK(count_type(pool, got, CustomerType::ShoppingEnthusiast) == 10);
    CHECK(std::set<int>(got.begin(), got.end()).size() == 15);
}

TEST_CASE("pick_customers: satisfaction bias favours happy veterans") {
    ScenarioConfig cfg;
    cfg.pool_size = 50;
    auto pool = build_customer_pool(cfg);
    pool[0].lifetime_score = 1000;
    RandomStream picks(7, "picks", 2);

    PickPolicy policy;
    policy.kind = PickPolicyKind::SatisfactionBiased;
    int zero_picked = 0;
    const int trials = 2000;
    for (int i = 0; i < trials; ++i) {
        const auto got = pick_customers(pool, 1, policy, picks);
        REQUIRE(got.size() == 1);
        zero_picked += got[0] == 0 ? 1 : 0;
    }
    // Weight 1001 out of 1050 total.
    CHECK(static_cast<double>(zero_picked) / trials > 0.9);
}

TEST_CASE("run_replication: identical inputs give identical outputs") {
    const ScenarioConfig cfg = load_scenario(kScenarioDir + "/desk.scenario");
    RunOptions opt;
    opt.days = 7;
    const RunOutput a = run_replication(cfg, 0, opt);
    const RunOutput b = run_replication(cfg, 0, opt);

    CHECK(a.total_visits == b.total_visits);
    CHECK(a.transactions == b.transactions);
    CHECK(a.refunds_granted == b.refunds_granted);
    CHECK(a.exits_by_reason == b.exits_by_reason);
    CHECK(a.csm_ahd == b.csm_ahd);
    CHECK(a.csm_epv == b.csm_epv);
    CHECK(a.queue_entered == b.queue_entered);
    CHECK(a.queue_reneged == b.queue_reneged);
    CHECK(a.visit_score_histogram == b.visit_score_histogram);
    REQUIRE(a.daily.size() == b.daily.size());
    for (std::size_t i = 0; i < a.daily.size(); ++i) {
        CHECK(a.daily[i].arrivals == b.daily[i].arrivals);
        CHECK(a.daily[i].exits == b.daily[i].exits);
        CHECK(a.daily[i].sum_visit_score == b.daily[i].sum_visit_score);
    }

    // Different replications explore different randomness.
    const RunOutput c = run_replication(cfg, 1, opt);
    CHECK(a.total_visits != c.total_visits);
}

TEST_CASE("run_replication: exits balance arrivals and invariants hold throughout") {
    ScenarioConfig cfg = load_scenario(kScenarioDir + "/desk.scenario");
    cfg.wom.adoption_fraction = 0.5; // exercise the feedback loop under audit
    RunOptions opt;
    opt.days = 7;
    opt.check_invariants = true;
    const RunOutput out = run_replication(cfg, 0, opt);

    long arrivals = 0, exits = 0;
    for (const auto& d : out.daily) {
        arrivals += d.arrivals;
        exits += d.exits;
    }
    CHECK(arrivals == exits);       // the floor empties every evening
    CHECK(out.total_visits == exits);
    CHECK(out.daily.size() == 7);
    CHECK(out.daily[0].wom_extra == 0); // no word of mouth before day one
    long hist_total = 0;
    for (const auto& [score, n] : out.visit_score_histogram)
        hist_total += n;
    CHECK(hist_total == out.total_visits);
    long reason_total = 0;
    for (long n : out.exits_by_reason)
        reason_total += n;
    CHECK(reason_total == out.total_visits);
}

TEST_CASE("run_replication: closed days produce zero rows") {
    ScenarioConfig cfg;
    cfg.pool_size = 200;
    cfg.seed = 5;
    cfg.calendar.start_day = Weekday::Monday;
    for (int wd = 0; wd < 7; ++wd)
        cfg.calendar.days[wd].open =
            wd == static_cast<int>(Weekday::Monday) || wd == static_cast<int>(Weekday::Tuesday);
    RunOptions opt;
    opt.days = 7;
    const RunOutput out = run_replication(cfg, 0, opt);
    REQUIRE(out.daily.size() == 7);
    CHECK(out.daily[0].open);
    CHECK(out.daily[1].open);
    for (std::size_t i = 2; i < 7; ++i) {
        CHECK_FALSE(out.daily[i].open);
        CHECK(out.daily[i].arrivals == 0);
        CHECK(out.daily[i].exits == 0);
        CHECK(out.daily[i].wom_extra == 0);
    }
    CHECK(out.daily[0].arrivals > 0);
}

TEST_CASE("run_replication: the flagship scale holds its advertised daily traffic") {
    const ScenarioConfig cfg = load_scenario(kScenarioDir + "/atv.scenario");
    RunOptions opt;
    opt.days = 70;
    const RunOutput out = run_replication(cfg, 0, opt);
    const double per_day = static_cast<double>(out.total_visits) / 70.0;
    CHECK(per_day > 585.0 * 0.95);
    CHECK(per_day < 585.0 * 1.05);
}

TEST_CASE("run_replication: rejects an invalid scenario up front") {
    ScenarioConfig cfg;
    cfg.pool_size = 0;
    RunOptions opt;
    CHECK_THROWS_AS(run_replication(cfg, 0, opt), ConfigError);
}
