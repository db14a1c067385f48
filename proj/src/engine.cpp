#include "retailsim/engine.hpp"

#include "retailsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace retailsim {
namespace {

// Partial Fisher-Yates: the first n slots of ids become a uniform sample.
std::vector<int> sample_without_replacement(std::vector<int> ids, std::size_t n,
                                            RandomStream& stream) {
    n = std::min(n, ids.size());
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + stream.uniform_int(ids.size() - i);
        std::swap(ids[i], ids[j]);
    }
    ids.resize(n);
    return ids;
}

// Largest-remainder apportionment of n among non-negative shares.
std::array<int, kCustomerTypeCount> apportion(double n,
                                              const std::array<double, kCustomerTypeCount>& share) {
    const double total = std::accumulate(share.begin(), share.end(), 0.0);
    std::array<int, kCustomerTypeCount> out{};
    std::array<double, kCustomerTypeCount> frac{};
    int assigned = 0;
    for (int i = 0; i < kCustomerTypeCount; ++i) {
        const double exact = n * share[i] / total;
        out[i] = static_cast<int>(std::floor(exact));
        frac[i] = exact - out[i];
        assigned += out[i];
    }
    int remainder = static_cast<int>(std::llround(n)) - assigned;
    std::array<int, kCustomerTypeCount> order{0, 1, 2, 3, 4};
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (frac[a] != frac[b])
            return frac[a] > frac[b];
        return a < b;
    });
    for (int i = 0; i < remainder; ++i)
        out[order[i % kCustomerTypeCount]] += 1;
    return out;
}

// Fenwick tree over per-customer weights, for biased sampling w/o replacement.
class WeightedSampler {
public:
    explicit WeightedSampler(std::size_t n) : tree_(n + 1, 0.0), n_(n) {}

    void add(std::size_t i, double w) {
        for (std::size_t x = i + 1; x <= n_; x += x & (~x + 1))
            tree_[x] += w;
    }

    double total() const {
        double t = 0.0;
        for (std::size_t x = n_; x > 0; x -= x & (~x + 1))
            t += tree_[x];
        return t;
    }

    // Smallest index with cumulative weight > target.
    std::size_t find(double target) const {
        std::size_t pos = 0, mask = 1;
        while (mask * 2 <= n_)
            mask *= 2;
        for (; mask > 0; mask /= 2) {
            const std::size_t next = pos + mask;
            if (next <= n_ && tree_[next] <= target) {
                target -= tree_[next];
                pos = next;
            }
        }
        return pos; // 0-based index
    }

private:
    std::vector<double> tree_;
    std::size_t n_;
};

} // namespace

Streams make_streams(std::uint64_t master_seed, std::uint64_t replication) {
    return Streams{
        RandomStream(master_seed, "arrivals", replication),
        RandomStream(master_seed, "picks", replication),
        RandomStream(master_seed, "decisions", replication),
        RandomStream(master_seed, "delays", replication),
        RandomStream(master_seed, "staffing", replication),
    };
}

std::vector<Customer> build_customer_pool(const ScenarioConfig& cfg) {
    const auto counts = apportion(cfg.pool_size, cfg.type_split);
    std::vector<Customer> pool;
    pool.reserve(cfg.pool_size);
    for (int t = 0; t < kCustomerTypeCount; ++t) {
        for (int i = 0; i < counts[t]; ++i) {
            Customer c;
            c.id = static_cast<int>(pool.size());
            c.type = static_cast<CustomerType>(t);
            pool.push_back(c);
        }
    }
    return pool;
}

std::vector<Staff> build_staff_pool(const ScenarioConfig& cfg) {
    std::array<int, kDedicatedRoleCount> full_time{};
    int part_time = 0;

    if (cfg.staffing.explicit_sizing) {
        full_time = cfg.staffing.full_time;
        part_time = cfg.staffing.part_time;
    } else {
        // Core requirement: per-role maximum over open Monday-Friday days
        // (over all open days if no weekday is open).
        bool any_weekday = false;
        for (int wd = static_cast<int>(Weekday::Monday); wd <= static_cast<int>(Weekday::Friday); ++wd)
            any_weekday = any_weekday || cfg.calendar.days[wd].open;
        for (int wd = 0; wd < 7; ++wd) {
            const DaySchedule& d = cfg.calendar.days[wd];
            if (!d.open)
                continue;
            const bool weekday =
                wd >= static_cast<int>(Weekday::Monday) && wd <= static_cast<int>(Weekday::Friday);
            if (any_weekday && !weekday)
                continue;
            for (int role = 0; role < kDedicatedRoleCount; ++role)
                full_time[role] = std::max(full_time[role], d.staff_required[role]);
        }
        for (int wd = 0; wd < 7; ++wd) {
            const DaySchedule& d = cfg.calendar.days[wd];
            if (!d.open)
                continue;
            int gap = 0;
            for (int role = 0; role < kDedicatedRoleCount; ++role)
                gap += std::max(0, d.staff_required[role] - full_time[role]);
            part_time = std::max(part_time, gap);
        }
    }

    std::vector<Staff> staff;
    for (int role = 0; role < kDedicatedRoleCount; ++role) {
        for (int i = 0; i < full_time[role]; ++i) {
            Staff s;
            s.id = static_cast<int>(staff.size());
            s.role = static_cast<StaffRole>(role);
            staff.push_back(s);
        }
    }
    for (int i = 0; i < part_time; ++i) {
        Staff s;
        s.id = static_cast<int>(staff.size());
        s.role = StaffRole::GenericPT;
        staff.push_back(s);
    }
    return staff;
}

long wom_additional(long satisfied, long dissatisfied, const WomConfig& wom) {
    const double extra =
        static_cast<double>(satisfied - dissatisfied) * wom.adoption_fraction * wom.contact_rate;
    return static_cast<long>(std::llround(extra));
}

std::vector<double> daily_arrival_schedule(const ScenarioConfig& cfg, Weekday day, long wom_extra,
                                           RandomStream& arrivals) {
    const DaySchedule& d = cfg.calendar.days[static_cast<int>(day)];
    std::vector<double> times;
    if (!d.open)
        return times;

    double base_total = 0.0;
    double left = d.duration() / 60.0;
    for (double r : d.hourly_footfall) {
        base_total += r * std::min(1.0, left);
        left -= 1.0;
    }
    const double target = std::max(0.0, base_total + static_cast<double>(wom_extra));

    left = d.duration() / 60.0;
    double slice_start = d.open_minute;
    for (double r : d.hourly_footfall) {
        const double hours = std::min(1.0, left);
        left -= 1.0;
        double mean;
        if (base_total > 0.0)
            mean = r * hours * (target / base_total);
        else // flat footfall: spread any recruits evenly over the open span
            mean = target * hours / (d.duration() / 60.0);
        const long k = sample_poisson(mean, arrivals);
        for (long i = 0; i < k; ++i)
            times.push_back(slice_start + arrivals.uniform() * hours * 60.0);
        slice_start += hours * 60.0;
    }
    std::sort(times.begin(), times.end());
    return times;
}

std::vector<int> pick_customers(const std::vector<Customer>& pool, int n,
                                const PickPolicy& policy, RandomStream& picks) {
    if (n <= 0)
        return {};
    std::vector<int> resting;
    for (const Customer& c : pool)
        if (c.state == CustomerState::Resting)
            resting.push_back(c.id);

    const std::size_t want = static_cast<std::size_t>(n);

    switch (policy.kind) {
    case PickPolicyKind::Uniform:
        return sample_without_replacement(std::move(resting), want, picks);

    case PickPolicyKind::TypeQuota: {
        std::array<std::vector<int>, kCustomerTypeCount> by_type;
        for (int id : resting)
            by_type[static_cast<int>(pool[id].type)].push_back(id);

        const std::size_t take = std::min(want, resting.size());
        auto targets = apportion(static_cast<double>(take), policy.quota);

        // Types short of resting members push their shortfall onto the rest.
        int shortfall = 0;
        for (int t = 0; t < kCustomerTypeCount; ++t) {
            const int avail = static_cast<int>(by_type[t].size());
            if (targets[t] > avail) {
                shortfall += targets[t] - avail;
                targets[t] = avail;
            }
        }
        while (shortfall > 0) {
            bool moved = false;
            for (int t = 0; t < kCustomerTypeCount && shortfall > 0; ++t) {
                if (targets[t] < static_cast<int>(by_type[t].size())) {
                    targets[t] += 1;
                    shortfall -= 1;
                    moved = true;
                }
            }
            if (!moved)
                break;
        }

        std::vector<int> chosen;
        for (int t = 0; t < kCustomerTypeCount; ++t) {
            auto part = sample_without_replacement(std::move(by_type[t]),
                                                   static_cast<std::size_t>(targets[t]), picks);
            chosen.insert(chosen.end(), part.begin(), part.end());
        }
        // Shuffle so arrival times are not correlated with type.
        const std::size_t all = chosen.size();
        return sample_without_replacement(std::move(chosen), all, picks);
    }

    case PickPolicyKind::SatisfactionBiased: {
        WeightedSampler sampler(resting.size());
        std::vector<double> weight(resting.size());
        for (std::size_t i = 0; i < resting.size(); ++i) {
            weight[i] = static_cast<double>(
                std::max<long long>(1, 1 + pool[resting[i]].lifetime_score));
            sampler.add(i, weight[i]);
        }

        const std::size_t take = std::min(want, resting.size());
        std::vector<int> chosen;
        chosen.reserve(take);
        for (std::size_t k = 0; k < take; ++k) {
            const double total = sampler.total();
            const std::size_t idx = sampler.find(picks.uniform() * total);
            chosen.push_back(resting[idx]);
            sampler.add(idx, -weight[idx]); // no replacement
        }
        return chosen;
    }
    }
    return {};
}

std::vector<int> select_roster(std::vector<Staff>& staff,
                               const std::array<int, kDedicatedRoleCount>& required,
                               RandomStream& staffing) {
    std::array<std::vector<int>, kDedicatedRoleCount> dedicated;
    std::vector<int> part_timers;
    for (const Staff& s : staff) {
        if (s.full_time())
            dedicated[static_cast<int>(s.role)].push_back(s.id);
        else
            part_timers.push_back(s.id);
    }

    std::vector<int> roster;
    int gaps = 0;
    for (int role = 0; role < kDedicatedRoleCount; ++role) {
        const int have = static_cast<int>(dedicated[role].size());
        if (required[role] <= have) {
            auto ids = sample_without_replacement(std::move(dedicated[role]),
                                                  static_cast<std::size_t>(required[role]),
                                                  staffing);
            roster.insert(roster.end(), ids.begin(), ids.end());
        } else {
            roster.insert(roster.end(), dedicated[role].begin(), dedicated[role].end());
            gaps += required[role] - have;
        }
    }
    if (gaps > static_cast<int>(part_timers.size()))
        throw NoStaffConfiguredError("staff pool cannot cover today's requirement: short by " +
                                     std::to_string(gaps - static_cast<int>(part_timers.size())));
    auto pts = sample_without_replacement(std::move(part_timers),
                                          static_cast<std::size_t>(gaps), staffing);
    roster.insert(roster.end(), pts.begin(), pts.end());
    std::sort(roster.begin(), roster.end());
    for (int sid : roster)
        staff[sid].on_duty = true;
    return roster;
}

RunOutput run_replication(const ScenarioConfig& cfg, int replication, const RunOptions& opt) {
    validate(cfg);
    if (opt.days < 1)
        throw ConfigError("run length must be at least one day");

    Streams streams = make_streams(cfg.seed, static_cast<std::uint64_t>(replication));

    RunOutput out;
    out.params = cfg;
    out.replication = replication;
    out.days = opt.days;
    out.daily.reserve(opt.days);

    Department dept;
    dept.cfg = &cfg;
    dept.customers = build_customer_pool(cfg);
    dept.staff = build_staff_pool(cfg);
    dept.out = &out;
    dept.decisions = &streams.decisions;
    dept.delays = &streams.delays;

    for (int day = 0; day < opt.days; ++day) {
        const Weekday wd =
            static_cast<Weekday>((static_cast<int>(cfg.calendar.start_day) + day) % 7);
        const DaySchedule& sched = cfg.calendar.days[static_cast<int>(wd)];

        out.daily.push_back(DailyTally{});
        DailyTally& today = out.daily.back();
        today.day = day + 1;
        today.weekday = wd;
        today.open = sched.open;
        dept.today = &today;
        if (!sched.open)
            continue;

        // Word of mouth: yesterday's net satisfied shoppers recruit extras.
        if (day > 0) {
            const DailyTally& y = out.daily[day - 1];
            today.wom_extra = wom_additional(
                y.epv_class[static_cast<int>(SatisfactionClass::Satisfied)],
                y.epv_class[static_cast<int>(SatisfactionClass::Dissatisfied)], cfg.wom);
        }

        const double day_base = day * 24.0 * 60.0;
        dept.now = day_base + sched.open_minute;
        dept.close_at = day_base + sched.close_minute;

        std::vector<double> times =
            daily_arrival_schedule(cfg, wd, today.wom_extra, streams.arrivals);
        std::vector<int> who = pick_customers(dept.customers, static_cast<int>(times.size()),
                                              cfg.pick_policy, streams.picks);
        times.resize(who.size()); // pool exhausted: latest arrivals are dropped

        dept.roster = select_roster(dept.staff, sched.staff_required, streams.staffing);
        for (int sid : dept.roster)
            dept.staff[sid].rostered_minutes += sched.duration();

        for (std::size_t i = 0; i < who.size(); ++i)
            dept.schedule(day_base + times[i], EventKind::Arrival, who[i]);
        dept.schedule(dept.close_at, EventKind::Close, -1);

        while (!dept.events.empty()) {
            const Event e = dept.events.top();
            dept.events.pop();
            if (e.time < dept.now - 1e-9)
                throw InvariantViolation("event time runs backwards");
            dept.now = std::max(dept.now, e.time);
            handle_event(dept, e);
            if (opt.check_invariants)
                check_department(dept);
        }

        if (dept.in_department != 0)
            throw InvariantViolation("customers left inside after the day finished");
        for (int sid : dept.roster)
            dept.staff[sid].on_duty = false;
        dept.roster.clear();
    }

    for (const Staff& s : dept.staff) {
        if (s.full_time()) {
            out.dedicated_busy_minutes[static_cast<int>(s.role)] += s.busy_minutes;
            out.dedicated_rostered_minutes[static_cast<int>(s.role)] += s.rostered_minutes;
        } else {
            out.pt_busy_minutes += s.busy_minutes;
            out.pt_rostered_minutes += s.rostered_minutes;
        }
    }
    return out;
}

} // namespace retailsim
