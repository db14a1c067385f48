#pragma once

#include "retailsim/agents.hpp"
#include "retailsim/engine.hpp"
#include "retailsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testutil {

// One-way ANOVA across groups; returns the p value of the F statistic.
inline double anova_p(const std::vector<std::vector<double>>& groups) {
    std::size_t n = 0;
    double grand = 0.0;
    for (const auto& g : groups) {
        n += g.size();
        for (double x : g)
            grand += x;
    }
    grand /= static_cast<double>(n);
    double ssb = 0.0, ssw = 0.0;
    for (const auto& g : groups) {
        double mean = 0.0;
        for (double x : g)
            mean += x;
        mean /= static_cast<double>(g.size());
        ssb += static_cast<double>(g.size()) * (mean - grand) * (mean - grand);
        for (double x : g)
            ssw += (x - mean) * (x - mean);
    }
    const double d1 = static_cast<double>(groups.size() - 1);
    const double d2 = static_cast<double>(n - groups.size());
    if (ssw == 0.0)
        return ssb == 0.0 ? 1.0 : 0.0;
    const double f = (ssb / d1) / (ssw / d2);
    return 1.0 - retailsim::f_cdf(f, d1, d2);
}

// Kolmogorov-Smirnov statistic of a sample against a CDF.
template <typename Cdf>
double ks_statistic(std::vector<double> xs, Cdf cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

inline double lag1_autocorr(const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs)
        mean += x;
    mean /= static_cast<double>(xs.size());
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        den += (xs[i] - mean) * (xs[i] - mean);
        if (i + 1 < xs.size())
            num += (xs[i] - mean) * (xs[i + 1] - mean);
    }
    return den == 0.0 ? 0.0 : num / den;
}

inline double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs)
        s += x;
    return s / static_cast<double>(xs.size());
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Fresh scratch directory under the system temp root.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    static std::mt19937_64 gen(std::random_device{}());
    namespace fs = std::filesystem;
    const fs::path p = fs::temp_directory_path() /
                       ("retailsim-" + tag + "-" + std::to_string(gen()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

// A Department wired up the way the engine does it, for scripted agent tests:
// one day, absolute clock starting at the day's opening minute.
struct Scripted {
    retailsim::ScenarioConfig cfg;
    retailsim::RunOutput out;
    retailsim::DailyTally today;
    retailsim::RandomStream decisions{1, "decisions", 0};
    retailsim::RandomStream delays{1, "delays", 0};
    retailsim::Department dept;

    explicit Scripted(const retailsim::ScenarioConfig& scenario, int day_index = 0)
        : cfg(scenario) {
        using namespace retailsim;
        validate(cfg);
        out.params = cfg;
        const Weekday wd = cfg.calendar.start_day;
        const DaySchedule& sched = cfg.calendar.days[static_cast<int>(wd)];
        today.day = day_index + 1;
        today.weekday = wd;
        today.open = sched.open;

        dept.cfg = &cfg;
        dept.customers = build_customer_pool(cfg);
        dept.staff = build_staff_pool(cfg);
        dept.out = &out;
        dept.today = &today;
        dept.decisions = &decisions;
        dept.delays = &delays;
        dept.now = day_index * 24.0 * 60.0 + sched.open_minute;
        dept.close_at = day_index * 24.0 * 60.0 + sched.close_minute;

        RandomStream staffing(1, "staffing", 0);
        dept.roster = select_roster(dept.staff, sched.staff_required, staffing);
    }

    retailsim::Customer& customer(int id) { return dept.customers[static_cast<std::size_t>(id)]; }

    // Admit a customer the way an Arrival event does.
    retailsim::BeginVisitResult admit(int id) {
        ++dept.in_department;
        ++today.arrivals;
        return retailsim::begin_visit(dept, customer(id));
    }
};

} // namespace testutil
