#include "retailsim/experiment.hpp"

#include "csv.hpp"
#include "retailsim/engine.hpp"
#include "retailsim/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace retailsim {
namespace {

using nlohmann::json;

std::string level_label(const json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
}

std::uint64_t level_master(std::uint64_t master, int level_index, bool crn) {
    if (crn)
        return master;
    std::uint64_t x = master + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(level_index + 1);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

int measure_index(const std::string& name) {
    const auto& names = measure_names();
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end())
        throw ConfigError("unknown measure: '" + name + "'");
    return static_cast<int>(it - names.begin());
}

// Minimal RFC-4180 style line splitter for reading our own files back.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open file: " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        rows.push_back(split_csv_line(line));
    }
    return rows;
}

} // namespace

ExperimentSpec load_experiment_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open experiment spec: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();

    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::exception& e) {
        throw ConfigError(path + ": not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object())
        throw ConfigError(path + ": experiment spec must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        static const std::set<std::string> allowed = {
            "name", "scenario", "mode", "parameter", "levels", "replications",
            "days", "seed", "common_random_numbers", "tests"};
        if (!allowed.count(it.key()))
            throw ConfigError(path + ": unknown key '" + it.key() + "'");
    }

    ExperimentSpec spec;
    if (j.contains("name"))
        spec.name = j["name"].get<std::string>();
    if (!j.contains("scenario"))
        throw ConfigError(path + ": experiment spec needs a 'scenario' path");
    spec.scenario_path = j["scenario"].get<std::string>();

    namespace fs = std::filesystem;
    std::string resolved = spec.scenario_path;
    if (!fs::exists(resolved)) {
        const fs::path alt = fs::path(path).parent_path() / spec.scenario_path;
        if (fs::exists(alt))
            resolved = alt.string();
    }
    spec.base = load_scenario(resolved);

    if (j.contains("mode")) {
        const SimMode m = mode_from_string(j["mode"].get<std::string>());
        if (m == SimMode::NoiseReduction)
            spec.base = to_noise_reduction(spec.base);
        else if (spec.base.mode != SimMode::Normal)
            throw ConfigError(path + ": scenario is already in noise_reduction mode");
    }

    if (!j.contains("parameter") || !j.contains("levels"))
        throw ConfigError(path + ": experiment spec needs 'parameter' and 'levels'");
    spec.parameter = j["parameter"].get<std::string>();
    if (!j["levels"].is_array() || j["levels"].empty())
        throw ConfigError(path + ": 'levels' must be a non-empty array");
    for (const json& v : j["levels"])
        spec.levels.push_back(LevelSpec{level_label(v), v.dump()});

    if (j.contains("replications"))
        spec.replications = j["replications"].get<int>();
    if (spec.replications < 1)
        throw ConfigError(path + ": replications must be at least 1");
    if (j.contains("days"))
        spec.days = j["days"].get<int>();
    if (spec.days < 1)
        throw ConfigError(path + ": days must be at least 1");
    spec.master_seed = j.contains("seed") ? j["seed"].get<std::uint64_t>() : spec.base.seed;
    if (j.contains("common_random_numbers"))
        spec.common_random_numbers = j["common_random_numbers"].get<bool>();

    spec.test_measures = {"customers_per_day", "transactions_per_day"};
    spec.test_pairs = {{0, static_cast<int>(spec.levels.size()) - 1}};
    if (j.contains("tests")) {
        const json& t = j["tests"];
        for (auto it = t.begin(); it != t.end(); ++it)
            if (it.key() != "measures" && it.key() != "pairs")
                throw ConfigError(path + ": unknown key 'tests." + it.key() + "'");
        if (t.contains("measures")) {
            spec.test_measures.clear();
            for (const json& m : t["measures"])
                spec.test_measures.push_back(m.get<std::string>());
        }
        if (t.contains("pairs")) {
            spec.test_pairs.clear();
            for (const json& p : t["pairs"]) {
                if (!p.is_array() || p.size() != 2)
                    throw ConfigError(path + ": each tests.pairs entry must be [a, b]");
                spec.test_pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
            }
        }
    }

    const int L = static_cast<int>(spec.levels.size());
    for (auto [a, b] : spec.test_pairs)
        if (a < 0 || b < 0 || a >= L || b >= L || a == b)
            throw ConfigError(path + ": test pair indices must name two distinct levels");
    for (const std::string& m : spec.test_measures)
        measure_index(m); // validate
    if (!spec.test_measures.empty() && !spec.test_pairs.empty() && spec.replications < 2)
        throw ConfigError(path + ": tests need at least 2 replications");

    // Every level must apply cleanly before any simulation time is spent.
    for (const LevelSpec& lv : spec.levels)
        apply_level(spec.base, spec.parameter, lv.value_json);
    return spec;
}

ScenarioConfig apply_level(const ScenarioConfig& base, const std::string& parameter,
                           const std::string& value_json) {
    json v;
    try {
        v = json::parse(value_json);
    } catch (const json::exception& e) {
        throw ConfigError("bad level value: " + std::string(e.what()));
    }

    ScenarioConfig cfg = base;
    auto num = [&]() -> double {
        if (!v.is_number())
            throw ConfigError("level for '" + parameter + "' must be a number");
        return v.get<double>();
    };

    if (parameter == "pool_size") {
        cfg.pool_size = static_cast<int>(num());
    } else if (parameter == "neutral_band") {
        cfg.neutral_band = static_cast<int>(num());
    } else if (parameter == "refund_goal_probability") {
        cfg.refund_goal_probability = num();
    } else if (parameter == "wom.adoption_fraction") {
        cfg.wom.adoption_fraction = num();
    } else if (parameter == "wom.contact_rate") {
        cfg.wom.contact_rate = num();
    } else if (parameter == "mode") {
        if (!v.is_string())
            throw ConfigError("levels for 'mode' must be mode names");
        const SimMode m = mode_from_string(v.get<std::string>());
        if (m == SimMode::NoiseReduction)
            cfg = to_noise_reduction(base);
        else if (base.mode != SimMode::Normal)
            throw ConfigError("cannot sweep back to normal mode from a noise_reduction scenario");
    } else if (parameter == "pick_policy") {
        if (!v.is_string())
            throw ConfigError("levels for 'pick_policy' must be policy names");
        const std::string s = v.get<std::string>();
        if (s == "uniform")
            cfg.pick_policy = PickPolicy{};
        else if (s == "satisfaction_biased")
            cfg.pick_policy = PickPolicy{PickPolicyKind::SatisfactionBiased, {}};
        else
            throw ConfigError("unknown pick_policy level: '" + s + "'");
    } else if (parameter.rfind("decision_table.", 0) == 0) {
        const std::string key = parameter.substr(std::string("decision_table.").size());
        double* slot = nullptr;
        if (key == "purchase_after_browse") slot = &cfg.decisions.purchase_after_browse;
        else if (key == "requires_help") slot = &cfg.decisions.requires_help;
        else if (key == "purchase_after_help") slot = &cfg.decisions.purchase_after_help;
        else if (key == "expert_help") slot = &cfg.decisions.expert_help;
        else if (key == "refund_granted") slot = &cfg.decisions.refund_granted;
        else if (key == "reshop_after_refund") slot = &cfg.decisions.reshop_after_refund;
        else throw ConfigError("unknown decision_table parameter: '" + key + "'");
        *slot = num();
    } else {
        throw ConfigError("unknown experiment parameter: '" + parameter + "'");
    }
    validate(cfg);
    return cfg;
}

const std::vector<std::string>& measure_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n = {
            "customers_per_day", "transactions_per_day",
            "total_visits", "transactions", "refunds_granted", "mean_visit_score",
        };
        for (int i = 0; i < kExitReasonCount; ++i)
            n.push_back("exits_" + to_string(static_cast<ExitReason>(i)));
        for (int i = 0; i < kExitReasonCount; ++i)
            n.push_back("share_" + to_string(static_cast<ExitReason>(i)));
        for (int i = 0; i < 3; ++i)
            n.push_back("ahd_" + to_string(static_cast<SatisfactionClass>(i)));
        for (int i = 0; i < 3; ++i)
            n.push_back("ahd_share_" + to_string(static_cast<SatisfactionClass>(i)));
        for (int i = 0; i < 3; ++i)
            n.push_back("epv_" + to_string(static_cast<SatisfactionClass>(i)));
        for (int i = 0; i < 3; ++i)
            n.push_back("epv_share_" + to_string(static_cast<SatisfactionClass>(i)));
        for (int i = 0; i < kQueueKindCount; ++i)
            n.push_back("queued_" + to_string(static_cast<QueueKind>(i)));
        for (int i = 0; i < kQueueKindCount; ++i)
            n.push_back("reneged_" + to_string(static_cast<QueueKind>(i)));
        for (int i = 0; i < kQueueKindCount; ++i)
            n.push_back("renege_share_" + to_string(static_cast<QueueKind>(i)));
        for (int i = 0; i < kDedicatedRoleCount; ++i)
            n.push_back("utilization_" + to_string(static_cast<StaffRole>(i)));
        n.push_back("utilization_generic_pt");
        return n;
    }();
    return names;
}

std::vector<double> measure_values(const RunOutput& out) {
    std::vector<double> v;
    v.reserve(measure_names().size());

    int open_days = 0;
    for (const DailyTally& d : out.daily)
        if (d.open)
            ++open_days;
    const double days = std::max(1, open_days);
    const double visits = std::max<long>(1, out.total_visits);

    v.push_back(out.total_visits / days);
    v.push_back(out.transactions / days);
    v.push_back(static_cast<double>(out.total_visits));
    v.push_back(static_cast<double>(out.transactions));
    v.push_back(static_cast<double>(out.refunds_granted));
    double score_sum = 0.0;
    for (const auto& [score, n] : out.visit_score_histogram)
        score_sum += static_cast<double>(score) * static_cast<double>(n);
    v.push_back(score_sum / visits);

    for (int i = 0; i < kExitReasonCount; ++i)
        v.push_back(static_cast<double>(out.exits_by_reason[i]));
    for (int i = 0; i < kExitReasonCount; ++i)
        v.push_back(out.exits_by_reason[i] / visits);
    for (int i = 0; i < 3; ++i)
        v.push_back(static_cast<double>(out.csm_ahd[i]));
    for (int i = 0; i < 3; ++i)
        v.push_back(out.csm_ahd[i] / visits);
    for (int i = 0; i < 3; ++i)
        v.push_back(static_cast<double>(out.csm_epv[i]));
    for (int i = 0; i < 3; ++i)
        v.push_back(out.csm_epv[i] / visits);
    for (int i = 0; i < kQueueKindCount; ++i)
        v.push_back(static_cast<double>(out.queue_entered[i]));
    for (int i = 0; i < kQueueKindCount; ++i)
        v.push_back(static_cast<double>(out.queue_reneged[i]));
    for (int i = 0; i < kQueueKindCount; ++i)
        v.push_back(out.queue_reneged[i] / visits);
    for (int i = 0; i < kDedicatedRoleCount; ++i)
        v.push_back(out.dedicated_rostered_minutes[i] > 0.0
                        ? out.dedicated_busy_minutes[i] / out.dedicated_rostered_minutes[i]
                        : 0.0);
    v.push_back(out.pt_rostered_minutes > 0.0 ? out.pt_busy_minutes / out.pt_rostered_minutes
                                              : 0.0);
    return v;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, int jobs) {
    const int L = static_cast<int>(spec.levels.size());
    const int R = spec.replications;

    ExperimentResult result;
    result.spec = spec;
    result.values.assign(L, std::vector<std::vector<double>>(R));
    result.series.assign(L, {});

    // daily[level][rep] -> per-day (arrivals, transactions)
    std::vector<std::vector<std::vector<std::array<double, 2>>>> daily(
        L, std::vector<std::vector<std::array<double, 2>>>(R));

    // Per-level configs are fixed up front so workers only read them.
    std::vector<ScenarioConfig> level_cfg;
    level_cfg.reserve(L);
    for (int li = 0; li < L; ++li) {
        ScenarioConfig cfg = apply_level(spec.base, spec.parameter, spec.levels[li].value_json);
        cfg.seed = level_master(spec.master_seed, li, spec.common_random_numbers);
        level_cfg.push_back(std::move(cfg));
    }

    const int tasks = L * R;
    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&]() {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= tasks)
                return;
            {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (first_error)
                    return;
            }
            const int li = t / R;
            const int ri = t % R;
            try {
                RunOptions opt;
                opt.days = spec.days;
                const RunOutput out = run_replication(level_cfg[li], ri, opt);
                result.values[li][ri] = measure_values(out);
                auto& dd = daily[li][ri];
                dd.reserve(out.daily.size());
                for (const DailyTally& d : out.daily)
                    dd.push_back({static_cast<double>(d.arrivals),
                                  static_cast<double>(d.transactions)});
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                return;
            }
        }
    };

    const int n_threads = std::max(1, std::min(jobs, tasks));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(n_threads);
        for (int i = 0; i < n_threads; ++i)
            threads.emplace_back(worker);
        for (std::thread& th : threads)
            th.join();
    }
    if (first_error)
        std::rethrow_exception(first_error);

    for (int li = 0; li < L; ++li) {
        result.series[li].assign(spec.days, {0.0, 0.0});
        for (int ri = 0; ri < R; ++ri)
            for (int d = 0; d < spec.days && d < static_cast<int>(daily[li][ri].size()); ++d) {
                result.series[li][d][0] += daily[li][ri][d][0] / R;
                result.series[li][d][1] += daily[li][ri][d][1] / R;
            }
    }

    for (const std::string& m : spec.test_measures) {
        const int mi = measure_index(m);
        for (auto [a, b] : spec.test_pairs) {
            std::vector<double> xa, xb;
            for (int ri = 0; ri < R; ++ri) {
                xa.push_back(result.values[a][ri][mi]);
                xb.push_back(result.values[b][ri][mi]);
            }
            TestRow row;
            row.measure = m;
            row.level_a = a;
            row.level_b = b;
            row.mean_a = describe(xa).mean;
            row.mean_b = describe(xb).mean;
            row.levene = levene_test(xa, xb);
            row.welch = welch_t(xa, xb);
            row.student = student_t(xa, xb);
            // Unequal variances call for Welch's correction.
            const bool unequal = row.levene.p < 0.05;
            row.variant = unequal ? "welch" : "student";
            const TTestResult& chosen = unequal ? row.welch : row.student;
            row.eta2 = eta_squared(chosen.t, chosen.df);
            result.tests.push_back(row);
        }
    }
    return result;
}

void emit_report(const ExperimentResult& result, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory: " + dir);

    const ExperimentSpec& spec = result.spec;
    const int L = static_cast<int>(spec.levels.size());
    const int R = spec.replications;
    const auto& names = measure_names();

    {
        detail::CsvWriter w(dir + "/meta.csv");
        w.row("key", "value");
        w.row("name", spec.name);
        w.row("parameter", spec.parameter);
        w.row("levels", static_cast<long>(L));
        w.row("replications", static_cast<long>(R));
        w.row("days", static_cast<long>(spec.days));
        w.row("seed", spec.master_seed);
        w.row("common_random_numbers", spec.common_random_numbers ? "true" : "false");
        for (int li = 0; li < L; ++li)
            w.row("level_" + std::to_string(li), spec.levels[li].label);
        w.close();
    }

    {
        detail::CsvWriter w(dir + "/runs.csv");
        w.cell("level_index");
        w.cell("level");
        w.cell("replication");
        for (const std::string& n : names)
            w.cell(n);
        w.end_row();
        for (int li = 0; li < L; ++li)
            for (int ri = 0; ri < R; ++ri) {
                w.cell(li);
                w.cell(spec.levels[li].label);
                w.cell(ri);
                for (double v : result.values[li][ri])
                    w.cell(v);
                w.end_row();
            }
        w.close();
    }

    {
        detail::CsvWriter w(dir + "/descriptives.csv");
        w.row("level_index", "level", "measure", "n", "mean", "sd");
        for (int li = 0; li < L; ++li)
            for (std::size_t mi = 0; mi < names.size(); ++mi) {
                std::vector<double> xs;
                xs.reserve(R);
                for (int ri = 0; ri < R; ++ri)
                    xs.push_back(result.values[li][ri][mi]);
                const Descriptives d = describe(xs);
                w.row(li, spec.levels[li].label, names[mi], static_cast<long>(d.n), d.mean, d.sd);
            }
        w.close();
    }

    {
        detail::CsvWriter w(dir + "/tests.csv");
        w.row("measure", "level_a", "level_b", "mean_a", "mean_b", "levene_W", "levene_p",
              "welch_t", "welch_df", "welch_p", "student_t", "student_df", "student_p",
              "variant", "t", "df", "p", "eta_squared", "degenerate");
        for (const TestRow& r : result.tests) {
            const TTestResult& chosen = r.variant == "welch" ? r.welch : r.student;
            w.row(r.measure, spec.levels[r.level_a].label, spec.levels[r.level_b].label,
                  r.mean_a, r.mean_b, r.levene.W, r.levene.p, r.welch.t, r.welch.df, r.welch.p,
                  r.student.t, r.student.df, r.student.p, r.variant, chosen.t, chosen.df,
                  chosen.p, r.eta2, chosen.degenerate ? 1L : 0L);
        }
        w.close();
    }

    {
        detail::CsvWriter w(dir + "/series.csv");
        w.row("level_index", "level", "day", "arrivals_mean", "transactions_mean");
        for (int li = 0; li < L; ++li)
            for (int d = 0; d < static_cast<int>(result.series[li].size()); ++d)
                w.row(li, spec.levels[li].label, d + 1, result.series[li][d][0],
                      result.series[li][d][1]);
        w.close();
    }
}

std::string render_report(const std::string& dir) {
    std::ostringstream out;

    std::map<std::string, std::string> meta;
    std::vector<std::string> level_labels;
    for (const auto& row : read_csv(dir + "/meta.csv")) {
        if (row.size() != 2 || row[0] == "key")
            continue;
        meta[row[0]] = row[1];
        if (row[0].rfind("level_", 0) == 0)
            level_labels.push_back(row[1]);
    }
    out << "Experiment: " << meta["name"] << "\n";
    out << "  parameter " << meta["parameter"] << ", levels:";
    for (const std::string& l : level_labels)
        out << " " << l;
    out << "\n  " << meta["replications"] << " replications x " << meta["days"]
        << " days, seed " << meta["seed"] << ", common random numbers "
        << (meta["common_random_numbers"] == "true" ? "on" : "off") << "\n\n";

    out << "Means by level (mean, sd over replications):\n";
    std::string cur;
    for (const auto& row : read_csv(dir + "/descriptives.csv")) {
        if (row.size() != 6 || row[0] == "level_index")
            continue;
        if (row[1] != cur) {
            cur = row[1];
            out << "  level " << cur << ":\n";
        }
        out << "    " << row[2] << ": " << row[4];
        if (row[5] != "nan")
            out << " (sd " << row[5] << ")";
        out << "\n";
    }

    const auto tests = read_csv(dir + "/tests.csv");
    if (tests.size() > 1) {
        out << "\nTests:\n";
        for (std::size_t i = 1; i < tests.size(); ++i) {
            const auto& r = tests[i];
            if (r.size() < 19)
                continue;
            out << "  " << r[0] << ", " << r[1] << " vs " << r[2] << ": means " << r[3] << " vs "
                << r[4] << "; Levene W=" << r[5] << " p=" << r[6] << "; " << r[13]
                << " t=" << r[14] << " df=" << r[15] << " p=" << r[16] << "; eta^2=" << r[17]
                << "\n";
        }
    }
    return out.str();
}

} // namespace retailsim
