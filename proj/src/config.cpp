#include "retailsim/config.hpp"

#include "retailsim/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace retailsim {
namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number())
        throw ConfigError(where + " must be a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& where) {
    if (!v.is_number_integer())
        throw ConfigError(where + " must be an integer");
    return v.get<int>();
}

// Accepts "HH:MM" or minutes after midnight as a plain number.
double parse_time(const json& v, const std::string& where) {
    if (v.is_number())
        return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        int h = 0, m = 0;
        char tail = 0;
        if (std::sscanf(s.c_str(), "%d:%d%c", &h, &m, &tail) != 2 || h < 0 || m < 0 || m > 59)
            throw ConfigError(where + ": cannot parse time '" + s + "'");
        return h * 60.0 + m;
    }
    throw ConfigError(where + " must be \"HH:MM\" or minutes as a number");
}

TriangularParams parse_triangular(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 3)
        throw ConfigError(where + " must be [min, mode, max]");
    TriangularParams t;
    t.min = as_number(v[0], where + "[0]");
    t.mode = as_number(v[1], where + "[1]");
    t.max = as_number(v[2], where + "[2]");
    return t;
}

json triangular_to_json(const TriangularParams& t) {
    return json::array({t.min, t.mode, t.max});
}

TypeProfile parse_profile(const json& v, const std::string& where) {
    if (!v.is_object())
        throw ConfigError(where + " must be an object");
    check_keys(v, {"buy", "wait", "ask_help", "ask_refund"}, where);
    TypeProfile p;
    if (v.contains("buy")) p.buy = likelihood_from_string(v["buy"].get<std::string>());
    if (v.contains("wait")) p.wait = likelihood_from_string(v["wait"].get<std::string>());
    if (v.contains("ask_help")) p.ask_help = likelihood_from_string(v["ask_help"].get<std::string>());
    if (v.contains("ask_refund")) p.ask_refund = likelihood_from_string(v["ask_refund"].get<std::string>());
    return p;
}

DaySchedule parse_day(const json& v, const std::string& where) {
    if (!v.is_object())
        throw ConfigError(where + " must be an object");
    check_keys(v, {"open", "close", "hourly_footfall", "staff"}, where);
    DaySchedule d;
    d.open = true;
    if (!v.contains("open") || !v.contains("close"))
        throw ConfigError(where + " needs both 'open' and 'close'");
    d.open_minute = parse_time(v["open"], where + ".open");
    d.close_minute = parse_time(v["close"], where + ".close");
    if (v.contains("hourly_footfall")) {
        const json& hf = v["hourly_footfall"];
        if (!hf.is_array())
            throw ConfigError(where + ".hourly_footfall must be an array");
        for (std::size_t i = 0; i < hf.size(); ++i)
            d.hourly_footfall.push_back(as_number(hf[i], where + ".hourly_footfall entry"));
    }
    if (v.contains("staff")) {
        const json& st = v["staff"];
        if (!st.is_object())
            throw ConfigError(where + ".staff must be an object");
        for (auto it = st.begin(); it != st.end(); ++it) {
            StaffRole role = staff_role_from_string(it.key());
            if (role == StaffRole::GenericPT)
                throw ConfigError(where + ".staff: daily requirements are per dedicated role");
            d.staff_required[static_cast<int>(role)] = as_int(it.value(), where + ".staff." + it.key());
        }
    }
    return d;
}

int number_of_slices(double duration) {
    return static_cast<int>(std::ceil(duration / 60.0 - 1e-9));
}

} // namespace

ScenarioConfig::ScenarioConfig()
    : type_profiles(default_type_profiles()), calendar(default_calendar()) {}

std::array<TypeProfile, kCustomerTypeCount> default_type_profiles() {
    using L = LikelihoodLevel;
    std::array<TypeProfile, kCustomerTypeCount> p;
    p[static_cast<int>(CustomerType::ShoppingEnthusiast)] = {L::High, L::Moderate, L::Moderate, L::Low};
    p[static_cast<int>(CustomerType::SolutionDemander)] = {L::High, L::Low, L::Low, L::Low};
    p[static_cast<int>(CustomerType::ServiceSeeker)] = {L::Moderate, L::High, L::High, L::Low};
    p[static_cast<int>(CustomerType::DisinterestedShopper)] = {L::Low, L::Low, L::Low, L::High};
    p[static_cast<int>(CustomerType::InternetShopper)] = {L::Low, L::High, L::High, L::Low};
    return p;
}

Calendar default_calendar() {
    Calendar cal;
    for (auto& d : cal.days) {
        d.open = true;
        d.open_minute = 9 * 60.0;
        d.close_minute = 19 * 60.0;
        d.hourly_footfall.assign(10, 10.0);
        d.staff_required = {1, 1, 1, 1};
    }
    return cal;
}

void validate(const ScenarioConfig& cfg) {
    if (cfg.pool_size < 1)
        throw ConfigError("pool_size must be at least 1");
    if (cfg.neutral_band < 0)
        throw ConfigError("neutral_band must be non-negative");
    if (cfg.refund_goal_probability < 0.0 || cfg.refund_goal_probability > 1.0)
        throw ConfigError("refund_goal_probability must be in [0, 1]");

    double split_sum = 0.0;
    for (int i = 0; i < kCustomerTypeCount; ++i) {
        if (cfg.type_split[i] < 0.0)
            throw ConfigError("customer_type_split entries must be non-negative");
        split_sum += cfg.type_split[i];
    }
    if (std::abs(split_sum - 1.0) > 1e-9)
        throw ConfigError("customer_type_split must sum to 1");

    const DecisionTable& dt = cfg.decisions;
    for (double p : {dt.purchase_after_browse, dt.requires_help, dt.purchase_after_help,
                     dt.expert_help, dt.refund_granted, dt.reshop_after_refund}) {
        if (p < 0.0 || p > 1.0)
            throw ConfigError("decision_table probabilities must be in [0, 1]");
    }

    auto check_tri = [](const TriangularParams& t, const char* name) {
        if (!(t.min >= 0.0) || !(t.min <= t.mode) || !(t.mode <= t.max))
            throw ConfigError(std::string("delay_table.") + name +
                              " must satisfy 0 <= min <= mode <= max");
    };
    check_tri(cfg.delays.browse, "browse");
    check_tri(cfg.delays.help, "help");
    check_tri(cfg.delays.pay, "pay");
    check_tri(cfg.delays.refund, "refund");
    check_tri(cfg.delays.pay_patience, "pay_patience");
    check_tri(cfg.delays.help_patience, "help_patience");
    check_tri(cfg.delays.refund_patience, "refund_patience");

    if (cfg.pick_policy.kind == PickPolicyKind::TypeQuota) {
        double qsum = 0.0;
        for (double q : cfg.pick_policy.quota) {
            if (q < 0.0)
                throw ConfigError("pick_policy quota shares must be non-negative");
            qsum += q;
        }
        if (qsum <= 0.0)
            throw ConfigError("pick_policy quota shares must not all be zero");
    }

    if (cfg.wom.adoption_fraction < 0.0 || cfg.wom.adoption_fraction > 1.0)
        throw ConfigError("wom.adoption_fraction must be in [0, 1]");
    if (cfg.wom.contact_rate < 0.0)
        throw ConfigError("wom.contact_rate must be non-negative");

    int open_days = 0;
    for (int wd = 0; wd < 7; ++wd) {
        const DaySchedule& d = cfg.calendar.days[wd];
        if (!d.open)
            continue;
        ++open_days;
        const std::string name = to_string(static_cast<Weekday>(wd));
        if (d.open_minute < 0.0 || d.close_minute > 24 * 60.0 || d.open_minute >= d.close_minute)
            throw ConfigError("calendar." + name + ": need 0 <= open < close <= 24:00");
        const int slices = number_of_slices(d.duration());
        if (static_cast<int>(d.hourly_footfall.size()) != slices)
            throw ConfigError("calendar." + name + ": hourly_footfall needs " +
                              std::to_string(slices) + " entries for the opening span");
        for (double r : d.hourly_footfall)
            if (r < 0.0)
                throw ConfigError("calendar." + name + ": hourly_footfall must be non-negative");
        for (int role = 0; role < kDedicatedRoleCount; ++role)
            if (d.staff_required[role] < 0)
                throw ConfigError("calendar." + name + ": staff requirements must be non-negative");
    }
    if (open_days == 0)
        throw ConfigError("calendar must have at least one open day");

    if (cfg.staffing.explicit_sizing) {
        for (int role = 0; role < kDedicatedRoleCount; ++role)
            if (cfg.staffing.full_time[role] < 0)
                throw ConfigError("staffing.full_time counts must be non-negative");
        if (cfg.staffing.part_time < 0)
            throw ConfigError("staffing.part_time must be non-negative");
        for (int wd = 0; wd < 7; ++wd) {
            const DaySchedule& d = cfg.calendar.days[wd];
            if (!d.open)
                continue;
            int gap = 0;
            for (int role = 0; role < kDedicatedRoleCount; ++role)
                gap += std::max(0, d.staff_required[role] - cfg.staffing.full_time[role]);
            if (gap > cfg.staffing.part_time)
                throw ConfigError("staffing cannot cover " + to_string(static_cast<Weekday>(wd)) +
                                  ": short by " + std::to_string(gap - cfg.staffing.part_time));
        }
    }
}

ScenarioConfig scenario_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("scenario must be a JSON object");
    check_keys(j, {"department_name", "pool_size", "seed", "mode", "neutral_band",
                   "refund_goal_probability", "customer_type_split", "customer_type_profiles",
                   "decision_table", "delay_table", "weight_table", "pick_policy", "staffing",
                   "wom", "calendar"},
               "scenario");

    ScenarioConfig cfg;
    if (j.contains("department_name")) cfg.department_name = j["department_name"].get<std::string>();
    if (j.contains("pool_size")) cfg.pool_size = as_int(j["pool_size"], "pool_size");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer() && !j["seed"].is_number_unsigned())
            throw ConfigError("seed must be an integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("mode")) cfg.mode = mode_from_string(j["mode"].get<std::string>());
    if (j.contains("neutral_band")) cfg.neutral_band = as_int(j["neutral_band"], "neutral_band");
    if (j.contains("refund_goal_probability"))
        cfg.refund_goal_probability = as_number(j["refund_goal_probability"], "refund_goal_probability");

    if (j.contains("customer_type_split")) {
        const json& sp = j["customer_type_split"];
        if (!sp.is_object())
            throw ConfigError("customer_type_split must be an object");
        cfg.type_split = {0, 0, 0, 0, 0};
        for (auto it = sp.begin(); it != sp.end(); ++it) {
            CustomerType t = customer_type_from_string(it.key());
            cfg.type_split[static_cast<int>(t)] = as_number(it.value(), "customer_type_split." + it.key());
        }
    }
    if (j.contains("customer_type_profiles")) {
        const json& pr = j["customer_type_profiles"];
        if (!pr.is_object())
            throw ConfigError("customer_type_profiles must be an object");
        for (auto it = pr.begin(); it != pr.end(); ++it) {
            CustomerType t = customer_type_from_string(it.key());
            cfg.type_profiles[static_cast<int>(t)] =
                parse_profile(it.value(), "customer_type_profiles." + it.key());
        }
    }
    if (j.contains("decision_table")) {
        const json& d = j["decision_table"];
        check_keys(d, {"purchase_after_browse", "requires_help", "purchase_after_help",
                       "expert_help", "refund_granted", "reshop_after_refund"},
                   "decision_table");
        DecisionTable& t = cfg.decisions;
        if (d.contains("purchase_after_browse")) t.purchase_after_browse = as_number(d["purchase_after_browse"], "decision_table.purchase_after_browse");
        if (d.contains("requires_help")) t.requires_help = as_number(d["requires_help"], "decision_table.requires_help");
        if (d.contains("purchase_after_help")) t.purchase_after_help = as_number(d["purchase_after_help"], "decision_table.purchase_after_help");
        if (d.contains("expert_help")) t.expert_help = as_number(d["expert_help"], "decision_table.expert_help");
        if (d.contains("refund_granted")) t.refund_granted = as_number(d["refund_granted"], "decision_table.refund_granted");
        if (d.contains("reshop_after_refund")) t.reshop_after_refund = as_number(d["reshop_after_refund"], "decision_table.reshop_after_refund");
    }
    if (j.contains("delay_table")) {
        const json& d = j["delay_table"];
        check_keys(d, {"browse", "help", "pay", "refund", "pay_patience", "help_patience",
                       "refund_patience"},
                   "delay_table");
        DelayTable& t = cfg.delays;
        if (d.contains("browse")) t.browse = parse_triangular(d["browse"], "delay_table.browse");
        if (d.contains("help")) t.help = parse_triangular(d["help"], "delay_table.help");
        if (d.contains("pay")) t.pay = parse_triangular(d["pay"], "delay_table.pay");
        if (d.contains("refund")) t.refund = parse_triangular(d["refund"], "delay_table.refund");
        if (d.contains("pay_patience")) {
            t.pay_patience = parse_triangular(d["pay_patience"], "delay_table.pay_patience");
            // Queue-specific patience falls back to the till value unless given.
            t.help_patience = t.pay_patience;
            t.refund_patience = t.pay_patience;
        }
        if (d.contains("help_patience")) t.help_patience = parse_triangular(d["help_patience"], "delay_table.help_patience");
        if (d.contains("refund_patience")) t.refund_patience = parse_triangular(d["refund_patience"], "delay_table.refund_patience");
    }
    if (j.contains("weight_table")) {
        const json& w = j["weight_table"];
        if (!w.is_object())
            throw ConfigError("weight_table must be an object");
        for (auto it = w.begin(); it != w.end(); ++it) {
            TransitionKind k = transition_from_string(it.key());
            cfg.weights.weight[static_cast<int>(k)] = as_int(it.value(), "weight_table." + it.key());
        }
    }
    if (j.contains("pick_policy")) {
        const json& p = j["pick_policy"];
        if (p.is_string()) {
            const std::string s = p.get<std::string>();
            if (s == "uniform")
                cfg.pick_policy.kind = PickPolicyKind::Uniform;
            else if (s == "satisfaction_biased")
                cfg.pick_policy.kind = PickPolicyKind::SatisfactionBiased;
            else
                throw ConfigError("pick_policy: unknown policy '" + s + "'");
        } else if (p.is_object() && p.contains("type_quota") && p.size() == 1) {
            cfg.pick_policy.kind = PickPolicyKind::TypeQuota;
            const json& q = p["type_quota"];
            if (!q.is_object())
                throw ConfigError("pick_policy.type_quota must be an object");
            for (auto it = q.begin(); it != q.end(); ++it) {
                CustomerType t = customer_type_from_string(it.key());
                cfg.pick_policy.quota[static_cast<int>(t)] =
                    as_number(it.value(), "pick_policy.type_quota." + it.key());
            }
        } else {
            throw ConfigError("pick_policy must be a policy name or {\"type_quota\": {...}}");
        }
    }
    if (j.contains("staffing")) {
        const json& s = j["staffing"];
        if (s.is_string() && s.get<std::string>() == "auto") {
            cfg.staffing.explicit_sizing = false;
        } else if (s.is_object()) {
            check_keys(s, {"full_time", "part_time"}, "staffing");
            cfg.staffing.explicit_sizing = true;
            if (s.contains("full_time")) {
                const json& ft = s["full_time"];
                if (!ft.is_object())
                    throw ConfigError("staffing.full_time must be an object");
                for (auto it = ft.begin(); it != ft.end(); ++it) {
                    StaffRole role = staff_role_from_string(it.key());
                    if (role == StaffRole::GenericPT)
                        throw ConfigError("staffing.full_time: use 'part_time' for the generic pool");
                    cfg.staffing.full_time[static_cast<int>(role)] =
                        as_int(it.value(), "staffing.full_time." + it.key());
                }
            }
            if (s.contains("part_time"))
                cfg.staffing.part_time = as_int(s["part_time"], "staffing.part_time");
        } else {
            throw ConfigError("staffing must be \"auto\" or {full_time, part_time}");
        }
    }
    if (j.contains("wom")) {
        const json& w = j["wom"];
        check_keys(w, {"adoption_fraction", "contact_rate"}, "wom");
        if (w.contains("adoption_fraction")) cfg.wom.adoption_fraction = as_number(w["adoption_fraction"], "wom.adoption_fraction");
        if (w.contains("contact_rate")) cfg.wom.contact_rate = as_number(w["contact_rate"], "wom.contact_rate");
    }
    if (j.contains("calendar")) {
        const json& c = j["calendar"];
        check_keys(c, {"start_day", "days"}, "calendar");
        if (c.contains("start_day"))
            cfg.calendar.start_day = weekday_from_string(c["start_day"].get<std::string>());
        if (c.contains("days")) {
            const json& days = c["days"];
            if (!days.is_object())
                throw ConfigError("calendar.days must be an object");
            for (auto& d : cfg.calendar.days)
                d = DaySchedule{}; // start closed; listed days are the open ones
            for (auto it = days.begin(); it != days.end(); ++it) {
                Weekday wd = weekday_from_string(it.key());
                cfg.calendar.days[static_cast<int>(wd)] =
                    parse_day(it.value(), "calendar.days." + it.key());
            }
        }
    }

    validate(cfg);
    return cfg;
}

std::string scenario_to_json_text(const ScenarioConfig& cfg, int indent) {
    json j;
    j["department_name"] = cfg.department_name;
    j["pool_size"] = cfg.pool_size;
    j["seed"] = cfg.seed;
    j["mode"] = to_string(cfg.mode);
    j["neutral_band"] = cfg.neutral_band;
    j["refund_goal_probability"] = cfg.refund_goal_probability;

    json split = json::object();
    for (int i = 0; i < kCustomerTypeCount; ++i)
        split[to_string(static_cast<CustomerType>(i))] = cfg.type_split[i];
    j["customer_type_split"] = split;

    json profiles = json::object();
    for (int i = 0; i < kCustomerTypeCount; ++i) {
        const TypeProfile& p = cfg.type_profiles[i];
        profiles[to_string(static_cast<CustomerType>(i))] = {
            {"buy", to_string(p.buy)},
            {"wait", to_string(p.wait)},
            {"ask_help", to_string(p.ask_help)},
            {"ask_refund", to_string(p.ask_refund)},
        };
    }
    j["customer_type_profiles"] = profiles;

    j["decision_table"] = {
        {"purchase_after_browse", cfg.decisions.purchase_after_browse},
        {"requires_help", cfg.decisions.requires_help},
        {"purchase_after_help", cfg.decisions.purchase_after_help},
        {"expert_help", cfg.decisions.expert_help},
        {"refund_granted", cfg.decisions.refund_granted},
        {"reshop_after_refund", cfg.decisions.reshop_after_refund},
    };
    j["delay_table"] = {
        {"browse", triangular_to_json(cfg.delays.browse)},
        {"help", triangular_to_json(cfg.delays.help)},
        {"pay", triangular_to_json(cfg.delays.pay)},
        {"refund", triangular_to_json(cfg.delays.refund)},
        {"pay_patience", triangular_to_json(cfg.delays.pay_patience)},
        {"help_patience", triangular_to_json(cfg.delays.help_patience)},
        {"refund_patience", triangular_to_json(cfg.delays.refund_patience)},
    };

    json weights = json::object();
    for (int i = 0; i < kTransitionKindCount; ++i)
        weights[to_string(static_cast<TransitionKind>(i))] = cfg.weights.weight[i];
    j["weight_table"] = weights;

    switch (cfg.pick_policy.kind) {
    case PickPolicyKind::Uniform:
        j["pick_policy"] = "uniform";
        break;
    case PickPolicyKind::SatisfactionBiased:
        j["pick_policy"] = "satisfaction_biased";
        break;
    case PickPolicyKind::TypeQuota: {
        json q = json::object();
        for (int i = 0; i < kCustomerTypeCount; ++i)
            q[to_string(static_cast<CustomerType>(i))] = cfg.pick_policy.quota[i];
        j["pick_policy"] = {{"type_quota", q}};
        break;
    }
    }

    if (cfg.staffing.explicit_sizing) {
        json ft = json::object();
        for (int i = 0; i < kDedicatedRoleCount; ++i)
            ft[to_string(static_cast<StaffRole>(i))] = cfg.staffing.full_time[i];
        j["staffing"] = {{"full_time", ft}, {"part_time", cfg.staffing.part_time}};
    } else {
        j["staffing"] = "auto";
    }

    j["wom"] = {{"adoption_fraction", cfg.wom.adoption_fraction},
                {"contact_rate", cfg.wom.contact_rate}};

    json days = json::object();
    for (int wd = 0; wd < 7; ++wd) {
        const DaySchedule& d = cfg.calendar.days[wd];
        if (!d.open)
            continue;
        json staff = json::object();
        for (int role = 0; role < kDedicatedRoleCount; ++role)
            staff[to_string(static_cast<StaffRole>(role))] = d.staff_required[role];
        days[to_string(static_cast<Weekday>(wd))] = {
            {"open", d.open_minute},
            {"close", d.close_minute},
            {"hourly_footfall", d.hourly_footfall},
            {"staff", staff},
        };
    }
    j["calendar"] = {{"start_day", to_string(cfg.calendar.start_day)}, {"days", days}};

    return j.dump(indent) + "\n";
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return scenario_from_json_text(buf.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void save_scenario(const ScenarioConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write scenario file: " + path);
    out << scenario_to_json_text(cfg);
    if (!out)
        throw IoError("failed while writing scenario file: " + path);
}

ScenarioConfig to_noise_reduction(const ScenarioConfig& cfg) {
    if (cfg.mode == SimMode::NoiseReduction)
        return cfg;
    validate(cfg);

    int n_open = 0;
    double sum_open = 0.0, sum_duration = 0.0, weekly_footfall = 0.0;
    std::array<double, kDedicatedRoleCount> staff_sum{};
    for (const DaySchedule& d : cfg.calendar.days) {
        if (!d.open)
            continue;
        ++n_open;
        sum_open += d.open_minute;
        sum_duration += d.duration();
        double left = d.duration() / 60.0;
        for (double r : d.hourly_footfall) {
            weekly_footfall += r * std::min(1.0, left);
            left -= 1.0;
        }
        for (int role = 0; role < kDedicatedRoleCount; ++role)
            staff_sum[role] += d.staff_required[role];
    }

    const double duration = sum_duration / n_open;
    const double open_minute = sum_open / n_open;
    const double rate = weekly_footfall / (n_open * duration / 60.0);

    DaySchedule uniform;
    uniform.open = true;
    uniform.open_minute = open_minute;
    uniform.close_minute = open_minute + duration;
    uniform.hourly_footfall.assign(number_of_slices(duration), rate);
    for (int role = 0; role < kDedicatedRoleCount; ++role)
        uniform.staff_required[role] = static_cast<int>(std::floor(staff_sum[role] / n_open + 0.5));

    ScenarioConfig out = cfg;
    out.mode = SimMode::NoiseReduction;
    for (int wd = 0; wd < 7; ++wd)
        if (out.calendar.days[wd].open)
            out.calendar.days[wd] = uniform;
    return out;
}

} // namespace retailsim
