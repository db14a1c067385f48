#include "retailsim/metrics.hpp"

#include "csv.hpp"
#include "retailsim/errors.hpp"

#include <json.hpp>

#include <filesystem>

namespace retailsim {

SatisfactionClass classify(long long score, int neutral_band) {
    if (neutral_band < 0)
        throw std::invalid_argument("classify: neutral_band must be non-negative");
    if (score > neutral_band)
        return SatisfactionClass::Satisfied;
    if (score < -static_cast<long long>(neutral_band))
        return SatisfactionClass::Dissatisfied;
    return SatisfactionClass::Neutral;
}

long long record_exit(RunOutput& out, DailyTally& today, const ExitRecord& rec, int neutral_band) {
    const long long lifetime_after = rec.lifetime_before + rec.visit_score;

    out.exits_by_reason[static_cast<int>(rec.reason)] += 1;
    out.csm_ahd[static_cast<int>(classify(lifetime_after, neutral_band))] += 1;
    out.csm_epv[static_cast<int>(classify(rec.visit_score, neutral_band))] += 1;
    out.total_visits += 1;
    out.visit_score_histogram[rec.visit_score] += 1;

    today.exits += 1;
    today.epv_class[static_cast<int>(classify(rec.visit_score, neutral_band))] += 1;
    today.sum_visit_score += rec.visit_score;
    today.sum_lifetime_at_exit += lifetime_after;

    return lifetime_after;
}

void write_outputs(const RunOutput& out, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory: " + dir);

    { // params.csv: run identity plus the full flattened scenario echo
        detail::CsvWriter w(dir + "/params.csv");
        w.row("key", "value");
        w.row("replication", static_cast<long>(out.replication));
        w.row("days", static_cast<long>(out.days));
        const nlohmann::json flat =
            nlohmann::json::parse(scenario_to_json_text(out.params)).flatten();
        for (auto& [key, value] : flat.items())
            w.row("scenario" + key, value.is_string() ? value.get<std::string>() : value.dump());
        w.close();
    }

    { // counters.csv: whole-run totals
        detail::CsvWriter w(dir + "/counters.csv");
        w.row("counter", "value");
        w.row("total_visits", out.total_visits);
        w.row("transactions", out.transactions);
        w.row("refunds_granted", out.refunds_granted);
        for (int i = 0; i < kExitReasonCount; ++i)
            w.row("exits_" + to_string(static_cast<ExitReason>(i)), out.exits_by_reason[i]);
        for (int i = 0; i < 3; ++i)
            w.row("csm_ahd_" + to_string(static_cast<SatisfactionClass>(i)), out.csm_ahd[i]);
        for (int i = 0; i < 3; ++i)
            w.row("csm_epv_" + to_string(static_cast<SatisfactionClass>(i)), out.csm_epv[i]);
        for (int i = 0; i < kQueueKindCount; ++i)
            w.row("queued_" + to_string(static_cast<QueueKind>(i)), out.queue_entered[i]);
        for (int i = 0; i < kQueueKindCount; ++i)
            w.row("reneged_" + to_string(static_cast<QueueKind>(i)), out.queue_reneged[i]);
        for (int i = 0; i < kDedicatedRoleCount; ++i) {
            const std::string role = to_string(static_cast<StaffRole>(i));
            w.row("busy_minutes_" + role, out.dedicated_busy_minutes[i]);
            w.row("rostered_minutes_" + role, out.dedicated_rostered_minutes[i]);
            const double u = out.dedicated_rostered_minutes[i] > 0.0
                                 ? out.dedicated_busy_minutes[i] / out.dedicated_rostered_minutes[i]
                                 : 0.0;
            w.row("utilization_" + role, u);
        }
        w.row("busy_minutes_generic_pt", out.pt_busy_minutes);
        w.row("rostered_minutes_generic_pt", out.pt_rostered_minutes);
        w.row("utilization_generic_pt",
              out.pt_rostered_minutes > 0.0 ? out.pt_busy_minutes / out.pt_rostered_minutes : 0.0);
        w.close();
    }

    { // daily.csv: per-day series plus day-over-day satisfaction growth
        detail::CsvWriter w(dir + "/daily.csv");
        w.row("day", "weekday", "open", "wom_extra", "arrivals", "exits", "transactions",
              "reneges", "epv_satisfied", "epv_neutral", "epv_dissatisfied", "mean_visit_score",
              "mean_lifetime_at_exit", "growth_visit_score", "growth_lifetime");
        bool have_prev = false;
        double prev_visit = 0.0, prev_lifetime = 0.0;
        for (const DailyTally& d : out.daily) {
            w.cell(d.day);
            w.cell(to_string(d.weekday));
            w.cell(d.open ? 1L : 0L);
            w.cell(d.wom_extra);
            w.cell(d.arrivals);
            w.cell(d.exits);
            w.cell(d.transactions);
            w.cell(d.reneges);
            w.cell(d.epv_class[0]);
            w.cell(d.epv_class[1]);
            w.cell(d.epv_class[2]);
            if (d.exits > 0) {
                const double mean_visit = static_cast<double>(d.sum_visit_score) / d.exits;
                const double mean_lifetime = static_cast<double>(d.sum_lifetime_at_exit) / d.exits;
                w.cell(mean_visit);
                w.cell(mean_lifetime);
                if (have_prev) {
                    w.cell(mean_visit - prev_visit);
                    w.cell(mean_lifetime - prev_lifetime);
                } else {
                    w.empty_cell();
                    w.empty_cell();
                }
                prev_visit = mean_visit;
                prev_lifetime = mean_lifetime;
                have_prev = true;
            } else {
                w.empty_cell();
                w.empty_cell();
                w.empty_cell();
                w.empty_cell();
            }
            w.end_row();
        }
        w.close();
    }

    { // score_histogram.csv: distribution of per-visit scores
        detail::CsvWriter w(dir + "/score_histogram.csv");
        w.row("visit_score", "exits");
        for (const auto& [score, n] : out.visit_score_histogram)
            w.row(score, n);
        w.close();
    }
}

} // namespace retailsim
