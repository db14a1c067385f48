#include "retailsim/agents.hpp"

#include "retailsim/errors.hpp"

#include <algorithm>
#include <string>

namespace retailsim {
namespace {

CustomerState waiting_state(QueueKind k) {
    switch (k) {
    case QueueKind::Till: return CustomerState::WaitingToPay;
    case QueueKind::NormalHelp: return CustomerState::WaitingNormalHelp;
    case QueueKind::ExpertHelp: return CustomerState::WaitingExpertHelp;
    case QueueKind::RefundDecision: return CustomerState::WaitingRefund;
    }
    return CustomerState::Resting;
}

CustomerState serving_state(QueueKind k) {
    switch (k) {
    case QueueKind::Till: return CustomerState::Paying;
    case QueueKind::NormalHelp: return CustomerState::ReceivingNormalHelp;
    case QueueKind::ExpertHelp: return CustomerState::ReceivingExpertHelp;
    case QueueKind::RefundDecision: return CustomerState::InRefund;
    }
    return CustomerState::Resting;
}

bool is_waiting(CustomerState s) {
    return s == CustomerState::WaitingToPay || s == CustomerState::WaitingNormalHelp ||
           s == CustomerState::WaitingExpertHelp || s == CustomerState::WaitingRefund;
}

bool is_being_served(CustomerState s) {
    return s == CustomerState::Paying || s == CustomerState::ReceivingNormalHelp ||
           s == CustomerState::ReceivingExpertHelp || s == CustomerState::InRefund;
}

const TriangularParams& service_delay(const ScenarioConfig& cfg, QueueKind k) {
    switch (k) {
    case QueueKind::Till: return cfg.delays.pay;
    case QueueKind::NormalHelp: return cfg.delays.help;
    case QueueKind::ExpertHelp: return cfg.delays.help;
    case QueueKind::RefundDecision: return cfg.delays.refund;
    }
    return cfg.delays.pay;
}

const TriangularParams& patience_delay(const ScenarioConfig& cfg, QueueKind k) {
    switch (k) {
    case QueueKind::Till: return cfg.delays.pay_patience;
    case QueueKind::NormalHelp: return cfg.delays.help_patience;
    case QueueKind::ExpertHelp: return cfg.delays.help_patience;
    case QueueKind::RefundDecision: return cfg.delays.refund_patience;
    }
    return cfg.delays.pay_patience;
}

ExitReason renege_reason(QueueKind k) {
    switch (k) {
    case QueueKind::Till: return ExitReason::WhileWaitingToPay;
    case QueueKind::NormalHelp: return ExitReason::BeforeNormalHelp;
    case QueueKind::ExpertHelp: return ExitReason::BeforeExpertHelp;
    case QueueKind::RefundDecision: return ExitReason::BeforeFindingAnything;
    }
    return ExitReason::BeforeFindingAnything;
}

// Dedicated staff ahead of part-timers, lowest id first.
bool staff_order(const Staff& a, const Staff& b) {
    if (a.full_time() != b.full_time())
        return a.full_time();
    return a.id < b.id;
}

// Schedules the end-of-service event; returns its time.
double start_service(Department& dept, Staff& s, Customer& c, QueueKind kind) {
    s.serving = c.id;
    s.serving_kind = kind;
    s.service_start = dept.now;
    c.state = serving_state(kind);
    const TriangularParams tri =
        correct_delay(service_delay(*dept.cfg, kind), dept.profile(c).wait);
    const double end = dept.now + sample_triangular(tri, *dept.delays);
    dept.schedule(end, EventKind::ServiceEnd, c.id, s.id);
    return end;
}

double start_browsing(Department& dept, Customer& c) {
    c.state = CustomerState::Browsing;
    const TriangularParams tri = correct_delay(dept.cfg->delays.browse, dept.profile(c).wait);
    const double end = dept.now + sample_triangular(tri, *dept.delays);
    dept.schedule(end, EventKind::BrowseEnd, c.id);
    return end;
}

} // namespace

void Department::schedule(double time, EventKind kind, int customer, int staff) {
    Event e;
    e.time = time;
    e.seq = next_seq++;
    e.kind = kind;
    e.customer = customer;
    e.epoch = customer >= 0 ? customers[customer].epoch : 0;
    e.staff = staff;
    events.push(e);
}

void add_score(Department& dept, Customer& c, TransitionKind k) {
    c.visit_score += dept.cfg->weights.of(k);
}

void exit_customer(Department& dept, Customer& c, ExitReason reason) {
    ExitRecord rec;
    rec.reason = reason;
    rec.visit_score = c.visit_score;
    rec.lifetime_before = c.lifetime_score;
    c.lifetime_score = record_exit(*dept.out, *dept.today, rec, dept.cfg->neutral_band);
    c.state = CustomerState::Resting;
    c.epoch += 1;
    dept.in_department -= 1;
}

BeginVisitResult begin_visit(Department& dept, Customer& c) {
    c.visits += 1;
    c.visit_score = 0;
    c.purchase_made = false;
    c.wants_refund = corrected_bernoulli(dept.cfg->refund_goal_probability,
                                         dept.profile(c).ask_refund, *dept.decisions);
    BeginVisitResult res;
    res.refund_goal = c.wants_refund;
    if (c.wants_refund) {
        ServiceRequestResult r = request_service(dept, c, QueueKind::RefundDecision);
        res.first_event_time = r.immediate ? r.service_end : r.deadline;
    } else {
        res.first_event_time = start_browsing(dept, c);
    }
    return res;
}

NextStep after_browse(Department& dept, Customer& c) {
    const TypeProfile& p = dept.profile(c);
    if (corrected_bernoulli(dept.cfg->decisions.requires_help, p.ask_help, *dept.decisions)) {
        if (dept.decisions->below(dept.cfg->decisions.expert_help)) {
            request_service(dept, c, QueueKind::ExpertHelp);
            return NextStep::AskedExpertHelp;
        }
        request_service(dept, c, QueueKind::NormalHelp);
        return NextStep::AskedNormalHelp;
    }
    if (corrected_bernoulli(dept.cfg->decisions.purchase_after_browse, p.buy, *dept.decisions)) {
        request_service(dept, c, QueueKind::Till);
        return NextStep::WentToTill;
    }
    add_score(dept, c, TransitionKind::LeftEmptyHanded);
    exit_customer(dept, c, ExitReason::BeforeFindingAnything);
    return NextStep::Exited;
}

ServiceRequestResult request_service(Department& dept, Customer& c, QueueKind kind) {
    Staff* pick = nullptr;
    bool anyone_qualified = false;
    for (int sid : dept.roster) {
        Staff& s = dept.staff[sid];
        if (!s.can_serve(kind))
            continue;
        anyone_qualified = true;
        if (s.serving >= 0)
            continue;
        if (!pick || staff_order(s, *pick))
            pick = &s;
    }

    ServiceRequestResult res;
    if (pick) {
        add_score(dept, c, TransitionKind::ImmediateService);
        res.immediate = true;
        res.staff_id = pick->id;
        res.service_end = start_service(dept, *pick, c, kind);
        return res;
    }
    if (!anyone_qualified)
        throw NoStaffConfiguredError("no rostered staff can serve the " + to_string(kind) +
                                     " queue");

    const TriangularParams tri = correct_delay(patience_delay(*dept.cfg, kind), dept.profile(c).wait);
    QueueEntry entry;
    entry.customer = c.id;
    entry.enqueued_at = dept.now;
    entry.deadline = dept.now + sample_triangular(tri, *dept.delays);
    entry.seq = dept.next_seq++;
    dept.queues[static_cast<int>(kind)].entries.push_back(entry);
    c.state = waiting_state(kind);
    dept.out->queue_entered[static_cast<int>(kind)] += 1;
    dept.schedule(entry.deadline, EventKind::PatienceCheck, c.id);
    res.deadline = entry.deadline;
    return res;
}

std::vector<int> renege_due(Department& dept) {
    std::vector<int> gone;
    for (int k = 0; k < kQueueKindCount; ++k) {
        auto& entries = dept.queues[k].entries;
        for (auto it = entries.begin(); it != entries.end();) {
            if (it->deadline <= dept.now) {
                Customer& c = dept.customers[it->customer];
                it = entries.erase(it);
                add_score(dept, c, TransitionKind::Reneged);
                dept.out->queue_reneged[k] += 1;
                dept.today->reneges += 1;
                exit_customer(dept, c, renege_reason(static_cast<QueueKind>(k)));
                gone.push_back(c.id);
            } else {
                ++it;
            }
        }
    }
    return gone;
}

NextStep complete_service(Department& dept, Staff& s) {
    Customer& c = dept.customers[s.serving];
    const QueueKind kind = s.serving_kind;
    s.busy_minutes += dept.now - s.service_start;
    s.serving = -1;

    add_score(dept, c, TransitionKind::ServiceCompleted);
    NextStep step = NextStep::Exited;
    switch (kind) {
    case QueueKind::Till:
        add_score(dept, c, TransitionKind::PurchaseMade);
        c.purchase_made = true;
        dept.out->transactions += 1;
        dept.today->transactions += 1;
        exit_customer(dept, c, ExitReason::AfterPurchase);
        break;
    case QueueKind::NormalHelp:
    case QueueKind::ExpertHelp:
        if (corrected_bernoulli(dept.cfg->decisions.purchase_after_help, dept.profile(c).buy,
                                *dept.decisions)) {
            request_service(dept, c, QueueKind::Till);
            step = NextStep::WentToTill;
        } else {
            add_score(dept, c, TransitionKind::LeftEmptyHanded);
            exit_customer(dept, c, ExitReason::BeforeFindingAnything);
        }
        break;
    case QueueKind::RefundDecision:
        if (dept.decisions->below(dept.cfg->decisions.refund_granted)) {
            add_score(dept, c, TransitionKind::RefundGranted);
            dept.out->refunds_granted += 1;
            if (corrected_bernoulli(dept.cfg->decisions.reshop_after_refund, dept.profile(c).buy,
                                    *dept.decisions)) {
                start_browsing(dept, c);
                step = NextStep::ResumedBrowsing;
            } else {
                exit_customer(dept, c, ExitReason::BeforeFindingAnything);
            }
        } else {
            add_score(dept, c, TransitionKind::LeftEmptyHanded);
            exit_customer(dept, c, ExitReason::BeforeFindingAnything);
        }
        break;
    }
    dispatch(dept);
    return step;
}

int dispatch(Department& dept) {
    int made = 0;
    bool progress = true;
    while (progress) {
        progress = false;
        std::vector<Staff*> idle;
        for (int sid : dept.roster) {
            Staff& s = dept.staff[sid];
            if (s.serving < 0)
                idle.push_back(&s);
        }
        std::sort(idle.begin(), idle.end(),
                  [](const Staff* a, const Staff* b) { return staff_order(*a, *b); });
        for (Staff* s : idle) {
            int best_kind = -1;
            const QueueEntry* best = nullptr;
            for (int k = 0; k < kQueueKindCount; ++k) {
                if (!s->can_serve(static_cast<QueueKind>(k)))
                    continue;
                const auto& entries = dept.queues[k].entries;
                if (entries.empty())
                    continue;
                const QueueEntry& head = entries.front();
                if (!best || head.enqueued_at < best->enqueued_at ||
                    (head.enqueued_at == best->enqueued_at && head.seq < best->seq)) {
                    best = &head;
                    best_kind = k;
                }
            }
            if (best) {
                QueueEntry entry = *best;
                dept.queues[best_kind].entries.pop_front();
                start_service(dept, *s, dept.customers[entry.customer],
                              static_cast<QueueKind>(best_kind));
                ++made;
                progress = true;
                break; // idle set changed; rebuild it
            }
        }
    }
    return made;
}

std::vector<int> quick_exit_sweep(Department& dept) {
    std::vector<int> swept;
    for (Customer& c : dept.customers) {
        if (c.state == CustomerState::Resting || c.state == CustomerState::WaitingToPay ||
            c.state == CustomerState::Paying)
            continue;

        ExitReason reason = ExitReason::BeforeFindingAnything;
        if (c.state == CustomerState::WaitingNormalHelp)
            reason = ExitReason::BeforeNormalHelp;
        else if (c.state == CustomerState::WaitingExpertHelp)
            reason = ExitReason::BeforeExpertHelp;

        if (is_waiting(c.state)) {
            for (auto& q : dept.queues) {
                auto& e = q.entries;
                e.erase(std::remove_if(e.begin(), e.end(),
                                       [&](const QueueEntry& qe) { return qe.customer == c.id; }),
                        e.end());
            }
        } else if (is_being_served(c.state)) {
            for (int sid : dept.roster) {
                Staff& s = dept.staff[sid];
                if (s.serving == c.id) {
                    s.busy_minutes += dept.now - s.service_start;
                    s.serving = -1;
                }
            }
        }
        add_score(dept, c, TransitionKind::QuickExit);
        exit_customer(dept, c, reason);
        swept.push_back(c.id);
    }
    dispatch(dept); // freed staff can still work the till queue
    return swept;
}

void handle_event(Department& dept, const Event& e) {
    switch (e.kind) {
    case EventKind::Arrival: {
        Customer& c = dept.customers[e.customer];
        if (c.epoch != e.epoch || c.state != CustomerState::Resting)
            return;
        dept.in_department += 1;
        dept.today->arrivals += 1;
        begin_visit(dept, c);
        return;
    }
    case EventKind::BrowseEnd: {
        Customer& c = dept.customers[e.customer];
        if (c.epoch != e.epoch || c.state != CustomerState::Browsing)
            return;
        after_browse(dept, c);
        return;
    }
    case EventKind::PatienceCheck: {
        Customer& c = dept.customers[e.customer];
        if (c.epoch != e.epoch || !is_waiting(c.state))
            return;
        renege_due(dept);
        return;
    }
    case EventKind::ServiceEnd: {
        Staff& s = dept.staff[e.staff];
        if (s.serving != e.customer || dept.customers[e.customer].epoch != e.epoch)
            return;
        complete_service(dept, s);
        return;
    }
    case EventKind::Close:
        quick_exit_sweep(dept);
        return;
    }
}

void check_department(const Department& dept) {
    auto fail = [](const std::string& what) { throw InvariantViolation(what); };

    int inside = 0;
    for (const Customer& c : dept.customers) {
        if (c.state != CustomerState::Resting)
            ++inside;
        if (c.id < 0 || c.id >= static_cast<int>(dept.customers.size()) ||
            &dept.customers[c.id] != &c)
            fail("customer ids must match their pool slots");

        int in_queues = 0, queue_kind = -1;
        for (int k = 0; k < kQueueKindCount; ++k)
            for (const QueueEntry& qe : dept.queues[k].entries)
                if (qe.customer == c.id) {
                    ++in_queues;
                    queue_kind = k;
                }
        int served_by = 0;
        QueueKind served_kind = QueueKind::Till;
        for (const Staff& s : dept.staff)
            if (s.serving == c.id) {
                ++served_by;
                served_kind = s.serving_kind;
            }

        if (is_waiting(c.state)) {
            if (in_queues != 1 || served_by != 0)
                fail("waiting customer must sit in exactly one queue");
            if (waiting_state(static_cast<QueueKind>(queue_kind)) != c.state)
                fail("waiting customer is in the wrong queue");
        } else if (is_being_served(c.state)) {
            if (served_by != 1 || in_queues != 0)
                fail("served customer must have exactly one staff member");
            if (serving_state(served_kind) != c.state)
                fail("served customer state does not match the service kind");
        } else {
            if (in_queues != 0 || served_by != 0)
                fail("resting or browsing customer must not be queued or served");
        }
    }
    if (inside != dept.in_department)
        fail("in-department count does not match customer states");

    std::vector<bool> rostered(dept.staff.size(), false);
    for (int sid : dept.roster) {
        if (sid < 0 || sid >= static_cast<int>(dept.staff.size()) || rostered[sid])
            fail("roster entries must be distinct staff ids");
        rostered[sid] = true;
    }
    for (const Staff& s : dept.staff) {
        if (s.on_duty != rostered[s.id])
            fail("staff on_duty flag must match roster membership");
        if (!s.on_duty && s.serving >= 0)
            fail("off-duty staff cannot be serving");
    }

    for (int k = 0; k < kQueueKindCount; ++k) {
        const auto& entries = dept.queues[k].entries;
        for (const QueueEntry& qe : entries)
            if (qe.deadline < qe.enqueued_at)
                fail("queue entry deadline precedes its enqueue time");
        if (entries.empty())
            continue;
        for (int sid : dept.roster) {
            const Staff& s = dept.staff[sid];
            if (s.serving < 0 && s.can_serve(static_cast<QueueKind>(k)))
                fail("idle staff coexists with a non-empty " +
                     to_string(static_cast<QueueKind>(k)) + " queue");
        }
    }
}

} // namespace retailsim
