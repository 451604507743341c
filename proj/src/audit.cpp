#include "framekit/audit.hpp"

#include <algorithm>
#include <cmath>

namespace framekit {

double audit_tolerance(double rhs) { return 1e-9 * std::max(1.0, std::abs(rhs)); }

bool strictly_below(double x, double bound) {
    return x < bound - 1e-12 * std::max(1.0, std::abs(bound));
}

BoundAudit make_audit(std::string name, double lhs, double rhs, bool preconditions_met) {
    BoundAudit a;
    a.name = std::move(name);
    a.lhs = lhs;
    a.rhs = rhs;
    a.preconditions_met = preconditions_met;
    a.slack = rhs - lhs;
    a.holds = preconditions_met && lhs <= rhs + audit_tolerance(rhs);
    return a;
}

BoundAudit not_applicable(std::string name, double lhs, double rhs) {
    return make_audit(std::move(name), lhs, rhs, false);
}

Verdict verdict(const BoundAudit& a) {
    if (!a.preconditions_met) return Verdict::NotApplicable;
    return a.holds ? Verdict::Holds : Verdict::Violated;
}

bool is_informational(const BoundAudit& a) { return a.name.rfind("info.", 0) == 0; }

AuditTally tally(const std::vector<BoundAudit>& audits) {
    AuditTally t;
    for (const auto& a : audits) {
        if (is_informational(a)) continue;
        switch (verdict(a)) {
        case Verdict::Holds:
            ++t.applicable;
            ++t.holds;
            break;
        case Verdict::Violated:
            ++t.applicable;
            ++t.violated;
            break;
        case Verdict::NotApplicable:
            ++t.not_applicable;
            break;
        }
    }
    return t;
}

} // namespace framekit
