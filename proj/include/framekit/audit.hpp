#pragma once

#include <string>
#include <vector>

namespace framekit {

/// One named inequality lhs <= rhs evaluated on an instance.
///
/// An audit whose hypotheses fail is "not applicable": preconditions_met is
/// false and holds is false, and it is never counted as a violation.
/// Names starting with "info." carry reported quantities that are not
/// theorem-backed; they never affect exit codes.
struct BoundAudit {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool preconditions_met = false;
    bool holds = false;
    double slack = 0.0;
};

enum class Verdict { Holds, Violated, NotApplicable };

/// Absolute slack allowed on top of rhs: 1e-9 * max(1, |rhs|).
double audit_tolerance(double rhs);

/// Strict hypothesis x < bound, with a relative margin of 1e-12 so that
/// boundary cases (x == bound up to round-off) are never treated as met.
bool strictly_below(double x, double bound);

BoundAudit make_audit(std::string name, double lhs, double rhs, bool preconditions_met = true);

BoundAudit not_applicable(std::string name, double lhs = 0.0, double rhs = 0.0);

Verdict verdict(const BoundAudit& a);

bool is_informational(const BoundAudit& a);

struct AuditTally {
    int applicable = 0;
    int holds = 0;
    int violated = 0;
    int not_applicable = 0;
};

/// Counts theorem-backed audits only.
AuditTally tally(const std::vector<BoundAudit>& audits);

} // namespace framekit
