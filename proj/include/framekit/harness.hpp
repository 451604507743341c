#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "framekit/approx_dual.hpp"
#include "framekit/audit.hpp"
#include "framekit/frame.hpp"

namespace framekit {

/// Audit families selectable from the command line.
enum class AuditKind {
    Gap11,
    Per1200DQuad,
    Per1200CQuad,
    Per1200Mu,
    Dis,
    Cad,
    PropDis,
    BestApp,
    DQuad,
    CQuad,
    Gamma,
};

/// Comma-separated names; "all" and "mu-only" are accepted aliases.
/// Throws InputError on an unknown name.
std::set<AuditKind> parse_kinds(const std::string& list);

const char* kind_name(AuditKind k);

struct PerturbInputs {
    ApproxDualParams p1;              ///< for F
    std::optional<CMatrix> A2;        ///< defaults to p1.A
    std::optional<CMatrix> lambda;    ///< kernel-valued for G; drawn at random when absent
    int best_app_trials = 100;
    std::uint64_t seed = 42;
};

/// Runs the selected audits. Failed hypotheses come back as not-applicable.
std::vector<BoundAudit> run_perturb_audits(const Frame& f, const Frame& g, const PerturbInputs& in,
                                           const std::set<AuditKind>& kinds,
                                           const TolerancePolicy& tol = {});

struct TrialAudit {
    int trial = 0;
    BoundAudit audit;
};

struct CorpusResult {
    std::vector<TrialAudit> audits;  ///< sorted by name, then trial
    std::map<std::string, AuditTally> per_name;
    AuditTally totals;               ///< theorem-backed audits only
    int minimal_norm_flagged = 0;
};

/// Random frames, admissible (A, Theta) pairs, redundant pairs, and Gabor
/// systems, all drawn from named streams of `seed`.
CorpusResult run_corpus(std::uint64_t seed, int trials, const TolerancePolicy& tol = {});

} // namespace framekit
