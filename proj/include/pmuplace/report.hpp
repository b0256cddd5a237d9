#pragma once

#include <string>
#include <vector>

#include "pmuplace/observability.hpp"

namespace pmuplace {

enum class SolveStatus {
    Optimal,          // proven optimum (bip) or converged binary observable point (nlp)
    Infeasible,
    IterationLimit,   // node or iteration budget exhausted
    NonBinary,        // nlp converged but some coordinate is far from {0,1}
    RoundingFailed,   // rounded placement is not observable
    Stalled,          // line search and restoration both stopped making progress
};

inline const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::IterationLimit: return "iteration-limit";
        case SolveStatus::NonBinary: return "non-binary";
        case SolveStatus::RoundingFailed: return "rounding-failed";
        case SolveStatus::Stalled: return "stalled";
    }
    return "unknown";
}

inline bool is_success(SolveStatus s) { return s == SolveStatus::Optimal; }

struct IterationRecord {
    int iter = 0;
    double objective = 0;       // continuous J at the accepted point
    double max_violation = 0;   // max |f_i| before the step
    double step_norm = 0;
    double alpha = 0;
    double merit_before = 0;    // both merits measured with the same penalty
    double merit_after = 0;
    double penalty = 0;
    int rows_kept = 0;
    bool restoration = false;
};

struct ResidualSummary {
    double max_violation = 0;   // nlp: max |f_i| at the final continuous point
    double kkt = 0;             // nlp: projected stationarity residual
    double bound_gap = 0;       // bip: incumbent minus best open bound at exit
    double binarity = 0;        // nlp: max distance of any coordinate from {0,1}
};

struct SolveReport {
    std::string method;            // "bip" | "nlp"
    Placement placement;           // binary result (rounded for nlp)
    ContinuousPoint x;             // final continuous point (nlp) or binary copy (bip)
    double objective = 0;          // sum of w_i over placed buses
    SolveStatus status = SolveStatus::IterationLimit;
    long long nodes = 0;           // bip: processed nodes; nlp: accepted iterations
    ResidualSummary residuals;
    std::vector<IterationRecord> trace;
    int start_index = 0;           // which multistart point produced this (1-based)
};

}  // namespace pmuplace
