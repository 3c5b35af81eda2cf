#pragma once

// Shared record type for every estimate checker: the two sides of an
// inequality, the worst signed defect over the scanned set, where it happened,
// and the verdict at the stated tolerance (pass <=> worst_defect >= -tolerance).

#include <string>

namespace lmc {

struct EstimateReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double worst_defect = 0.0;  // negative part of (rhs - lhs) convention per check
    int loc_i = -1;
    int loc_j = -1;
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

inline EstimateReport finish_report(EstimateReport r) {
    r.pass = r.worst_defect >= -r.tolerance;
    return r;
}

}  // namespace lmc
