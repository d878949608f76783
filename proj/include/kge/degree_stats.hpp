#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kge/triple_store.hpp"

namespace kge {

// Node-degree summary for one relation (or "Total" across all relations).
// Degree counts triple incidences: each (s, p, o) adds 1 to s and 1 to o,
// so a self-loop contributes 2 to its node.
struct DegreeRow {
    std::string relation;
    double mean = 0;
    double median = 0;
    double stdev = 0;  // population standard deviation
    std::uint64_t max = 0;
    std::uint64_t min = 0;
};

struct DegreeStats {
    std::vector<DegreeRow> rows;  // "Total" first, then one row per relation

    // CSV with header: relation,mean,median,std,max,min
    void to_csv(std::ostream& out) const;
};

DegreeStats degree_stats(const TripleStore& store);

}  // namespace kge
