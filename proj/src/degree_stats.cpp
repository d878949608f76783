#include "kge/degree_stats.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_map>

namespace kge {

namespace {

DegreeRow summarize(const std::string& name,
                    std::unordered_map<EntityId, std::uint64_t>& degrees) {
    DegreeRow row;
    row.relation = name;
    if (degrees.empty()) return row;

    std::vector<std::uint64_t> ds;
    ds.reserve(degrees.size());
    for (const auto& [e, d] : degrees) ds.push_back(d);
    std::sort(ds.begin(), ds.end());

    double sum = 0;
    for (auto d : ds) sum += double(d);
    row.mean = sum / double(ds.size());
    row.min = ds.front();
    row.max = ds.back();
    std::size_t mid = ds.size() / 2;
    row.median = (ds.size() % 2 == 1) ? double(ds[mid])
                                      : 0.5 * (double(ds[mid - 1]) + double(ds[mid]));
    double var = 0;
    for (auto d : ds) var += (double(d) - row.mean) * (double(d) - row.mean);
    row.stdev = std::sqrt(var / double(ds.size()));
    return row;
}

}  // namespace

DegreeStats degree_stats(const TripleStore& store) {
    DegreeStats stats;
    if (store.empty()) return stats;

    std::unordered_map<EntityId, std::uint64_t> total;
    std::vector<std::unordered_map<EntityId, std::uint64_t>> per_rel(store.num_relations());
    for (const Triple& t : store.triples()) {
        total[t.s]++;
        total[t.o]++;
        per_rel[t.p][t.s]++;
        per_rel[t.p][t.o]++;
    }

    stats.rows.push_back(summarize("Total", total));
    for (std::uint32_t p = 0; p < store.num_relations(); ++p) {
        if (per_rel[p].empty()) continue;
        stats.rows.push_back(summarize(store.relations().name(p), per_rel[p]));
    }
    return stats;
}

void DegreeStats::to_csv(std::ostream& out) const {
    out << "relation,mean,median,std,max,min\n";
    for (const auto& r : rows) {
        out << r.relation << ',' << r.mean << ',' << r.median << ',' << r.stdev << ','
            << r.max << ',' << r.min << '\n';
    }
}

}  // namespace kge
