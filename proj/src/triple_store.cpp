#include "kge/triple_store.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace kge {

std::uint32_t Vocab::intern(std::string_view name) {
    auto it = ids_.find(std::string(name));
    if (it != ids_.end()) return it->second;
    std::uint32_t id = static_cast<std::uint32_t>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
}

std::optional<std::uint32_t> Vocab::find(std::string_view name) const {
    auto it = ids_.find(std::string(name));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

const std::string& Vocab::name(std::uint32_t id) const {
    if (id >= names_.size()) throw Error("vocab id out of range: " + std::to_string(id));
    return names_[id];
}

TripleStore::TripleStore(std::shared_ptr<const Vocab> entities,
                         std::shared_ptr<const Vocab> relations,
                         std::vector<Triple> triples)
    : entities_(std::move(entities)), relations_(std::move(relations)), triples_(std::move(triples)) {
    for (const Triple& t : triples_) {
        if (t.s >= entities_->size() || t.o >= entities_->size() || t.p >= relations_->size())
            throw Error("triple id out of vocabulary bounds");
    }
    build_indexes();
}

void TripleStore::build_indexes() {
    by_p_.assign(relations_ ? relations_->size() : 0, {});
    by_entity_.assign(entities_ ? entities_->size() : 0, {});
    for (std::uint32_t i = 0; i < triples_.size(); ++i) {
        const Triple& t = triples_[i];
        by_sp_[pack(t.s, t.p)].push_back(t.o);
        by_po_[pack(t.o, t.p)].push_back(t.s);
        by_p_[t.p].push_back(i);
        by_entity_[t.s].push_back(i);
        if (t.o != t.s) by_entity_[t.o].push_back(i);
    }
    for (auto& [k, v] : by_sp_) std::sort(v.begin(), v.end());
    for (auto& [k, v] : by_po_) std::sort(v.begin(), v.end());
}

bool TripleStore::contains(EntityId s, RelationId p, EntityId o) const {
    auto it = by_sp_.find(pack(s, p));
    if (it == by_sp_.end()) return false;
    return std::binary_search(it->second.begin(), it->second.end(), o);
}

std::span<const EntityId> TripleStore::objects_of(EntityId s, RelationId p) const {
    auto it = by_sp_.find(pack(s, p));
    if (it == by_sp_.end()) return {};
    return it->second;
}

std::span<const EntityId> TripleStore::subjects_of(RelationId p, EntityId o) const {
    auto it = by_po_.find(pack(o, p));
    if (it == by_po_.end()) return {};
    return it->second;
}

std::span<const std::uint32_t> TripleStore::triples_with_relation(RelationId p) const {
    if (p >= by_p_.size()) throw Error("relation id out of range: " + std::to_string(p));
    return by_p_[p];
}

std::span<const std::uint32_t> TripleStore::triples_with_entity(EntityId e) const {
    if (e >= by_entity_.size()) throw Error("entity id out of range: " + std::to_string(e));
    return by_entity_[e];
}

TripleStore TripleStore::subset(std::span<const std::uint32_t> indices) const {
    std::vector<Triple> sel;
    sel.reserve(indices.size());
    for (std::uint32_t i : indices) {
        if (i >= triples_.size()) throw Error("triple index out of range");
        sel.push_back(triples_[i]);
    }
    return TripleStore(entities_, relations_, std::move(sel));
}

void TripleStore::serialize(std::ostream& out) const {
    for (const Triple& t : triples_) {
        out << entities_->name(t.s) << '\t' << relations_->name(t.p) << '\t'
            << entities_->name(t.o) << '\n';
    }
}

void TripleStore::serialize_to_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    serialize(out);
}

void TripleStoreBuilder::add(std::string_view s, std::string_view p, std::string_view o) {
    Triple t{entities_.intern(s), relations_.intern(p), entities_.intern(o)};
    if (seen_.emplace(t, true).second) triples_.push_back(t);
}

void TripleStoreBuilder::add_stream(std::istream& in, const std::string& source_name) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t t1 = line.find('\t');
        std::size_t t2 = (t1 == std::string::npos) ? std::string::npos : line.find('\t', t1 + 1);
        std::size_t t3 = (t2 == std::string::npos) ? std::string::npos : line.find('\t', t2 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos || t3 != std::string::npos ||
            t1 == 0 || t2 == t1 + 1 || t2 + 1 == line.size()) {
            throw ParseError(source_name + ":" + std::to_string(lineno) +
                             ": expected exactly 3 tab-separated fields");
        }
        add(std::string_view(line).substr(0, t1),
            std::string_view(line).substr(t1 + 1, t2 - t1 - 1),
            std::string_view(line).substr(t2 + 1));
    }
}

void TripleStoreBuilder::add_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open: " + path);
    add_stream(in, path);
}

TripleStore TripleStoreBuilder::build() {
    auto ents = std::make_shared<Vocab>(std::move(entities_));
    auto rels = std::make_shared<Vocab>(std::move(relations_));
    return TripleStore(std::move(ents), std::move(rels), std::move(triples_));
}

TripleStore ingest_triples(const std::string& path) {
    namespace fs = std::filesystem;
    TripleStoreBuilder b;
    if (fs::is_directory(path)) {
        std::vector<std::string> files;
        for (const auto& e : fs::directory_iterator(path))
            if (e.is_regular_file()) files.push_back(e.path().string());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) b.add_file(f);
    } else {
        b.add_file(path);
    }
    return b.build();
}

TripleStore ingest_triples(std::istream& in) {
    TripleStoreBuilder b;
    b.add_stream(in);
    return b.build();
}

TripleStore augment_symmetric(const TripleStore& store,
                              const std::vector<std::string>& symmetric_relations) {
    std::vector<bool> symmetric(store.num_relations(), false);
    for (const auto& name : symmetric_relations) {
        auto id = store.relations().find(name);
        if (!id) throw ConfigError("unknown symmetric relation: " + name);
        symmetric[*id] = true;
    }
    std::vector<Triple> triples = store.triples();
    std::unordered_map<Triple, bool, TripleHash> seen;
    seen.reserve(triples.size() * 2);
    for (const Triple& t : triples) seen.emplace(t, true);
    for (const Triple& t : store.triples()) {
        if (!symmetric[t.p]) continue;
        Triple rev{t.o, t.p, t.s};
        if (seen.emplace(rev, true).second) triples.push_back(rev);
    }
    return TripleStore(store.entities_ptr(), store.relations_ptr(), std::move(triples));
}

bool has_reciprocals(const Vocab& relations) {
    const std::string suffix = kInverseSuffix;
    for (const auto& name : relations.names()) {
        if (name.size() > suffix.size() &&
            name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
            return true;
    }
    return false;
}

TripleStore add_reciprocals(const TripleStore& store) {
    if (has_reciprocals(store.relations()))
        throw ConfigError("store already carries reciprocal relations");
    const std::uint32_t base = static_cast<std::uint32_t>(store.num_relations());
    auto rels = std::make_shared<Vocab>();
    for (const auto& name : store.relations().names()) rels->intern(name);
    for (const auto& name : store.relations().names()) rels->intern(name + kInverseSuffix);
    std::vector<Triple> triples = store.triples();
    triples.reserve(triples.size() * 2);
    for (const Triple& t : store.triples()) triples.push_back({t.o, t.p + base, t.s});
    return TripleStore(store.entities_ptr(), std::move(rels), std::move(triples));
}

}  // namespace kge
