#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kge/common.hpp"

namespace kge {

// Dense id assignment in first-seen order, string <-> id both ways.
class Vocab {
public:
    std::uint32_t intern(std::string_view name);
    std::optional<std::uint32_t> find(std::string_view name) const;
    const std::string& name(std::uint32_t id) const;
    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::uint32_t> ids_;
};

// Indexed, deduplicated set of (s, p, o) id triples over shared vocabularies.
// Immutable after construction; safe for concurrent reads.
class TripleStore {
public:
    TripleStore() = default;
    TripleStore(std::shared_ptr<const Vocab> entities,
                std::shared_ptr<const Vocab> relations,
                std::vector<Triple> triples);

    std::size_t size() const { return triples_.size(); }
    bool empty() const { return triples_.empty(); }
    std::size_t num_entities() const { return entities_ ? entities_->size() : 0; }
    std::size_t num_relations() const { return relations_ ? relations_->size() : 0; }

    const Vocab& entities() const { return *entities_; }
    const Vocab& relations() const { return *relations_; }
    std::shared_ptr<const Vocab> entities_ptr() const { return entities_; }
    std::shared_ptr<const Vocab> relations_ptr() const { return relations_; }

    const std::vector<Triple>& triples() const { return triples_; }
    const Triple& triple(std::size_t i) const { return triples_[i]; }

    bool contains(EntityId s, RelationId p, EntityId o) const;
    // Objects o with (s, p, o) in the store, sorted ascending.
    std::span<const EntityId> objects_of(EntityId s, RelationId p) const;
    // Subjects s with (s, p, o) in the store, sorted ascending.
    std::span<const EntityId> subjects_of(RelationId p, EntityId o) const;
    // Indices of triples with relation p, in insertion order.
    std::span<const std::uint32_t> triples_with_relation(RelationId p) const;
    // Indices of triples incident to entity e (as subject or object).
    std::span<const std::uint32_t> triples_with_entity(EntityId e) const;

    // Subset of this store (same vocabularies) given triple indices.
    TripleStore subset(std::span<const std::uint32_t> indices) const;

    // Writes one "s\tp\to" line per triple, insertion order, external names.
    void serialize(std::ostream& out) const;
    void serialize_to_file(const std::string& path) const;

private:
    void build_indexes();

    std::shared_ptr<const Vocab> entities_;
    std::shared_ptr<const Vocab> relations_;
    std::vector<Triple> triples_;

    static std::uint64_t pack(std::uint32_t a, std::uint32_t b) {
        return (std::uint64_t(a) << 32) | b;
    }
    std::unordered_map<std::uint64_t, std::vector<EntityId>> by_sp_;
    std::unordered_map<std::uint64_t, std::vector<EntityId>> by_po_;
    std::vector<std::vector<std::uint32_t>> by_p_;
    std::vector<std::vector<std::uint32_t>> by_entity_;
};

// Accumulates triples, dedups, then freezes into a TripleStore.
class TripleStoreBuilder {
public:
    void add(std::string_view s, std::string_view p, std::string_view o);
    // Reads tab-separated s/p/o lines; empty lines skipped. Throws ParseError
    // with the line number on malformed lines.
    void add_stream(std::istream& in, const std::string& source_name = "<stream>");
    void add_file(const std::string& path);

    TripleStore build();

private:
    Vocab entities_;
    Vocab relations_;
    std::vector<Triple> triples_;
    std::unordered_map<Triple, bool, TripleHash> seen_;
};

// Loads one file, or every regular file in a directory (sorted by name).
TripleStore ingest_triples(const std::string& path);
TripleStore ingest_triples(std::istream& in);

// Adds (o, p, s) for every (s, p, o) whose relation name is listed.
// Unknown relation names raise ConfigError. Idempotent.
TripleStore augment_symmetric(const TripleStore& store,
                              const std::vector<std::string>& symmetric_relations);

// Suffix appended to relation names for training-time inverse relations.
inline constexpr const char* kInverseSuffix = "_inv";

// Adds (o, p_inv, s) for every (s, p, o); p_inv = p + |relations|. Doubles
// both the triple count and the relation vocabulary. Rejects stores that
// already carry inverse relations.
TripleStore add_reciprocals(const TripleStore& store);

bool has_reciprocals(const Vocab& relations);

}  // namespace kge
