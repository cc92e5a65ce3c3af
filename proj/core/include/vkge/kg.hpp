#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace vkge {

using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

struct Triple {
  EntityId subject = 0;
  RelationId relation = 0;
  EntityId object = 0;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

std::ostream& operator<<(std::ostream& out, const Triple& t);

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    std::uint64_t h = t.subject;
    h = h * 0x9E3779B97F4A7C15ULL + t.relation;
    h = h * 0x9E3779B97F4A7C15ULL + t.object;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

// Dense 0-based ids handed out in first-occurrence order.
class SymbolTable {
 public:
  SymbolTable() = default;
  explicit SymbolTable(std::vector<std::string> names);

  // Returns the id of name, registering it when unseen.
  std::uint32_t intern(std::string_view name);
  // Throws IndexError when absent.
  std::uint32_t id(std::string_view name) const;
  bool contains(std::string_view name) const;
  const std::string& name(std::uint32_t id) const;

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  friend bool operator==(const SymbolTable& a, const SymbolTable& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

struct Vocabulary {
  SymbolTable entities;
  SymbolTable relations;

  std::size_t num_entities() const noexcept { return entities.size(); }
  std::size_t num_relations() const noexcept { return relations.size(); }

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;
};

// Membership test for (s, r, o) over a fixed vocabulary size.
class TruthIndex {
 public:
  TruthIndex() = default;
  TruthIndex(std::size_t num_entities, std::size_t num_relations);

  bool insert(const Triple& t);
  bool contains(const Triple& t) const;
  std::size_t size() const noexcept { return keys_.size(); }

 private:
  std::uint64_t key(const Triple& t) const;

  std::size_t num_entities_ = 0;
  std::size_t num_relations_ = 0;
  std::unordered_set<std::uint64_t> keys_;
};

// An immutable set of facts over a shared vocabulary, with the (s,r)->objects
// and (r,o)->subjects projections used for filtering.
class KnowledgeGraph {
 public:
  KnowledgeGraph() = default;
  // Duplicates are dropped, first occurrence wins. Throws IndexError on ids
  // outside the vocabulary.
  KnowledgeGraph(std::shared_ptr<const Vocabulary> vocab, std::vector<Triple> triples);

  const Vocabulary& vocabulary() const { return *vocab_; }
  std::shared_ptr<const Vocabulary> shared_vocabulary() const { return vocab_; }
  std::span<const Triple> triples() const noexcept { return triples_; }
  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }
  std::size_t num_entities() const { return vocab_ ? vocab_->num_entities() : 0; }
  std::size_t num_relations() const { return vocab_ ? vocab_->num_relations() : 0; }

  bool contains(const Triple& t) const { return truth_.contains(t); }
  const TruthIndex& truth_index() const noexcept { return truth_; }

  // Sorted ascending; empty span when the pair has no facts.
  std::span<const EntityId> objects_of(EntityId subject, RelationId relation) const;
  std::span<const EntityId> subjects_of(RelationId relation, EntityId object) const;

 private:
  std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) const;

  std::shared_ptr<const Vocabulary> vocab_;
  std::vector<Triple> triples_;
  TruthIndex truth_;
  std::unordered_map<std::uint64_t, std::vector<EntityId>> sr_index_;
  std::unordered_map<std::uint64_t, std::vector<EntityId>> ro_index_;
};

struct ParsedTriples {
  Vocabulary vocabulary;
  std::vector<Triple> triples;
};

// Reads "subject<TAB>relation<TAB>object" lines (LF or CRLF, blank lines
// skipped). Throws ParseError naming the line, or "empty dataset".
ParsedTriples parse_triples(std::istream& in);

// Same, registering new symbols in an existing vocabulary. Used to load
// pre-split files against one shared id space.
std::vector<Triple> parse_triples_into(std::istream& in, Vocabulary& vocabulary);

void write_triples(std::ostream& out, const Vocabulary& vocabulary, std::span<const Triple> triples);

// "id<TAB>name" per line.
void write_vocabulary_dump(std::ostream& out, const SymbolTable& symbols);

struct SplitFractions {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;
};

class DatasetSplit {
 public:
  DatasetSplit() = default;
  // Throws UsageError when parts overlap.
  DatasetSplit(std::shared_ptr<const Vocabulary> vocab, std::vector<Triple> train,
               std::vector<Triple> valid, std::vector<Triple> test);

  const Vocabulary& vocabulary() const { return train_.vocabulary(); }
  std::shared_ptr<const Vocabulary> shared_vocabulary() const { return train_.shared_vocabulary(); }
  std::size_t num_entities() const { return train_.num_entities(); }
  std::size_t num_relations() const { return train_.num_relations(); }

  const KnowledgeGraph& train() const noexcept { return train_; }
  const KnowledgeGraph& valid() const noexcept { return valid_; }
  const KnowledgeGraph& test() const noexcept { return test_; }
  // Truth over train ∪ valid ∪ test, with the projections used for filtering.
  const KnowledgeGraph& all_true() const noexcept { return all_; }

 private:
  KnowledgeGraph train_;
  KnowledgeGraph valid_;
  KnowledgeGraph test_;
  KnowledgeGraph all_;
};

// valid/test sizes are floor(fraction * |D|); the remainder goes to train.
// Deterministic in seed. Throws ConfigError on bad fractions or < 10 triples.
DatasetSplit split_dataset(const KnowledgeGraph& kg, const SplitFractions& fractions, std::uint64_t seed);

enum class QuerySide : std::uint8_t {
  kObject,   // (s, r, ?)
  kSubject,  // (?, r, o)
};

struct Query {
  QuerySide side = QuerySide::kObject;
  RelationId relation = 0;
  // The fixed entity: s for kObject, o for kSubject.
  EntityId anchor = 0;

  Triple complete(EntityId candidate) const;
  static Query object_of(const Triple& t) { return {QuerySide::kObject, t.relation, t.subject}; }
  static Query subject_of(const Triple& t) { return {QuerySide::kSubject, t.relation, t.object}; }
};

// All entities except those completing the query to a known-true triple,
// always keeping target. Sorted ascending. Throws UsageError when the query
// completed by target is not a known triple.
std::vector<EntityId> filtered_candidates(const DatasetSplit& split, const Query& query, EntityId target);

}  // namespace vkge
