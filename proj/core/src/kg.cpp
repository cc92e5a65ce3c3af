#include "vkge/kg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "vkge/error.hpp"
#include "vkge/rng.hpp"

namespace vkge {

std::ostream& operator<<(std::ostream& out, const Triple& t) {
  return out << '(' << t.subject << ", " << t.relation << ", " << t.object << ')';
}

SymbolTable::SymbolTable(std::vector<std::string> names) {
  for (auto& n : names) {
    if (contains(n)) throw UsageError("duplicate symbol name '" + n + "'");
    intern(n);
  }
}

std::uint32_t SymbolTable::intern(std::string_view name) {
  auto [it, inserted] = ids_.try_emplace(std::string(name), static_cast<std::uint32_t>(names_.size()));
  if (inserted) names_.emplace_back(name);
  return it->second;
}

std::uint32_t SymbolTable::id(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) throw IndexError("unknown symbol '" + std::string(name) + "'");
  return it->second;
}

bool SymbolTable::contains(std::string_view name) const { return ids_.count(std::string(name)) != 0; }

const std::string& SymbolTable::name(std::uint32_t id) const {
  if (id >= names_.size()) throw IndexError("symbol id " + std::to_string(id) + " out of range");
  return names_[id];
}

TruthIndex::TruthIndex(std::size_t num_entities, std::size_t num_relations)
    : num_entities_(num_entities), num_relations_(num_relations) {}

std::uint64_t TruthIndex::key(const Triple& t) const {
  return (static_cast<std::uint64_t>(t.subject) * num_relations_ + t.relation) * num_entities_ + t.object;
}

bool TruthIndex::insert(const Triple& t) { return keys_.insert(key(t)).second; }

bool TruthIndex::contains(const Triple& t) const {
  if (t.subject >= num_entities_ || t.object >= num_entities_ || t.relation >= num_relations_) return false;
  return keys_.count(key(t)) != 0;
}

KnowledgeGraph::KnowledgeGraph(std::shared_ptr<const Vocabulary> vocab, std::vector<Triple> triples)
    : vocab_(std::move(vocab)) {
  if (!vocab_) throw UsageError("knowledge graph requires a vocabulary");
  const auto ne = vocab_->num_entities();
  const auto nr = vocab_->num_relations();
  truth_ = TruthIndex(ne, nr);
  triples_.reserve(triples.size());
  for (const auto& t : triples) {
    if (t.subject >= ne || t.object >= ne || t.relation >= nr) {
      throw IndexError("triple (" + std::to_string(t.subject) + ", " + std::to_string(t.relation) + ", " +
                       std::to_string(t.object) + ") outside vocabulary");
    }
    if (!truth_.insert(t)) continue;
    triples_.push_back(t);
    sr_index_[pair_key(t.subject, t.relation)].push_back(t.object);
    ro_index_[pair_key(t.relation, t.object)].push_back(t.subject);
  }
  for (auto& [_, v] : sr_index_) std::sort(v.begin(), v.end());
  for (auto& [_, v] : ro_index_) std::sort(v.begin(), v.end());
}

std::uint64_t KnowledgeGraph::pair_key(std::uint32_t a, std::uint32_t b) const {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::span<const EntityId> KnowledgeGraph::objects_of(EntityId subject, RelationId relation) const {
  auto it = sr_index_.find(pair_key(subject, relation));
  if (it == sr_index_.end()) return {};
  return it->second;
}

std::span<const EntityId> KnowledgeGraph::subjects_of(RelationId relation, EntityId object) const {
  auto it = ro_index_.find(pair_key(relation, object));
  if (it == ro_index_.end()) return {};
  return it->second;
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

}  // namespace

std::vector<Triple> parse_triples_into(std::istream& in, Vocabulary& vocabulary) {
  std::vector<Triple> triples;
  std::unordered_set<Triple, TripleHash> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 3) {
      throw ParseError(line_no, "expected 3 tab-separated fields, got " + std::to_string(fields.size()));
    }
    for (const auto& f : fields) {
      if (f.empty()) throw ParseError(line_no, "empty field");
    }
    Triple t;
    t.subject = vocabulary.entities.intern(fields[0]);
    t.relation = vocabulary.relations.intern(fields[1]);
    t.object = vocabulary.entities.intern(fields[2]);
    if (seen.insert(t).second) triples.push_back(t);
  }
  if (in.bad()) throw ParseError(0, "read error");
  return triples;
}

ParsedTriples parse_triples(std::istream& in) {
  ParsedTriples parsed;
  parsed.triples = parse_triples_into(in, parsed.vocabulary);
  if (parsed.triples.empty()) throw ParseError(0, "empty dataset");
  return parsed;
}

void write_triples(std::ostream& out, const Vocabulary& vocabulary, std::span<const Triple> triples) {
  for (const auto& t : triples) {
    out << vocabulary.entities.name(t.subject) << '\t' << vocabulary.relations.name(t.relation) << '\t'
        << vocabulary.entities.name(t.object) << '\n';
  }
}

void write_vocabulary_dump(std::ostream& out, const SymbolTable& symbols) {
  for (std::uint32_t i = 0; i < symbols.size(); ++i) out << i << '\t' << symbols.name(i) << '\n';
}

DatasetSplit::DatasetSplit(std::shared_ptr<const Vocabulary> vocab, std::vector<Triple> train,
                           std::vector<Triple> valid, std::vector<Triple> test) {
  train_ = KnowledgeGraph(vocab, std::move(train));
  valid_ = KnowledgeGraph(vocab, std::move(valid));
  test_ = KnowledgeGraph(vocab, std::move(test));

  std::vector<Triple> all;
  all.reserve(train_.size() + valid_.size() + test_.size());
  for (const auto* part : {&train_, &valid_, &test_}) {
    all.insert(all.end(), part->triples().begin(), part->triples().end());
  }
  all_ = KnowledgeGraph(vocab, std::move(all));
  if (all_.size() != train_.size() + valid_.size() + test_.size()) {
    throw UsageError("train, valid and test splits overlap");
  }
}

DatasetSplit split_dataset(const KnowledgeGraph& kg, const SplitFractions& fractions, std::uint64_t seed) {
  const std::array<double, 3> f{fractions.train, fractions.valid, fractions.test};
  for (double x : f) {
    if (!(x > 0.0 && x < 1.0)) throw ConfigError("split fractions must each lie in (0, 1)");
  }
  if (std::abs(f[0] + f[1] + f[2] - 1.0) > 1e-9) throw ConfigError("split fractions must sum to 1");
  const std::size_t n = kg.size();
  if (n < 10) throw ConfigError("splitting requires at least 10 triples, got " + std::to_string(n));

  // The small epsilon keeps e.g. 0.1 * 1000 from landing a hair under 100.
  const auto n_valid = static_cast<std::size_t>(std::floor(f[1] * static_cast<double>(n) + 1e-9));
  const auto n_test = static_cast<std::size_t>(std::floor(f[2] * static_cast<double>(n) + 1e-9));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[rng.uniform_below(i)]);
  }

  // 0 = train, 1 = valid, 2 = test; output keeps source order within a part.
  std::vector<std::uint8_t> part(n, 0);
  for (std::size_t i = 0; i < n_valid; ++i) part[order[i]] = 1;
  for (std::size_t i = n_valid; i < n_valid + n_test; ++i) part[order[i]] = 2;

  std::array<std::vector<Triple>, 3> parts;
  const auto triples = kg.triples();
  for (std::size_t i = 0; i < n; ++i) parts[part[i]].push_back(triples[i]);
  return DatasetSplit(kg.shared_vocabulary(), std::move(parts[0]), std::move(parts[1]), std::move(parts[2]));
}

Triple Query::complete(EntityId candidate) const {
  if (side == QuerySide::kObject) return {anchor, relation, candidate};
  return {candidate, relation, anchor};
}

std::vector<EntityId> filtered_candidates(const DatasetSplit& split, const Query& query, EntityId target) {
  const auto& all = split.all_true();
  const auto ne = static_cast<EntityId>(split.num_entities());
  if (target >= ne || query.anchor >= ne || query.relation >= split.num_relations()) {
    throw UsageError("query references ids outside the vocabulary");
  }
  if (!all.contains(query.complete(target))) {
    throw UsageError("query position inconsistent: target does not complete a known triple");
  }
  const auto known =
      query.side == QuerySide::kObject ? all.objects_of(query.anchor, query.relation) : all.subjects_of(query.relation, query.anchor);

  std::vector<EntityId> out;
  out.reserve(ne - known.size() + 1);
  std::size_t k = 0;
  for (EntityId e = 0; e < ne; ++e) {
    while (k < known.size() && known[k] < e) ++k;
    const bool is_known = k < known.size() && known[k] == e;
    if (!is_known || e == target) out.push_back(e);
  }
  return out;
}

}  // namespace vkge
