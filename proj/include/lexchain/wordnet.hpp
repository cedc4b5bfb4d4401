#ifndef LEXCHAIN_WORDNET_HPP
#define LEXCHAIN_WORDNET_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lexchain/synset.hpp"

namespace lexchain {

// Synset store plus a (lemma, pos) -> ordered sense index.
//
// Immutable once built, so concurrent reads need no synchronization.
// Synsets keep their load order; sense lists keep index-file order, which
// for WNDB is the sense-frequency order the tie-break rules rely on.
// Adjective-satellite senses are indexed in the 'a' bucket together with
// head adjectives, mirroring how surface POS taggers see them.
class LexicalDatabase {
public:
    const Synset* find(SynsetId id) const;
    const Synset& at(SynsetId id) const;  // throws Error naming the id

    std::size_t size() const { return synsets_.size(); }
    bool empty() const { return synsets_.empty(); }
    std::size_t count_pos(char pos) const;

    // Union of the pointer targets of `id` over all 19 relation kinds,
    // plus `id` itself. Sorted and duplicate-free.
    std::vector<SynsetId> related_synsets(SynsetId id) const;

    // Sense list for (lemma, pos) in index order; empty when unknown.
    // pos 's' aliases to the 'a' bucket.
    const std::vector<SynsetId>& senses(const std::string& lemma, char pos) const;
    // Concatenation across pos buckets in n, v, a(+s), r order.
    std::vector<SynsetId> senses(const std::string& lemma) const;

    const std::vector<Synset>& synsets() const { return synsets_; }

    struct LoadStats {
        std::size_t dropped_pointers = 0;  // unsupported symbols + lemma-level
    };
    const LoadStats& stats() const { return stats_; }

    bool operator==(const LexicalDatabase& other) const {
        return synsets_ == other.synsets_ && sense_index_ == other.sense_index_;
    }

private:
    friend class WndbReader;
    friend class PortableReader;
    friend std::string to_portable(const LexicalDatabase&);

    void add_synset(Synset synset);           // throws on duplicate id
    void add_sense(const std::string& lemma, char pos, SynsetId id);
    void index_lemmas_of(const Synset& synset);

    std::vector<Synset> synsets_;
    std::unordered_map<SynsetId, std::size_t, SynsetIdHash> by_id_;
    std::map<std::pair<std::string, char>, std::vector<SynsetId>> sense_index_;
    LoadStats stats_;
};

// Parse a WordNet 3.0 distribution directory holding the eight
// data.{noun,verb,adj,adv} / index.{noun,verb,adj,adv} files.
LexicalDatabase load_wndb(const std::filesystem::path& directory);

// Portable line format used by fixtures and tests:
//   S <pos><offset8> lemma1,lemma2 | gloss text
//   P <pos><offset8> <relation_kind> <pos><offset8>
// with '#'-prefixed comment lines. The sense index is derived from synset
// line order, lemma order within each line.
LexicalDatabase load_portable(const std::filesystem::path& file);
LexicalDatabase parse_portable(std::istream& in, const std::string& name);

void save_portable(const LexicalDatabase& db, const std::filesystem::path& file);
std::string to_portable(const LexicalDatabase& db);

}  // namespace lexchain

#endif
