#ifndef LEXCHAIN_SYNSET_HPP
#define LEXCHAIN_SYNSET_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lexchain {

// Part-of-speech tags carried by synsets: noun, verb, adjective,
// adjective satellite, adverb.
inline constexpr std::array<char, 5> kPosTags = {'n', 'v', 'a', 's', 'r'};

bool is_pos_tag(char c);

// (pos, offset) pair identifying one synset within a database version.
// The offset renders as an 8-digit zero-filled decimal: "n00001740".
struct SynsetId {
    char pos = 'n';
    std::uint32_t offset = 0;

    auto operator<=>(const SynsetId&) const = default;

    std::string str() const;
    static std::optional<SynsetId> parse(std::string_view text);
};

struct SynsetIdHash {
    std::size_t operator()(const SynsetId& id) const {
        return std::hash<std::uint64_t>{}(
            (static_cast<std::uint64_t>(static_cast<unsigned char>(id.pos)) << 32) | id.offset);
    }
};

// The 19 semantic pointer kinds followed when expanding a synset's
// neighborhood. Closed set; everything else a database carries is dropped
// at parse time.
enum class RelationKind : std::uint8_t {
    hypernym,
    instance_hypernym,
    hyponym,
    instance_hyponym,
    member_holonym,
    substance_holonym,
    part_holonym,
    member_meronym,
    substance_meronym,
    part_meronym,
    attribute,
    entailment,
    cause,
    also_see,
    verb_group,
    similar_to,
    topic_domain,
    region_domain,
    usage_domain,
};

inline constexpr std::size_t kRelationCount = 19;

std::string_view relation_name(RelationKind kind);
std::optional<RelationKind> relation_from_name(std::string_view name);

// WNDB pointer_symbol ("@", "~i", ";c", ...) to kind. nullopt for the
// symbols outside the supported set (antonyms, derivations, pertainyms...).
std::optional<RelationKind> relation_from_symbol(std::string_view symbol);

struct Synset {
    SynsetId id;
    std::vector<std::string> lemmas;  // lowercase, underscores join multiwords
    std::string gloss;                // definition only, quoted examples stripped
    std::vector<std::pair<RelationKind, SynsetId>> pointers;

    bool operator==(const Synset&) const = default;
};

// Definition segment of a raw gloss: text before the first quoted example,
// with trailing separators trimmed.
std::string strip_gloss_examples(std::string_view raw);

}  // namespace lexchain

#endif
