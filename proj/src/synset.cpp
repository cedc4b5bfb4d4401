#include "lexchain/synset.hpp"

#include <algorithm>
#include <cstdio>

namespace lexchain {

bool is_pos_tag(char c) {
    return std::find(kPosTags.begin(), kPosTags.end(), c) != kPosTags.end();
}

std::string SynsetId::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%c%08u", pos, offset);
    return buf;
}

std::optional<SynsetId> SynsetId::parse(std::string_view text) {
    if (text.size() != 9 || !is_pos_tag(text[0])) return std::nullopt;
    std::uint32_t offset = 0;
    for (std::size_t i = 1; i < 9; ++i) {
        char c = text[i];
        if (c < '0' || c > '9') return std::nullopt;
        offset = offset * 10 + static_cast<std::uint32_t>(c - '0');
    }
    return SynsetId{text[0], offset};
}

namespace {

struct RelationEntry {
    RelationKind kind;
    std::string_view name;
    std::string_view symbol;
};

// Names follow the lexical database's attribute list; symbols are the WNDB
// pointer symbols.
constexpr std::array<RelationEntry, kRelationCount> kRelationTable = {{
    {RelationKind::hypernym, "hypernym", "@"},
    {RelationKind::instance_hypernym, "instance_hypernym", "@i"},
    {RelationKind::hyponym, "hyponym", "~"},
    {RelationKind::instance_hyponym, "instance_hyponym", "~i"},
    {RelationKind::member_holonym, "member_holonym", "#m"},
    {RelationKind::substance_holonym, "substance_holonym", "#s"},
    {RelationKind::part_holonym, "part_holonym", "#p"},
    {RelationKind::member_meronym, "member_meronym", "%m"},
    {RelationKind::substance_meronym, "substance_meronym", "%s"},
    {RelationKind::part_meronym, "part_meronym", "%p"},
    {RelationKind::attribute, "attribute", "="},
    {RelationKind::entailment, "entailment", "*"},
    {RelationKind::cause, "cause", ">"},
    {RelationKind::also_see, "also_see", "^"},
    {RelationKind::verb_group, "verb_group", "$"},
    {RelationKind::similar_to, "similar_to", "&"},
    {RelationKind::topic_domain, "topic_domain", ";c"},
    {RelationKind::region_domain, "region_domain", ";r"},
    {RelationKind::usage_domain, "usage_domain", ";u"},
}};

}  // namespace

std::string_view relation_name(RelationKind kind) {
    return kRelationTable[static_cast<std::size_t>(kind)].name;
}

std::optional<RelationKind> relation_from_name(std::string_view name) {
    for (const auto& entry : kRelationTable) {
        if (entry.name == name) return entry.kind;
    }
    return std::nullopt;
}

std::optional<RelationKind> relation_from_symbol(std::string_view symbol) {
    for (const auto& entry : kRelationTable) {
        if (entry.symbol == symbol) return entry.kind;
    }
    return std::nullopt;
}

std::string strip_gloss_examples(std::string_view raw) {
    std::string_view text = raw;
    if (auto quote = text.find('"'); quote != std::string_view::npos) {
        text = text.substr(0, quote);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == ';')) {
        text.remove_suffix(1);
    }
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    return std::string(text);
}

}  // namespace lexchain
