#ifndef LEXCHAIN_ANNOTATED_HPP
#define LEXCHAIN_ANNOTATED_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lexchain/synset.hpp"

namespace lexchain {

// One disambiguated token: the lowercase surface word plus its word-sense.
// Renders as "word#offset8#pos"; parsing the rendering recovers the fields.
struct AnnotatedToken {
    std::string word;
    SynsetId synset;

    std::string str() const;
    static std::optional<AnnotatedToken> parse(std::string_view text);

    bool operator==(const AnnotatedToken&) const = default;
};

struct AnnotatedDocument {
    std::vector<AnnotatedToken> tokens;
    std::string label;  // empty when the corpus is unlabeled

    bool operator==(const AnnotatedDocument&) const = default;
};

using AnnotatedCorpus = std::vector<AnnotatedDocument>;

// Corpus file: one document per line, tokens space-separated, with an
// optional leading "label<TAB>" prefix.
AnnotatedCorpus load_annotated_corpus(const std::filesystem::path& path);
AnnotatedCorpus parse_annotated_corpus(std::istream& in, const std::string& name);
void save_annotated_corpus(const AnnotatedCorpus& corpus, const std::filesystem::path& path);
std::string to_corpus_text(const AnnotatedCorpus& corpus);

}  // namespace lexchain

#endif
