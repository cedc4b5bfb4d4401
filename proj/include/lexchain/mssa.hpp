#ifndef LEXCHAIN_MSSA_HPP
#define LEXCHAIN_MSSA_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "lexchain/annotated.hpp"
#include "lexchain/embedding_model.hpp"
#include "lexchain/wordnet.hpp"

namespace lexchain {

struct MssaStats {
    std::size_t dropped_tokens = 0;   // no senses in the database
    std::size_t assigned_senses = 0;
    std::size_t fallback_senses = 0;  // no scorable sense; index 0 used
};

// Sliding 3-token window disambiguation: each token takes the sense whose
// gloss+lemma centroid (in the word model) is most cosine-similar to its
// immediate neighbors' word vectors; absent neighbors contribute 0 and
// score ties resolve to the lowest sense index. Tokens without senses are
// dropped.
AnnotatedDocument disambiguate(const std::vector<std::string>& tokens,
                               const EmbeddingModel& word_vectors, const LexicalDatabase& db,
                               MssaStats* stats = nullptr);

// One recurrent pass: identical scoring, but sense vectors come straight
// from a synset model keyed by "word#offset#pos" (with a gloss-derived
// fallback when the exact key is absent). Iterating N times realizes the
// N-feedback refinement.
AnnotatedDocument refine(const std::vector<std::string>& tokens,
                         const EmbeddingModel& synset_vectors, const LexicalDatabase& db,
                         MssaStats* stats = nullptr);

// Corpus-level variants; documents are independent, so workers > 1 fans
// out across them without changing the result.
std::vector<AnnotatedDocument> disambiguate_corpus(
    const std::vector<std::vector<std::string>>& docs, const EmbeddingModel& word_vectors,
    const LexicalDatabase& db, int workers = 1, MssaStats* stats = nullptr);
std::vector<AnnotatedDocument> refine_corpus(const std::vector<std::vector<std::string>>& docs,
                                             const EmbeddingModel& synset_vectors,
                                             const LexicalDatabase& db, int workers = 1,
                                             MssaStats* stats = nullptr);

}  // namespace lexchain

#endif
