#ifndef LEXCHAIN_CHAINS_HPP
#define LEXCHAIN_CHAINS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "lexchain/annotated.hpp"
#include "lexchain/embedding_model.hpp"
#include "lexchain/wordnet.hpp"

namespace lexchain {

// A run of consecutive document tokens. For flexible chains `related`
// accumulates the union of the members' related-synset sets (the overlap
// test target); fixed chains leave it empty.
struct LexicalChain {
    std::vector<AnnotatedToken> members;
    std::vector<SynsetId> related;  // sorted, duplicate-free
};

// Order-preserving partition of a document into chains, with one
// representative member per chain.
struct ChainedDocument {
    std::vector<LexicalChain> chains;
    std::vector<AnnotatedToken> representatives;
};

// Flexible chains: grow the current chain while the incoming synset's
// related set intersects the chain's accumulated related set; otherwise
// emit a representative and restart. The trailing chain always flushes.
ChainedDocument fllc2(const AnnotatedDocument& doc, const EmbeddingModel& synset_model,
                      const LexicalDatabase& db);

// Fixed chains: consecutive chunks of exactly chunk_size tokens (the final
// chunk keeps whatever remains). chunk_size 1 reduces to the identity.
ChainedDocument fxlc2(const AnnotatedDocument& doc, const EmbeddingModel& synset_model,
                      std::size_t chunk_size);

// The member whose vector is most cosine-similar to the centroid of the
// chain members' vectors; ties go to the earliest position, and a chain
// with no vectors at all falls back to its first member.
AnnotatedToken best_repr(const LexicalChain& chain, const EmbeddingModel& synset_model);

enum class ChainMode { flexible, fixed };

struct ChainParams {
    ChainMode mode = ChainMode::flexible;
    std::size_t chunk_size = 2;  // fixed mode only
};

// Replaces every document by its representatives sequence, labels intact.
// `db` is required in flexible mode and ignored in fixed mode.
AnnotatedCorpus chain_corpus(const AnnotatedCorpus& corpus, const ChainParams& params,
                             const EmbeddingModel& synset_model, const LexicalDatabase* db);

}  // namespace lexchain

#endif
