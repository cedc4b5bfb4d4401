#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "lexchain/chains.hpp"
#include "lexchain/error.hpp"

using namespace lexchain;

namespace {

LexicalDatabase db_from(const std::string& text) {
    std::istringstream in(text);
    return parse_portable(in, "inline");
}

AnnotatedToken tok(const std::string& word, char pos, std::uint32_t offset) {
    return AnnotatedToken{word, {pos, offset}};
}

std::vector<AnnotatedToken> all_members(const ChainedDocument& doc) {
    std::vector<AnnotatedToken> out;
    for (const LexicalChain& chain : doc.chains)
        out.insert(out.end(), chain.members.begin(), chain.members.end());
    return out;
}

// independent argmax for the representative rule
AnnotatedToken oracle_repr(const std::vector<AnnotatedToken>& members,
                           const EmbeddingModel& tsm) {
    std::vector<const Vector*> vs;
    std::vector<std::size_t> who;
    for (std::size_t i = 0; i < members.size(); ++i) {
        const Vector* v = tsm.find(members[i].str());
        if (!v) continue;
        double n2 = 0;
        for (float x : *v) n2 += static_cast<double>(x) * x;
        if (n2 == 0.0) continue;
        vs.push_back(v);
        who.push_back(i);
    }
    if (vs.empty()) return members.front();

    const std::size_t dim = vs[0]->size();
    std::vector<double> sum(dim, 0.0);
    for (const Vector* v : vs)
        for (std::size_t d = 0; d < dim; ++d) sum[d] += (*v)[d];
    Vector center(dim);
    for (std::size_t d = 0; d < dim; ++d)
        center[d] = static_cast<float>(sum[d] / static_cast<double>(vs.size()));

    double center_n2 = 0;
    for (float x : center) center_n2 += static_cast<double>(x) * x;
    if (center_n2 == 0.0) return members[who[0]];

    std::size_t best = 0;
    double best_score = 0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        double dot = 0, na = 0, nb = 0;
        for (std::size_t d = 0; d < dim; ++d) {
            dot += static_cast<double>((*vs[i])[d]) * center[d];
            na += static_cast<double>((*vs[i])[d]) * (*vs[i])[d];
            nb += static_cast<double>(center[d]) * center[d];
        }
        const double score = std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
        if (i == 0 || score > best_score) {
            best = i;
            best_score = score;
        }
    }
    return members[who[best]];
}

}  // namespace

TEST_CASE("flexible chains split exactly where related sets stop overlapping") {
    const LexicalDatabase db = db_from(
        "S n00000001 a | t\n"
        "S n00000002 b | t\n"
        "S n00000003 c | t\n"
        "S n00000010 x | t\n"
        "P n00000001 hypernym n00000010\n"
        "P n00000002 also_see n00000010\n");
    const EmbeddingModel tsm(2);
    AnnotatedDocument doc;
    doc.tokens = {tok("a", 'n', 1), tok("b", 'n', 2), tok("c", 'n', 3)};

    const ChainedDocument chained = fllc2(doc, tsm, db);
    REQUIRE(chained.chains.size() == 2);
    CHECK(chained.chains[0].members == std::vector<AnnotatedToken>{doc.tokens[0], doc.tokens[1]});
    CHECK(chained.chains[1].members == std::vector<AnnotatedToken>{doc.tokens[2]});
    REQUIRE(chained.representatives.size() == 2);
    // empty model: representatives fall back to the first members
    CHECK(chained.representatives[0] == doc.tokens[0]);
    CHECK(chained.representatives[1] == doc.tokens[2]);
}

TEST_CASE("chaining is transitive through the accumulated union") {
    // a~x, b~x and b~y, c~y: the chain keeps growing because the union
    // retains x and y even after the newest member stops sharing them.
    const LexicalDatabase db = db_from(
        "S n00000001 a | t\n"
        "S n00000002 b | t\n"
        "S n00000003 c | t\n"
        "S n00000010 x | t\n"
        "S n00000011 y | t\n"
        "P n00000001 hypernym n00000010\n"
        "P n00000002 part_holonym n00000010\n"
        "P n00000002 part_meronym n00000011\n"
        "P n00000003 hypernym n00000011\n");
    const EmbeddingModel tsm(2);
    AnnotatedDocument doc;
    doc.tokens = {tok("a", 'n', 1), tok("b", 'n', 2), tok("c", 'n', 3)};
    const ChainedDocument chained = fllc2(doc, tsm, db);
    CHECK(chained.chains.size() == 1);
    CHECK(chained.chains[0].members.size() == 3);
}

TEST_CASE("documents with no overlaps become singleton chains") {
    const LexicalDatabase db = db_from(
        "S n00000001 a | t\n"
        "S n00000002 b | t\n"
        "S n00000003 c | t\n");
    const EmbeddingModel tsm(2);
    AnnotatedDocument doc;
    doc.tokens = {tok("a", 'n', 1), tok("b", 'n', 2), tok("c", 'n', 3)};
    const ChainedDocument chained = fllc2(doc, tsm, db);
    CHECK(chained.chains.size() == 3);
    CHECK(chained.representatives == doc.tokens);
}

TEST_CASE("trailing flush covers single-token and fully-chained documents") {
    const LexicalDatabase db = db_from("S n00000001 a | t\n");
    const EmbeddingModel tsm(2);
    AnnotatedDocument doc;
    doc.tokens = {tok("a", 'n', 1)};
    const ChainedDocument one = fllc2(doc, tsm, db);
    REQUIRE(one.chains.size() == 1);
    CHECK(one.representatives == doc.tokens);

    doc.tokens = {tok("a", 'n', 1), tok("a", 'n', 1), tok("a", 'n', 1)};
    const ChainedDocument merged = fllc2(doc, tsm, db);
    CHECK(merged.chains.size() == 1);  // everything lands in one chain
    CHECK(merged.chains[0].members.size() == 3);

    CHECK(fllc2(AnnotatedDocument{}, tsm, db).chains.empty());
}

TEST_CASE("fixed chains obey the ceiling law and reconstruct the input") {
    const EmbeddingModel tsm(2);
    for (std::size_t n = 0; n <= 64; ++n) {
        AnnotatedDocument doc;
        for (std::size_t i = 0; i < n; ++i)
            doc.tokens.push_back(tok("w" + std::to_string(i), 'n', 1 + i));
        for (std::size_t cs = 1; cs <= 9; ++cs) {
            const ChainedDocument chained = fxlc2(doc, tsm, cs);
            CHECK(chained.chains.size() == (n + cs - 1) / cs);
            CHECK(all_members(chained) == doc.tokens);
            CHECK(chained.representatives.size() == chained.chains.size());
            if (cs == 1) CHECK(chained.representatives == doc.tokens);
        }
    }
}

TEST_CASE("fixed chunk sizes match the worked examples") {
    const EmbeddingModel tsm(2);
    AnnotatedDocument doc;
    for (std::size_t i = 0; i < 8; ++i) doc.tokens.push_back(tok("w" + std::to_string(i), 'n', i + 1));
    const ChainedDocument by3 = fxlc2(doc, tsm, 3);
    REQUIRE(by3.chains.size() == 3);
    CHECK(by3.chains[0].members.size() == 3);
    CHECK(by3.chains[1].members.size() == 3);
    CHECK(by3.chains[2].members.size() == 2);

    doc.tokens.resize(7);
    const ChainedDocument by4 = fxlc2(doc, tsm, 4);
    REQUIRE(by4.chains.size() == 2);
    CHECK(by4.chains[0].members.size() == 4);
    CHECK(by4.chains[1].members.size() == 3);

    CHECK_THROWS_WITH_AS(fxlc2(doc, tsm, 0), doctest::Contains("chunk_size"), Error);
}

TEST_CASE("best_repr picks the member closest to the centroid") {
    EmbeddingModel tsm(2);
    tsm.insert("s1#00000001#n", Vector{1.0f, 0.0f});
    tsm.insert("s2#00000002#n", Vector{0.0f, 1.0f});
    tsm.insert("s3#00000003#n", Vector{0.7071f, 0.7071f});

    LexicalChain chain;
    chain.members = {tok("s1", 'n', 1), tok("s2", 'n', 2), tok("s3", 'n', 3)};
    CHECK(best_repr(chain, tsm) == chain.members[2]);

    SUBCASE("singleton chain") {
        LexicalChain one;
        one.members = {tok("s2", 'n', 2)};
        CHECK(best_repr(one, tsm) == one.members[0]);
    }
    SUBCASE("no member in the model: first member") {
        LexicalChain oov;
        oov.members = {tok("zz", 'n', 9), tok("yy", 'n', 8)};
        CHECK(best_repr(oov, tsm) == oov.members[0]);
    }
    SUBCASE("exact score ties resolve to the earliest position") {
        LexicalChain dup;
        dup.members = {tok("s2", 'n', 2), tok("s1", 'n', 1), tok("s2", 'n', 2)};
        // s2 appears twice with an identical vector; the first one wins
        const AnnotatedToken repr = best_repr(dup, tsm);
        CHECK(repr == dup.members[0]);
    }
    SUBCASE("empty chain is an argument error") {
        CHECK_THROWS_AS(best_repr(LexicalChain{}, tsm), Error);
    }
}

TEST_CASE("best_repr agrees with the brute-force oracle") {
    std::mt19937 rng(23);
    const std::vector<std::string> pool = {"t0", "t1", "t2", "t3"};
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t dim = 2 + rng() % 7;
        EmbeddingModel tsm(dim);
        for (std::size_t p = 0; p < pool.size(); ++p) {
            if (rng() % 100 < 85) {
                Vector v(dim);
                for (float& x : v)
                    x = static_cast<float>(static_cast<int>(rng() % 400) - 200) / 50.0f;
                tsm.insert(pool[p] + "#0000000" + std::to_string(p + 1) + "#n", v);
            }
        }
        LexicalChain chain;
        const std::size_t members = 1 + rng() % 6;
        for (std::size_t m = 0; m < members; ++m) {
            const std::size_t p = rng() % pool.size();
            chain.members.push_back(tok(pool[p], 'n', p + 1));
        }
        CHECK(best_repr(chain, tsm) == oracle_repr(chain.members, tsm));
    }
}

TEST_CASE("flexible-chain laws hold on randomized databases") {
    std::mt19937 rng(37);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n_synsets = 4 + rng() % 10;
        std::ostringstream dbtext;
        for (std::size_t i = 1; i <= n_synsets; ++i) {
            dbtext << "S " << SynsetId{'n', static_cast<std::uint32_t>(i)}.str() << " w" << i
                 << " | t\n";
        }
        for (std::size_t i = 1; i <= n_synsets; ++i) {
            const std::size_t fanout = rng() % 3;
            for (std::size_t p = 0; p < fanout; ++p) {
                dbtext << "P " << SynsetId{'n', static_cast<std::uint32_t>(i)}.str() << " "
                     << relation_name(static_cast<RelationKind>(rng() % kRelationCount)) << " "
                     << SynsetId{'n', static_cast<std::uint32_t>(1 + rng() % n_synsets)}.str()
                     << "\n";
            }
        }
        const LexicalDatabase db = db_from(dbtext.str());
        const EmbeddingModel tsm(2);

        AnnotatedDocument doc;
        const std::size_t len = rng() % 10;
        for (std::size_t i = 0; i < len; ++i) {
            const std::uint32_t off = 1 + rng() % n_synsets;
            doc.tokens.push_back(tok("w" + std::to_string(off), 'n', off));
        }

        const ChainedDocument chained = fllc2(doc, tsm, db);
        CHECK(all_members(chained) == doc.tokens);  // order-preserving partition
        REQUIRE(chained.representatives.size() == chained.chains.size());
        for (std::size_t c = 0; c < chained.chains.size(); ++c) {
            const auto& members = chained.chains[c].members;
            CHECK(std::find(members.begin(), members.end(), chained.representatives[c]) !=
                  members.end());
            if (c + 1 < chained.chains.size()) {
                // boundary law: the flushed related set does not intersect the
                // next chain's opening related set
                const auto next_rel = db.related_synsets(chained.chains[c + 1].members[0].synset);
                for (SynsetId r : next_rel) {
                    const auto& flushed = chained.chains[c].related;
                    CHECK(!std::binary_search(flushed.begin(), flushed.end(), r));
                }
            }
        }
    }
}

TEST_CASE("chain_corpus maps documents and keeps labels") {
    const LexicalDatabase db = db_from(
        "S n00000001 a | t\n"
        "S n00000002 b | t\n");
    const EmbeddingModel tsm(2);

    AnnotatedCorpus corpus;
    AnnotatedDocument doc;
    doc.label = "news";
    for (int i = 0; i < 10; ++i) doc.tokens.push_back(tok(i % 2 ? "a" : "b", 'n', i % 2 ? 1 : 2));
    corpus.push_back(doc);

    SUBCASE("fixed chunk_size 1 is the identity") {
        const AnnotatedCorpus out =
            chain_corpus(corpus, {ChainMode::fixed, 1}, tsm, nullptr);
        CHECK(out == corpus);
    }
    SUBCASE("fixed chunk_size 2 halves a 10-token document") {
        const AnnotatedCorpus out =
            chain_corpus(corpus, {ChainMode::fixed, 2}, tsm, nullptr);
        REQUIRE(out.size() == 1);
        CHECK(out[0].tokens.size() == 5);
        CHECK(out[0].label == "news");
    }
    SUBCASE("empty corpus stays empty") {
        CHECK(chain_corpus({}, {ChainMode::fixed, 2}, tsm, nullptr).empty());
        CHECK(chain_corpus({}, {ChainMode::flexible, 0}, tsm, &db).empty());
    }
    SUBCASE("flexible mode requires the database") {
        CHECK_THROWS_WITH_AS(chain_corpus(corpus, {ChainMode::flexible, 0}, tsm, nullptr),
                             doctest::Contains("database"), Error);
    }
    SUBCASE("per-document failures carry the document index") {
        AnnotatedCorpus bad = corpus;
        AnnotatedDocument orphan;
        orphan.tokens = {tok("zz", 'n', 99)};  // not in db
        bad.push_back(orphan);
        CHECK_THROWS_WITH_AS(chain_corpus(bad, {ChainMode::flexible, 0}, tsm, &db),
                             doctest::Contains("document 1"), Error);
    }
}

TEST_CASE("fixed-chain output length never grows with chunk_size") {
    const EmbeddingModel tsm(2);
    AnnotatedDocument doc;
    for (std::size_t i = 0; i < 23; ++i) doc.tokens.push_back(tok("w", 'n', 1 + (i % 5)));
    std::size_t previous = doc.tokens.size() + 1;
    for (std::size_t cs = 1; cs <= 12; ++cs) {
        const std::size_t count = fxlc2(doc, tsm, cs).chains.size();
        CHECK(count <= previous);
        previous = count;
    }
}
