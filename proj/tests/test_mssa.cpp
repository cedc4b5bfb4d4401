#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "lexchain/cbow.hpp"
#include "lexchain/error.hpp"
#include "lexchain/mssa.hpp"
#include "lexchain/preprocess.hpp"

using namespace lexchain;

namespace {

LexicalDatabase db_from(const std::string& text) {
    std::istringstream in(text);
    return parse_portable(in, "inline");
}

// --- independent exhaustive scorer -----------------------------------------
// Re-states the window rule with its own centroid/cosine/argmax code.

double oracle_cosine(const Vector& a, const Vector& b) {
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += static_cast<double>(a[i]) * b[i];
        na += static_cast<double>(a[i]) * a[i];
        nb += static_cast<double>(b[i]) * b[i];
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

bool oracle_gloss_vector(const Synset& synset, const EmbeddingModel& words, Vector& out) {
    std::vector<std::string> bag = preprocess(synset.gloss);
    for (const std::string& lemma : synset.lemmas) {
        std::string piece;
        for (char c : lemma) {
            if (c == '_') {
                if (!piece.empty()) bag.push_back(piece);
                piece.clear();
            } else {
                piece.push_back(c);
            }
        }
        if (!piece.empty()) bag.push_back(piece);
    }
    std::vector<double> sum(words.dimension(), 0.0);
    std::size_t found = 0;
    for (const std::string& w : bag) {
        if (const Vector* v = words.find(w)) {
            for (std::size_t d = 0; d < v->size(); ++d) sum[d] += (*v)[d];
            ++found;
        }
    }
    if (found == 0) return false;
    out.resize(sum.size());
    double n2 = 0.0;
    for (std::size_t d = 0; d < sum.size(); ++d) {
        out[d] = static_cast<float>(sum[d] / static_cast<double>(found));
        n2 += static_cast<double>(out[d]) * out[d];
    }
    return n2 > 0.0;
}

// argmax over senses at every position of the token list
std::vector<SynsetId> oracle_disambiguate(const std::vector<std::string>& tokens,
                                          const EmbeddingModel& words,
                                          const LexicalDatabase& db) {
    std::vector<SynsetId> chosen;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto senses = db.senses(tokens[i]);
        if (senses.empty()) continue;
        const Vector* left = i > 0 ? words.find(tokens[i - 1]) : nullptr;
        const Vector* right = i + 1 < tokens.size() ? words.find(tokens[i + 1]) : nullptr;

        std::size_t best = 0;
        double best_score = 0;
        bool any = false;
        for (std::size_t s = 0; s < senses.size(); ++s) {
            Vector g;
            if (!oracle_gloss_vector(db.at(senses[s]), words, g)) continue;
            double score = 0;
            if (left) score += oracle_cosine(g, *left);
            if (right) score += oracle_cosine(g, *right);
            if (!any || score > best_score) {
                best = s;
                best_score = score;
                any = true;
            }
        }
        chosen.push_back(senses[best]);
    }
    return chosen;
}

}  // namespace

TEST_CASE("preprocess reproduces the vegetable-lunch walkthrough tokens") {
    const auto tokens = preprocess(
        "Beets, carrots, and potatoes are grandma and grandpa's favorite dish for lunch!");
    CHECK(tokens == std::vector<std::string>{"beets", "carrots", "potatoes", "grandma", "grandpa",
                                             "favorite", "dish", "lunch"});
}

TEST_CASE("preprocess edge cases") {
    CHECK(preprocess("").empty());
    CHECK(preprocess("The THE the").empty());
    CHECK(preprocess("don't stop") == std::vector<std::string>{"stop"});
    CHECK(preprocess("co-operate, 2nd try...") ==
          std::vector<std::string>{"co", "operate", "2nd", "try"});
    // unicode: curly apostrophe and em-dash separate, accents survive
    CHECK(preprocess("naïve — café’s menu") ==
          std::vector<std::string>{"naïve", "café", "menu"});
}

TEST_CASE("stopword list is the classic 127-word inventory") {
    CHECK(stopword_list().size() == 127);
    std::set<std::string> unique(stopword_list().begin(), stopword_list().end());
    CHECK(unique.size() == 127);
    CHECK(is_stopword("the"));
    CHECK(is_stopword("s"));
    CHECK(!is_stopword("lunch"));
}

TEST_CASE("annotated token rendering round-trips") {
    const AnnotatedToken token{"lunch", {'n', 108}};
    CHECK(token.str() == "lunch#00000108#n");
    CHECK(AnnotatedToken::parse(token.str()) == token);
    CHECK(!AnnotatedToken::parse("lunch#108#n").has_value());
    CHECK(!AnnotatedToken::parse("#00000108#n").has_value());
    CHECK(!AnnotatedToken::parse("a#b#00000108#n").has_value());
    std::mt19937 rng(3);
    for (int i = 0; i < 200; ++i) {
        AnnotatedToken t{"w" + std::to_string(rng() % 1000),
                         {kPosTags[rng() % kPosTags.size()],
                          static_cast<std::uint32_t>(rng() % 100000000)}};
        CHECK(AnnotatedToken::parse(t.str()) == t);
    }
}

TEST_CASE("single-sense tokens take that sense; senseless tokens drop") {
    const LexicalDatabase db = db_from(
        "S n00000001 apple | edible fruit\n"
        "S n00000002 pear | sweet fruit\n");
    const EmbeddingModel empty_words(4);
    MssaStats stats;
    const AnnotatedDocument doc =
        disambiguate({"apple", "housd", "pear"}, empty_words, db, &stats);
    REQUIRE(doc.tokens.size() == 2);
    CHECK(doc.tokens[0] == AnnotatedToken{"apple", {'n', 1}});
    CHECK(doc.tokens[1] == AnnotatedToken{"pear", {'n', 2}});
    CHECK(stats.dropped_tokens == 1);
    CHECK(stats.assigned_senses == 2);
}

TEST_CASE("a lone multi-sense token ties to sense index 0") {
    const LexicalDatabase db = db_from(
        "S n00000001 bank | sloping land\n"
        "S n00000002 bank | financial institution\n");
    EmbeddingModel words(2);
    words.insert("sloping", Vector{1, 0});
    words.insert("land", Vector{1, 0});
    words.insert("financial", Vector{0, 1});
    words.insert("institution", Vector{0, 1});
    const AnnotatedDocument doc = disambiguate({"bank"}, words, db);
    REQUIRE(doc.tokens.size() == 1);
    CHECK(doc.tokens[0].synset == SynsetId{'n', 1});  // both senses score 0
}

TEST_CASE("the sense whose gloss points at the neighbors wins") {
    const LexicalDatabase db = db_from(
        "S n00000010 bank | sloping land water\n"
        "S n00000011 bank | financial institution deposits\n");
    EmbeddingModel words(2);
    words.insert("left", Vector{0, 1});
    words.insert("right", Vector{0, 1});
    words.insert("sloping", Vector{1, 0});
    words.insert("land", Vector{1, 0});
    words.insert("water", Vector{1, 0});
    words.insert("financial", Vector{0, 1});
    words.insert("institution", Vector{0, 1});
    words.insert("deposits", Vector{0, 1});

    const std::vector<std::string> tokens = {"left", "bank", "right"};
    const AnnotatedDocument doc = disambiguate(tokens, words, db);
    REQUIRE(doc.tokens.size() == 1);  // neighbors have no senses, used as context only
    CHECK(doc.tokens[0].synset == SynsetId{'n', 11});

    // brute-force confirmation
    const auto oracle = oracle_disambiguate(tokens, words, db);
    REQUIRE(oracle.size() == 1);
    CHECK(oracle[0] == doc.tokens[0].synset);
}

TEST_CASE("brute-force equivalence on randomized short documents") {
    std::mt19937 rng(91);
    const std::vector<std::string> gloss_vocab = {"ga", "gb", "gc", "gd", "ge", "gf", "gg", "gh"};

    for (int trial = 0; trial < 300; ++trial) {
        // random db: 3 lemmas, 1..4 senses each, glosses from the vocab
        std::ostringstream dbtext;
        std::uint32_t next_off = 1;
        std::vector<std::string> lemmas = {"wa", "wb", "wc"};
        for (const std::string& lemma : lemmas) {
            const std::size_t senses = 1 + rng() % 4;
            for (std::size_t s = 0; s < senses; ++s) {
                dbtext << "S n" << std::string(8 - std::to_string(next_off).size(), '0')
                     << next_off << " " << lemma << " |";
                const std::size_t words = 1 + rng() % 3;
                for (std::size_t w = 0; w < words; ++w)
                    dbtext << ' ' << gloss_vocab[rng() % gloss_vocab.size()];
                dbtext << '\n';
                ++next_off;
            }
        }
        const LexicalDatabase db = db_from(dbtext.str());

        EmbeddingModel words(3);
        auto rnd_vec = [&] {
            Vector v(3);
            for (float& x : v) x = static_cast<float>(static_cast<int>(rng() % 200) - 100) / 40.0f;
            return v;
        };
        for (const std::string& g : gloss_vocab)
            if (rng() % 10 < 8) words.insert(g, rnd_vec());
        for (const std::string& lemma : lemmas)
            if (rng() % 10 < 8) words.insert(lemma, rnd_vec());

        // documents up to 5 tokens over the three lemmas
        std::vector<std::string> doc;
        const std::size_t len = 1 + rng() % 5;
        for (std::size_t i = 0; i < len; ++i) doc.push_back(lemmas[rng() % lemmas.size()]);

        const AnnotatedDocument got = disambiguate(doc, words, db);
        const std::vector<SynsetId> expected = oracle_disambiguate(doc, words, db);
        REQUIRE(got.tokens.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i)
            CHECK(got.tokens[i].synset == expected[i]);

        // determinism
        const AnnotatedDocument again = disambiguate(doc, words, db);
        CHECK(got == again);
    }
}

TEST_CASE("refine uses exact synset-model keys when present") {
    const LexicalDatabase db = db_from(
        "S n00000001 left | fixture\n"
        "S n00000002 right | fixture\n"
        "S n00000010 bank | sloping land water\n"
        "S n00000011 bank | financial institution deposits\n");
    EmbeddingModel synsets(2);
    synsets.insert("left#00000001#n", Vector{0, 1});
    synsets.insert("right#00000002#n", Vector{0, 1});
    synsets.insert("bank#00000010#n", Vector{1, 0});   // river: orthogonal to neighbors
    synsets.insert("bank#00000011#n", Vector{0, 1});   // money: aligned with neighbors

    const AnnotatedDocument doc = refine({"left", "bank", "right"}, synsets, db);
    REQUIRE(doc.tokens.size() == 3);
    CHECK(doc.tokens[1].synset == SynsetId{'n', 11});
}

TEST_CASE("refine falls back to sense 0 when the model offers nothing") {
    const LexicalDatabase db = db_from(
        "S n00000020 mist | thin fog\n"
        "S n00000021 mist | sprayed liquid\n");
    const EmbeddingModel empty_synsets(2);
    const AnnotatedDocument doc = refine({"mist"}, empty_synsets, db);
    REQUIRE(doc.tokens.size() == 1);
    CHECK(doc.tokens[0].synset == SynsetId{'n', 20});
}

TEST_CASE("refine on a freshly trained model keeps document shape") {
    const LexicalDatabase db = db_from(
        "S n00000001 apple | edible fruit\n"
        "S n00000002 pear | sweet fruit\n"
        "S n00000003 plum | purple fruit\n");
    EmbeddingModel words(2);
    words.insert("apple", Vector{1, 0});
    words.insert("pear", Vector{1, 1});
    words.insert("plum", Vector{0, 1});

    // pass 0, then a synset model trained on its output, then pass 1
    std::vector<std::vector<std::string>> docs;
    std::mt19937 rng(8);
    const std::vector<std::string> vocab = {"apple", "pear", "plum"};
    for (int d = 0; d < 30; ++d) {
        std::vector<std::string> doc;
        for (int t = 0; t < 5; ++t) doc.push_back(vocab[rng() % vocab.size()]);
        docs.push_back(doc);
    }
    TokenCorpus rendered;
    for (const auto& doc : docs) {
        std::vector<std::string> line;
        for (const AnnotatedToken& t : disambiguate(doc, words, db).tokens)
            line.push_back(t.str());
        rendered.push_back(line);
    }
    const EmbeddingModel synsets = train_cbow(
        rendered, {.dimension = 4, .window = 2, .min_count = 1, .epochs = 2, .seed = 6});

    for (const auto& doc : docs) {
        const AnnotatedDocument refined = refine(doc, synsets, db);
        REQUIRE(refined.tokens.size() == doc.size());
        for (std::size_t i = 0; i < doc.size(); ++i) CHECK(refined.tokens[i].word == doc[i]);
    }
}

TEST_CASE("corpus-level annotation is worker-count independent") {
    const LexicalDatabase db = db_from(
        "S n00000001 apple | edible fruit\n"
        "S n00000002 pear | sweet fruit\n");
    EmbeddingModel words(2);
    words.insert("apple", Vector{1, 0});
    words.insert("pear", Vector{0, 1});
    std::vector<std::vector<std::string>> docs;
    for (int i = 0; i < 25; ++i)
        docs.push_back(i % 2 ? std::vector<std::string>{"apple", "pear"}
                             : std::vector<std::string>{"pear", "housd", "apple"});
    MssaStats one_stats, four_stats;
    const auto one = disambiguate_corpus(docs, words, db, 1, &one_stats);
    const auto four = disambiguate_corpus(docs, words, db, 4, &four_stats);
    CHECK(one == four);
    CHECK(one_stats.dropped_tokens == four_stats.dropped_tokens);
    CHECK(one_stats.assigned_senses == four_stats.assigned_senses);
}
