#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lexchain/cbow.hpp"
#include "lexchain/error.hpp"
#include "lexchain/vectors.hpp"

using namespace lexchain;

namespace {

// Independent statement of the negative-sampling objective, used as the
// finite-difference oracle for the trainer's analytic gradients.
double reference_loss(const std::vector<float>& hidden,
                      const std::vector<std::vector<float>>& rows) {
    double loss = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        double f = 0.0;
        for (std::size_t d = 0; d < hidden.size(); ++d)
            f += static_cast<double>(hidden[d]) * rows[r][d];
        loss += r == 0 ? std::log1p(std::exp(-f)) : std::log1p(std::exp(f));
    }
    return loss;
}

float jitter(std::mt19937& rng) {
    return static_cast<float>(static_cast<int>(rng() % 1000) - 500) / 1000.0f;
}

TokenCorpus repeated(const std::string& token, int times) {
    TokenCorpus corpus;
    for (int i = 0; i < times; ++i) corpus.push_back({token});
    return corpus;
}

}  // namespace

TEST_CASE("vocabulary honors the min_count threshold") {
    SUBCASE("one token repeated 20 times survives min_count 10") {
        const EmbeddingModel model = train_cbow(repeated("only", 20), {.dimension = 4,
                                                                       .window = 2,
                                                                       .min_count = 10,
                                                                       .epochs = 1});
        CHECK(model.size() == 1);
        CHECK(model.contains("only"));
        CHECK(model.dimension() == 4);
    }
    SUBCASE("a token seen 9 times is filtered out at min_count 10") {
        TokenCorpus corpus = repeated("kept", 30);
        TokenCorpus rare = repeated("rare", 9);
        corpus.insert(corpus.end(), rare.begin(), rare.end());
        const EmbeddingModel model =
            train_cbow(corpus, {.dimension = 4, .window = 2, .min_count = 10, .epochs = 1});
        CHECK(model.contains("kept"));
        CHECK(!model.contains("rare"));
    }
    SUBCASE("nothing survives: error") {
        CHECK_THROWS_WITH_AS(
            train_cbow(repeated("rare", 9), {.dimension = 4, .window = 2, .min_count = 10}),
            doctest::Contains("min_count"), Error);
        CHECK_THROWS_AS(train_cbow({}, {.dimension = 4, .window = 2, .min_count = 1}), Error);
    }
}

TEST_CASE("config validation") {
    const TokenCorpus corpus = repeated("x", 5);
    CHECK_THROWS_AS(train_cbow(corpus, {.dimension = 0, .min_count = 1}), Error);
    CHECK_THROWS_AS(train_cbow(corpus, {.dimension = 2, .window = 0, .min_count = 1}), Error);
    CHECK_THROWS_AS(train_cbow(corpus, {.dimension = 2, .min_count = 1, .epochs = 0}), Error);
}

TEST_CASE("seeded single-worker training is bit-reproducible") {
    TokenCorpus corpus;
    std::mt19937 rng(5);
    const std::vector<std::string> pool = {"aa", "bb", "cc", "dd", "ee"};
    for (int d = 0; d < 40; ++d) {
        std::vector<std::string> doc;
        for (int t = 0; t < 8; ++t) doc.push_back(pool[rng() % pool.size()]);
        corpus.push_back(doc);
    }
    const TrainConfig cfg{.dimension = 8,
                          .window = 3,
                          .min_count = 1,
                          .epochs = 3,
                          .negative_samples = 5,
                          .learning_rate = 0.05f,
                          .seed = 99,
                          .workers = 1};
    const std::string first = to_text(train_cbow(corpus, cfg));
    const std::string second = to_text(train_cbow(corpus, cfg));
    CHECK(first == second);

    TrainConfig other = cfg;
    other.seed = 100;
    CHECK(to_text(train_cbow(corpus, other)) != first);
}

TEST_CASE("vocabulary order is frequency-descending, then lexicographic") {
    TokenCorpus corpus;
    for (int i = 0; i < 5; ++i) corpus.push_back({"zz"});
    for (int i = 0; i < 5; ++i) corpus.push_back({"aa"});
    for (int i = 0; i < 9; ++i) corpus.push_back({"mid"});
    const EmbeddingModel model =
        train_cbow(corpus, {.dimension = 2, .window = 2, .min_count = 1, .epochs = 1});
    CHECK(model.tokens() == std::vector<std::string>{"mid", "aa", "zz"});
}

TEST_CASE("analytic gradient matches central finite differences") {
    std::mt19937 rng(17);
    const std::size_t dim = 5;
    const float eps = 1e-3f;

    for (int trial = 0; trial < 25; ++trial) {
        // the first trials model a 2-token vocabulary: one positive output
        // row and one sampled negative
        const std::size_t n_rows = trial < 5 ? 2 : 4;
        std::vector<float> hidden(dim);
        for (float& x : hidden) x = jitter(rng);
        std::vector<std::vector<float>> rows(n_rows, std::vector<float>(dim));
        for (auto& row : rows)
            for (float& x : row) x = jitter(rng);

        std::vector<const float*> row_ptrs;
        std::vector<std::vector<float>> grads(rows.size(), std::vector<float>(dim));
        std::vector<float*> grad_ptrs;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            row_ptrs.push_back(rows[r].data());
            grad_ptrs.push_back(grads[r].data());
        }
        std::vector<float> grad_hidden(dim);
        const double loss = negative_sampling_loss_grad(hidden, row_ptrs, grad_ptrs, grad_hidden);
        CHECK(loss == doctest::Approx(reference_loss(hidden, rows)).epsilon(1e-10));

        std::vector<double> analytic, numeric;
        auto push_fd = [&](std::vector<float>& slot, std::size_t d, double analytic_value) {
            const float saved = slot[d];
            slot[d] = saved + eps;
            const double up = reference_loss(hidden, rows);
            slot[d] = saved - eps;
            const double down = reference_loss(hidden, rows);
            slot[d] = saved;
            analytic.push_back(analytic_value);
            numeric.push_back((up - down) / (2.0 * static_cast<double>(eps)));
        };
        for (std::size_t d = 0; d < dim; ++d) push_fd(hidden, d, grad_hidden[d]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t d = 0; d < dim; ++d) push_fd(rows[r], d, grads[r][d]);

        double diff2 = 0.0, sum2 = 0.0;
        for (std::size_t i = 0; i < analytic.size(); ++i) {
            diff2 += (analytic[i] - numeric[i]) * (analytic[i] - numeric[i]);
            sum2 += (analytic[i] + numeric[i]) * (analytic[i] + numeric[i]);
        }
        REQUIRE(sum2 > 0.0);
        CHECK(std::sqrt(diff2) / std::sqrt(sum2) < 1e-4);
    }
}

TEST_CASE("co-occurring tokens end up closer than non-co-occurring ones") {
    // Random mixtures keep aa/bb (and cc/dd) in interchangeable contexts,
    // which is what drags their input vectors together.
    std::mt19937 rng(2024);
    auto mixed_doc = [&](const std::string& x, const std::string& y) {
        std::vector<std::string> doc;
        for (int t = 0; t < 8; ++t) doc.push_back(rng() % 2 ? x : y);
        return doc;
    };
    TokenCorpus corpus;
    for (int i = 0; i < 80; ++i) corpus.push_back(mixed_doc("aa", "bb"));
    for (int i = 0; i < 80; ++i) corpus.push_back(mixed_doc("cc", "dd"));
    const EmbeddingModel model = train_cbow(corpus, {.dimension = 8,
                                                     .window = 4,
                                                     .min_count = 1,
                                                     .epochs = 15,
                                                     .negative_samples = 5,
                                                     .learning_rate = 0.05f,
                                                     .seed = 42});
    const double close = cosine(*model.find("aa"), *model.find("bb"));
    const double far = cosine(*model.find("aa"), *model.find("cc"));
    CHECK(close > far);
}

TEST_CASE("multi-worker mode produces a usable model") {
    TokenCorpus corpus;
    for (int i = 0; i < 50; ++i) corpus.push_back({"aa", "bb", "cc", "dd"});
    const EmbeddingModel model = train_cbow(
        corpus,
        {.dimension = 4, .window = 2, .min_count = 1, .epochs = 2, .seed = 1, .workers = 3});
    CHECK(model.size() == 4);
    CHECK(model.dimension() == 4);
}
