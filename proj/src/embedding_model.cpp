#include "lexchain/embedding_model.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lexchain/error.hpp"

#ifdef LEXCHAIN_HAVE_ZLIB
#include <zlib.h>
#endif

namespace lexchain {

void EmbeddingModel::insert(std::string token, Vector v) {
    if (token.empty()) throw Error("embedding token must be non-empty");
    for (char c : token) {
        if (std::isspace(static_cast<unsigned char>(c)))
            throw Error("embedding token contains whitespace: '" + token + "'");
    }
    if (dimension_ == 0) dimension_ = v.size();
    if (v.size() != dimension_)
        throw Error("vector for '" + token + "' has dimension " + std::to_string(v.size()) +
                    ", model expects " + std::to_string(dimension_));
    for (float x : v) {
        if (!std::isfinite(x)) throw Error("non-finite component in vector for '" + token + "'");
    }
    auto it = index_.find(token);
    if (it != index_.end()) {
        vectors_[it->second] = std::move(v);
        return;
    }
    index_.emplace(token, tokens_.size());
    tokens_.push_back(std::move(token));
    vectors_.push_back(std::move(v));
}

namespace {

[[noreturn]] void fail(const std::string& name, std::size_t line_no, const std::string& why) {
    throw Error(name + ":" + std::to_string(line_no) + ": " + why);
}

bool parse_float(std::string_view text, float& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

}  // namespace

EmbeddingModel parse_text_model(std::istream& in, const std::string& name,
                                TextModelStats* stats) {
    std::string line;
    std::size_t line_no = 0;

    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return true;
        }
        return false;
    };

    if (!next_line()) fail(name, 1, "missing header line");
    std::istringstream header(line);
    std::size_t vocab = 0, dim = 0;
    if (!(header >> vocab >> dim) || dim == 0)
        fail(name, line_no, "header must be 'vocab_size dimension'");

    EmbeddingModel model(dim);
    TextModelStats local;
    for (std::size_t row = 0; row < vocab; ++row) {
        if (!next_line())
            fail(name, line_no, "header declares " + std::to_string(vocab) + " rows, found " +
                                    std::to_string(row));
        std::size_t space = line.find(' ');
        if (space == std::string::npos || space == 0) fail(name, line_no, "expected 'token c1 ... cd'");
        std::string token = line.substr(0, space);

        Vector v(dim);
        std::size_t pos = space;
        for (std::size_t d = 0; d < dim; ++d) {
            while (pos < line.size() && line[pos] == ' ') ++pos;
            std::size_t start = pos;
            while (pos < line.size() && line[pos] != ' ') ++pos;
            if (start == pos)
                fail(name, line_no, "row has fewer than " + std::to_string(dim) + " components");
            if (!parse_float({line.data() + start, pos - start}, v[d]))
                fail(name, line_no, "bad float '" + line.substr(start, pos - start) + "'");
        }
        while (pos < line.size() && line[pos] == ' ') ++pos;
        if (pos != line.size())
            fail(name, line_no, "row has more than " + std::to_string(dim) + " components");

        if (model.contains(token)) ++local.duplicate_tokens;
        model.insert(std::move(token), std::move(v));
    }
    if (next_line()) fail(name, line_no, "more rows than the header declares");
    if (stats) *stats = local;
    return model;
}

#ifdef LEXCHAIN_HAVE_ZLIB
namespace {

std::string gunzip_file(const std::filesystem::path& path) {
    gzFile gz = gzopen(path.string().c_str(), "rb");
    if (!gz) throw Error("cannot open " + path.string());
    std::string out;
    char buf[1 << 16];
    int n = 0;
    while ((n = gzread(gz, buf, sizeof(buf))) > 0) out.append(buf, static_cast<std::size_t>(n));
    bool bad = n < 0;
    gzclose(gz);
    if (bad) throw Error("gzip decompression failed for " + path.string());
    return out;
}

}  // namespace
#endif

EmbeddingModel load_text_model(const std::filesystem::path& path, TextModelStats* stats) {
    if (path.extension() == ".gz") {
#ifdef LEXCHAIN_HAVE_ZLIB
        std::istringstream in(gunzip_file(path));
        return parse_text_model(in, path.filename().string(), stats);
#else
        throw Error("gzip input requires a zlib-enabled build: " + path.string());
#endif
    }
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return parse_text_model(in, path.filename().string(), stats);
}

std::string to_text(const EmbeddingModel& model) {
    std::ostringstream out;
    out << model.size() << ' ' << model.dimension() << '\n';
    char buf[32];
    for (std::size_t i = 0; i < model.size(); ++i) {
        out << model.tokens()[i];
        for (float x : model.vector_at(i)) {
            std::snprintf(buf, sizeof(buf), "%.6g", static_cast<double>(x));
            out << ' ' << buf;
        }
        out << '\n';
    }
    return std::move(out).str();
}

void save_text_model(const EmbeddingModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << to_text(model);
    if (!out) throw Error("write failed: " + path.string());
}

}  // namespace lexchain
