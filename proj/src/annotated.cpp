#include "lexchain/annotated.hpp"

#include <fstream>
#include <sstream>

#include "lexchain/error.hpp"

namespace lexchain {

std::string AnnotatedToken::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%08u#%c", synset.offset, synset.pos);
    return word + buf;
}

std::optional<AnnotatedToken> AnnotatedToken::parse(std::string_view text) {
    // word#offset8#pos, splitting on the last two '#' so the word may not
    // contain one.
    if (text.size() < 1 + 9 + 2) return std::nullopt;
    if (text[text.size() - 2] != '#') return std::nullopt;
    char pos = text.back();
    std::string_view rest = text.substr(0, text.size() - 2);
    auto hash = rest.rfind('#');
    if (hash == std::string_view::npos || hash == 0) return std::nullopt;
    std::string_view word = rest.substr(0, hash);
    std::string_view digits = rest.substr(hash + 1);
    if (word.find('#') != std::string_view::npos) return std::nullopt;
    auto id = SynsetId::parse(std::string(1, pos) + std::string(digits));
    if (!id) return std::nullopt;
    return AnnotatedToken{std::string(word), *id};
}

AnnotatedCorpus parse_annotated_corpus(std::istream& in, const std::string& name) {
    AnnotatedCorpus corpus;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        AnnotatedDocument doc;
        std::string_view body = line;
        if (auto tab = body.find('\t'); tab != std::string_view::npos) {
            doc.label = std::string(body.substr(0, tab));
            body = body.substr(tab + 1);
        }
        std::size_t i = 0;
        while (i < body.size()) {
            while (i < body.size() && body[i] == ' ') ++i;
            std::size_t start = i;
            while (i < body.size() && body[i] != ' ') ++i;
            if (i == start) continue;
            std::string_view piece = body.substr(start, i - start);
            auto token = AnnotatedToken::parse(piece);
            if (!token)
                throw Error(name + ":" + std::to_string(line_no) + ": bad annotated token '" +
                            std::string(piece) + "'");
            doc.tokens.push_back(std::move(*token));
        }
        corpus.push_back(std::move(doc));
    }
    return corpus;
}

AnnotatedCorpus load_annotated_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    return parse_annotated_corpus(in, path.filename().string());
}

std::string to_corpus_text(const AnnotatedCorpus& corpus) {
    std::ostringstream out;
    for (const AnnotatedDocument& doc : corpus) {
        if (!doc.label.empty()) out << doc.label << '\t';
        for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
            if (i) out << ' ';
            out << doc.tokens[i].str();
        }
        out << '\n';
    }
    return std::move(out).str();
}

void save_annotated_corpus(const AnnotatedCorpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << to_corpus_text(corpus);
    if (!out) throw Error("write failed: " + path.string());
}

}  // namespace lexchain
