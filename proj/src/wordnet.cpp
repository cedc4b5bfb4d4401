#include "lexchain/wordnet.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "lexchain/error.hpp"

namespace lexchain {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

bool parse_uint(std::string_view text, std::uint32_t& value, int base = 10) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value, base);
    return ec == std::errc() && ptr == end;
}

// Canonical bucket for the sense index: satellites live with adjectives.
char sense_bucket(char pos) { return pos == 's' ? 'a' : pos; }

}  // namespace

const Synset* LexicalDatabase::find(SynsetId id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &synsets_[it->second];
}

const Synset& LexicalDatabase::at(SynsetId id) const {
    const Synset* s = find(id);
    if (!s) throw Error("unknown synset id: " + id.str());
    return *s;
}

std::size_t LexicalDatabase::count_pos(char pos) const {
    std::size_t n = 0;
    for (const Synset& s : synsets_) {
        if (s.id.pos == pos) ++n;
    }
    return n;
}

std::vector<SynsetId> LexicalDatabase::related_synsets(SynsetId id) const {
    const Synset& synset = at(id);
    std::vector<SynsetId> out;
    out.reserve(synset.pointers.size() + 1);
    out.push_back(id);
    for (const auto& [kind, target] : synset.pointers) out.push_back(target);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

const std::vector<SynsetId>& LexicalDatabase::senses(const std::string& lemma, char pos) const {
    static const std::vector<SynsetId> kEmpty;
    if (!is_pos_tag(pos)) throw Error(std::string("invalid pos tag: '") + pos + "'");
    auto it = sense_index_.find({lemma, sense_bucket(pos)});
    return it == sense_index_.end() ? kEmpty : it->second;
}

std::vector<SynsetId> LexicalDatabase::senses(const std::string& lemma) const {
    std::vector<SynsetId> out;
    for (char pos : {'n', 'v', 'a', 'r'}) {
        const auto& list = senses(lemma, pos);
        out.insert(out.end(), list.begin(), list.end());
    }
    return out;
}

void LexicalDatabase::add_synset(Synset synset) {
    auto [it, inserted] = by_id_.emplace(synset.id, synsets_.size());
    if (!inserted) throw Error("duplicate synset id: " + synset.id.str());
    synsets_.push_back(std::move(synset));
}

void LexicalDatabase::add_sense(const std::string& lemma, char pos, SynsetId id) {
    sense_index_[{lemma, sense_bucket(pos)}].push_back(id);
}

void LexicalDatabase::index_lemmas_of(const Synset& synset) {
    for (const std::string& lemma : synset.lemmas) {
        add_sense(lemma, synset.id.pos, synset.id);
    }
}

// ---------------------------------------------------------------------------
// WNDB

class WndbReader {
public:
    explicit WndbReader(const std::filesystem::path& directory) : dir_(directory) {}

    LexicalDatabase read() {
        static constexpr std::pair<const char*, char> kDataFiles[] = {
            {"data.noun", 'n'}, {"data.verb", 'v'}, {"data.adj", 'a'}, {"data.adv", 'r'}};
        static constexpr std::pair<const char*, char> kIndexFiles[] = {
            {"index.noun", 'n'}, {"index.verb", 'v'}, {"index.adj", 'a'}, {"index.adv", 'r'}};

        for (const auto& [name, pos] : kDataFiles) read_data_file(name, pos);
        resolve_pointers();
        for (const auto& [name, pos] : kIndexFiles) read_index_file(name, pos);
        return std::move(db_);
    }

private:
    std::string slurp(const std::string& name) {
        std::ifstream in(dir_ / name, std::ios::binary);
        if (!in) throw Error("cannot open " + name + " in " + dir_.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        return std::move(buf).str();
    }

    [[noreturn]] void malformed(const std::string& file, std::size_t byte_offset,
                                const std::string& why) {
        throw Error(file + ": malformed record at byte " + std::to_string(byte_offset) + ": " + why);
    }

    // Copyright banner lines start with two spaces in every WNDB file.
    static bool is_header(std::string_view line) { return line.substr(0, 2) == "  "; }

    template <typename Fn>
    void for_each_record(const std::string& text, Fn&& fn) {
        std::size_t offset = 0;
        while (offset < text.size()) {
            std::size_t eol = text.find('\n', offset);
            if (eol == std::string::npos) eol = text.size();
            std::string_view line(text.data() + offset, eol - offset);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            if (!line.empty() && !is_header(line)) fn(line, offset);
            offset = eol + 1;
        }
    }

    void read_data_file(const std::string& name, char file_pos) {
        const std::string text = slurp(name);
        for_each_record(text, [&](std::string_view line, std::size_t offset) {
            parse_data_line(name, file_pos, line, offset);
        });
    }

    void parse_data_line(const std::string& file, char file_pos, std::string_view line,
                         std::size_t byte_offset) {
        std::string_view fields = line;
        std::string_view gloss;
        if (auto bar = line.find('|'); bar != std::string_view::npos) {
            fields = line.substr(0, bar);
            gloss = line.substr(bar + 1);
        }
        const auto tok = split_ws(fields);
        if (tok.size() < 4) malformed(file, byte_offset, "fewer than 4 fields");

        std::uint32_t offset = 0;
        if (tok[0].size() != 8 || !parse_uint(tok[0], offset))
            malformed(file, byte_offset, "bad synset_offset '" + std::string(tok[0]) + "'");
        if (tok[2].size() != 1 || !is_pos_tag(tok[2][0]))
            malformed(file, byte_offset, "bad ss_type '" + std::string(tok[2]) + "'");
        char pos = tok[2][0];
        if (sense_bucket(pos) != sense_bucket(file_pos))
            malformed(file, byte_offset, "ss_type does not match file");

        std::uint32_t w_cnt = 0;
        if (!parse_uint(tok[3], w_cnt, 16) || w_cnt == 0)
            malformed(file, byte_offset, "bad w_cnt '" + std::string(tok[3]) + "'");

        Synset synset;
        synset.id = SynsetId{pos, offset};
        std::size_t i = 4;
        for (std::uint32_t w = 0; w < w_cnt; ++w, i += 2) {
            if (i + 1 >= tok.size()) malformed(file, byte_offset, "truncated word list");
            std::string lemma = lower_ascii(tok[i]);
            // Adjectives may carry a syntactic-position marker: "galore(ip)".
            if (auto paren = lemma.find('('); paren != std::string::npos && lemma.back() == ')')
                lemma.resize(paren);
            synset.lemmas.push_back(std::move(lemma));
        }

        if (i >= tok.size()) malformed(file, byte_offset, "missing p_cnt");
        std::uint32_t p_cnt = 0;
        if (!parse_uint(tok[i], p_cnt)) malformed(file, byte_offset, "bad p_cnt");
        ++i;
        for (std::uint32_t p = 0; p < p_cnt; ++p, i += 4) {
            if (i + 3 >= tok.size()) malformed(file, byte_offset, "truncated pointer list");
            std::string_view symbol = tok[i];
            std::uint32_t target_offset = 0;
            if (tok[i + 1].size() != 8 || !parse_uint(tok[i + 1], target_offset))
                malformed(file, byte_offset, "bad pointer offset");
            if (tok[i + 2].size() != 1 || !is_pos_tag(tok[i + 2][0]))
                malformed(file, byte_offset, "bad pointer pos");
            char target_pos = tok[i + 2][0];
            std::string_view source_target = tok[i + 3];
            if (source_target.size() != 4) malformed(file, byte_offset, "bad source/target field");

            auto kind = relation_from_symbol(symbol);
            // Only synset-level pointers of the supported kinds survive;
            // lemma-level pointers have a nonzero source/target field.
            if (!kind || source_target != "0000") {
                ++db_.stats_.dropped_pointers;
                continue;
            }
            synset.pointers.emplace_back(*kind, SynsetId{target_pos, target_offset});
        }
        // Remaining fields (verb frames) are not modeled.

        synset.gloss = strip_gloss_examples(gloss);
        db_.add_synset(std::move(synset));
    }

    // Pointers address adjective clusters as 'a' regardless of whether the
    // target record is a head ('a') or a satellite ('s'); rewrite to the id
    // actually stored.
    SynsetId resolve_id(SynsetId id) const {
        if (db_.find(id)) return id;
        if (id.pos == 'a' || id.pos == 's') {
            SynsetId flipped{id.pos == 'a' ? 's' : 'a', id.offset};
            if (db_.find(flipped)) return flipped;
        }
        return id;  // left dangling; caller reports
    }

    void resolve_pointers() {
        for (Synset& synset : db_.synsets_) {
            for (auto& [kind, target] : synset.pointers) {
                target = resolve_id(target);
                if (!db_.find(target))
                    throw Error("dangling pointer target " + target.str() + " in synset " +
                                synset.id.str());
            }
        }
    }

    void read_index_file(const std::string& name, char file_pos) {
        const std::string text = slurp(name);
        for_each_record(text, [&](std::string_view line, std::size_t offset) {
            parse_index_line(name, file_pos, line, offset);
        });
    }

    // lemma pos synset_cnt p_cnt [symbols...] sense_cnt tagsense_cnt offsets...
    void parse_index_line(const std::string& file, char file_pos, std::string_view line,
                          std::size_t byte_offset) {
        const auto tok = split_ws(line);
        if (tok.size() < 6) malformed(file, byte_offset, "fewer than 6 fields");
        std::string lemma = lower_ascii(tok[0]);
        if (tok[1].size() != 1 || tok[1][0] != file_pos)
            malformed(file, byte_offset, "pos does not match file");
        std::uint32_t synset_cnt = 0, p_cnt = 0;
        if (!parse_uint(tok[2], synset_cnt)) malformed(file, byte_offset, "bad synset_cnt");
        if (!parse_uint(tok[3], p_cnt)) malformed(file, byte_offset, "bad p_cnt");
        std::size_t first_offset = 4 + p_cnt + 2;
        if (tok.size() < first_offset + synset_cnt)
            malformed(file, byte_offset, "truncated offset list");
        for (std::uint32_t s = 0; s < synset_cnt; ++s) {
            std::uint32_t synset_offset = 0;
            if (!parse_uint(tok[first_offset + s], synset_offset))
                malformed(file, byte_offset, "bad synset offset");
            SynsetId id = resolve_id(SynsetId{file_pos, synset_offset});
            if (!db_.find(id))
                malformed(file, byte_offset, "sense offset " + id.str() + " not in data file");
            db_.add_sense(lemma, file_pos, id);
        }
    }

    std::filesystem::path dir_;
    LexicalDatabase db_;
};

LexicalDatabase load_wndb(const std::filesystem::path& directory) {
    return WndbReader(directory).read();
}

// ---------------------------------------------------------------------------
// Portable format

class PortableReader {
public:
    LexicalDatabase parse(std::istream& in, const std::string& name) {
        std::string line;
        std::size_t line_no = 0;
        // Pointers may reference synsets defined later; resolve after the scan.
        std::vector<std::tuple<SynsetId, RelationKind, SynsetId, std::size_t>> pending;

        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            const auto tok = split_ws(line);
            if (tok.empty()) continue;  // whitespace-only line
            if (tok[0] == "S") {
                parse_synset_line(name, line, tok, line_no);
            } else if (tok[0] == "P") {
                if (tok.size() != 4) fail(name, line_no, "pointer line needs 4 fields");
                auto source = SynsetId::parse(tok[1]);
                auto kind = relation_from_name(tok[2]);
                auto target = SynsetId::parse(tok[3]);
                if (!source) fail(name, line_no, "bad source id '" + std::string(tok[1]) + "'");
                if (!kind) fail(name, line_no, "unknown relation kind '" + std::string(tok[2]) + "'");
                if (!target) fail(name, line_no, "bad target id '" + std::string(tok[3]) + "'");
                pending.emplace_back(*source, *kind, *target, line_no);
            } else {
                fail(name, line_no, "expected 'S', 'P', or '#'");
            }
        }

        for (const auto& [source, kind, target, at_line] : pending) {
            if (!db_.find(source))
                fail(name, at_line, "pointer source " + source.str() + " is not defined");
            if (!db_.find(target))
                fail(name, at_line, "pointer target " + target.str() + " is not defined");
        }
        // Attach in file order after validation so synsets stay immutable on error.
        for (const auto& [source, kind, target, at_line] : pending) {
            auto idx = db_.by_id_.at(source);
            db_.synsets_[idx].pointers.emplace_back(kind, target);
        }
        for (const Synset& synset : db_.synsets_) db_.index_lemmas_of(synset);
        return std::move(db_);
    }

private:
    [[noreturn]] static void fail(const std::string& name, std::size_t line_no,
                                  const std::string& why) {
        throw Error(name + ":" + std::to_string(line_no) + ": " + why);
    }

    void parse_synset_line(const std::string& name, std::string_view line,
                           const std::vector<std::string_view>& tok, std::size_t line_no) {
        auto bar = line.find('|');
        if (bar == std::string_view::npos) fail(name, line_no, "synset line is missing '|'");
        if (tok.size() < 3) fail(name, line_no, "synset line needs id and lemmas");
        auto id = SynsetId::parse(tok[1]);
        if (!id) fail(name, line_no, "bad synset id '" + std::string(tok[1]) + "'");

        Synset synset;
        synset.id = *id;
        std::string_view lemmas = tok[2];
        while (!lemmas.empty()) {
            auto comma = lemmas.find(',');
            std::string_view lemma = lemmas.substr(0, comma);
            if (lemma.empty()) fail(name, line_no, "empty lemma");
            synset.lemmas.push_back(lower_ascii(lemma));
            if (comma == std::string_view::npos) break;
            lemmas.remove_prefix(comma + 1);
        }
        if (synset.lemmas.empty()) fail(name, line_no, "synset has no lemmas");
        synset.gloss = strip_gloss_examples(line.substr(bar + 1));
        try {
            db_.add_synset(std::move(synset));
        } catch (const Error& e) {
            fail(name, line_no, e.what());
        }
    }

    LexicalDatabase db_;
};

LexicalDatabase parse_portable(std::istream& in, const std::string& name) {
    return PortableReader().parse(in, name);
}

LexicalDatabase load_portable(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error("cannot open " + file.string());
    return parse_portable(in, file.filename().string());
}

std::string to_portable(const LexicalDatabase& db) {
    std::ostringstream out;
    for (const Synset& synset : db.synsets_) {
        out << "S " << synset.id.str() << ' ';
        for (std::size_t i = 0; i < synset.lemmas.size(); ++i) {
            if (i) out << ',';
            out << synset.lemmas[i];
        }
        out << " | " << synset.gloss << '\n';
        for (const auto& [kind, target] : synset.pointers) {
            out << "P " << synset.id.str() << ' ' << relation_name(kind) << ' ' << target.str()
                << '\n';
        }
    }
    return std::move(out).str();
}

void save_portable(const LexicalDatabase& db, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error("cannot write " + file.string());
    out << to_portable(db);
    if (!out) throw Error("write failed: " + file.string());
}

}  // namespace lexchain
