#include "robopinion/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "robopinion/error.hpp"
#include "robopinion/io.hpp"

namespace robopinion::corpus {

namespace {

bool is_token_char(char c) {
    const unsigned char u = static_cast<unsigned char>(c);
    return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || (u >= '0' && u <= '9');
}

char to_lower_ascii(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// Sibilant stems take -es ("boxes" -> "box", "glasses" -> "glass").
bool sibilant_stem(std::string_view stem) {
    if (stem.empty()) return false;
    const char last = stem.back();
    if (last == 's' || last == 'x' || last == 'z') return true;
    return ends_with(stem, "ch") || ends_with(stem, "sh");
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.emplace_back(text.substr(start));
            break;
        }
        lines.emplace_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (is_token_char(c)) {
            current.push_back(to_lower_ascii(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

std::string normalize_inflection(std::string_view token) {
    constexpr std::size_t kMinStem = 3;
    std::string word(token);
    for (;;) {
        if (ends_with(word, "es") && word.size() - 2 >= kMinStem &&
            sibilant_stem(std::string_view(word).substr(0, word.size() - 2))) {
            word.resize(word.size() - 2);
            continue;
        }
        if (ends_with(word, "s") && !ends_with(word, "ss") && word.size() - 1 >= kMinStem) {
            word.resize(word.size() - 1);
            continue;
        }
        if (ends_with(word, "ed") && word.size() - 2 >= kMinStem) {
            word.resize(word.size() - 2);
            continue;
        }
        if (ends_with(word, "ing") && word.size() - 3 >= kMinStem) {
            word.resize(word.size() - 3);
            continue;
        }
        break;
    }
    return word;
}

std::vector<ConcordanceLine> concordance(std::string_view term,
                                         const std::vector<Document>& docs,
                                         std::size_t window) {
    const std::vector<std::string> term_tokens = tokenize(term);
    if (term_tokens.empty()) {
        fail_validation("concordance: empty query term");
    }
    const std::string query = normalize_inflection(term_tokens.front());

    std::vector<ConcordanceLine> lines;
    for (const Document& doc : docs) {
        const std::vector<std::string> tokens = tokenize(doc.body);
        for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
            if (normalize_inflection(tokens[pos]) != query) continue;
            ConcordanceLine line;
            line.doc_id = doc.id;
            line.hit = query;
            line.token_offset = pos;
            const std::size_t left_begin = pos >= window ? pos - window : 0;
            line.left_context.assign(tokens.begin() + static_cast<std::ptrdiff_t>(left_begin),
                                     tokens.begin() + static_cast<std::ptrdiff_t>(pos));
            const std::size_t right_end = std::min(tokens.size(), pos + 1 + window);
            line.right_context.assign(tokens.begin() + static_cast<std::ptrdiff_t>(pos + 1),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(right_end));
            lines.push_back(std::move(line));
        }
    }
    std::stable_sort(lines.begin(), lines.end(), [](const ConcordanceLine& a, const ConcordanceLine& b) {
        if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
        return a.token_offset < b.token_offset;
    });
    return lines;
}

Document parse_post(std::string_view raw) {
    Document doc;
    const std::size_t first_nl = raw.find('\n');
    const std::string_view id_line = first_nl == std::string_view::npos ? raw : raw.substr(0, first_nl);
    doc.id = std::string(id_line);
    while (!doc.id.empty() && (doc.id.back() == '\r' || doc.id.back() == ' ')) {
        doc.id.pop_back();
    }
    if (doc.id.empty()) {
        fail_validation("post parse error: empty id line");
    }
    if (first_nl == std::string_view::npos) {
        return doc;
    }

    std::string_view rest = raw.substr(first_nl + 1);
    if (!rest.empty() && rest.front() == '#') {
        const std::size_t header_nl = rest.find('\n');
        const std::string_view header =
            header_nl == std::string_view::npos ? rest : rest.substr(0, header_nl);
        std::istringstream fields{std::string(header)};
        std::string field;
        while (fields >> field) {
            if (field.front() != '#' || field.find('=') == std::string::npos) {
                fail_validation("post parse error in '" + doc.id + "': malformed header token \"" +
                                field + "\"");
            }
            const std::size_t eq = field.find('=');
            const std::string key = field.substr(1, eq - 1);
            const std::string value = field.substr(eq + 1);
            if (key == "stance") {
                doc.stance = value;
            } else if (key == "originalStanceText") {
                doc.original_stance_text = value;
            } else if (key == "originalTopic") {
                doc.topic = value;
            } else {
                doc.extra.emplace_back(key, value);
            }
        }
        rest = header_nl == std::string_view::npos ? std::string_view{} : rest.substr(header_nl + 1);
    }

    doc.body = std::string(rest);
    if (!doc.body.empty() && doc.body.back() == '\n') {
        doc.body.pop_back();
    }
    return doc;
}

std::string serialize_post(const Document& doc) {
    std::string out = doc.id;
    out.push_back('\n');
    std::vector<std::string> fields;
    if (doc.stance) fields.push_back("#stance=" + *doc.stance);
    if (doc.original_stance_text) fields.push_back("#originalStanceText=" + *doc.original_stance_text);
    if (doc.topic) fields.push_back("#originalTopic=" + *doc.topic);
    for (const auto& [key, value] : doc.extra) {
        fields.push_back("#" + key + "=" + value);
    }
    if (!fields.empty()) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i != 0) out.push_back(' ');
            out += fields[i];
        }
        out.push_back('\n');
    }
    out += doc.body;
    out.push_back('\n');
    return out;
}

std::vector<Document> parse_posts(std::string_view raw) {
    const std::vector<std::string> lines = split_lines(raw);

    // A post head is a non-blank id line whose next line is a '#' header.
    auto post_head_at = [&](std::size_t i) {
        return i + 1 < lines.size() && !blank(lines[i]) && !lines[i].empty() &&
               lines[i][0] != '#' && !lines[i + 1].empty() && lines[i + 1][0] == '#';
    };

    std::size_t first = 0;
    while (first < lines.size() && blank(lines[first])) ++first;
    if (first >= lines.size()) return {};

    std::vector<std::size_t> starts{first};
    for (std::size_t i = first + 1; i < lines.size(); ++i) {
        if (blank(lines[i - 1]) && post_head_at(i)) starts.push_back(i);
    }

    std::vector<Document> docs;
    for (std::size_t s = 0; s < starts.size(); ++s) {
        const std::size_t begin = starts[s];
        std::size_t end = (s + 1 < starts.size()) ? starts[s + 1] : lines.size();
        // Drop separator blanks before the next post (or trailing blanks).
        while (end > begin + 1 && blank(lines[end - 1])) --end;
        std::string block;
        for (std::size_t i = begin; i < end; ++i) {
            block += lines[i];
            block.push_back('\n');
        }
        docs.push_back(parse_post(block));
    }
    return docs;
}

std::vector<Document> load_corpus_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
        fail_io("corpus directory not found: " + dir.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.is_regular_file()) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());

    std::vector<Document> docs;
    std::set<std::string> seen;
    for (const auto& file : files) {
        for (Document& doc : parse_posts(read_file(file))) {
            if (!seen.insert(doc.id).second) {
                fail_validation("duplicate document id '" + doc.id + "' in corpus " + dir.string());
            }
            docs.push_back(std::move(doc));
        }
    }
    if (docs.empty()) {
        fail_validation("corpus directory holds no documents: " + dir.string());
    }
    return docs;
}

std::string concordance_tsv(const std::vector<ConcordanceLine>& lines) {
    std::string out = "doc_id\toffset\tleft\thit\tright\n";
    for (const ConcordanceLine& line : lines) {
        out += line.doc_id;
        out.push_back('\t');
        out += std::to_string(line.token_offset);
        out.push_back('\t');
        for (std::size_t i = 0; i < line.left_context.size(); ++i) {
            if (i != 0) out.push_back(' ');
            out += line.left_context[i];
        }
        out.push_back('\t');
        out += line.hit;
        out.push_back('\t');
        for (std::size_t i = 0; i < line.right_context.size(); ++i) {
            if (i != 0) out.push_back(' ');
            out += line.right_context[i];
        }
        out.push_back('\n');
    }
    return out;
}

}  // namespace robopinion::corpus
