#include "robopinion/interview.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <set>

#include "robopinion/error.hpp"

namespace robopinion::interview {

namespace {

constexpr std::array<std::string_view, 6> kCopulas = {"is", "are", "was", "were", "seems", "looks"};

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) lines.emplace_back(text.substr(start));
            break;
        }
        lines.emplace_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

std::string strip(std::string s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::optional<int> parse_direct_level(const std::string& answer) {
    const std::string t = strip(answer);
    if (t.size() == 1 && t[0] >= '1' && t[0] <= '5') {
        return t[0] - '0';
    }
    return std::nullopt;
}

std::string answer_doc_id(int index, int n) {
    int width = 1;
    for (int v = n; v >= 10; v /= 10) ++width;
    std::string digits = std::to_string(index);
    while (static_cast<int>(digits.size()) < width) digits.insert(digits.begin(), '0');
    return "answer_" + digits;
}

std::string citation_text(const corpus::ConcordanceLine& line) {
    std::string out = line.doc_id + "@" + std::to_string(line.token_offset) + ":";
    bool first = true;
    auto append = [&](const std::string& token) {
        if (!first) out.push_back(' ');
        out += token;
        first = false;
    };
    for (const auto& token : line.left_context) append(token);
    append(line.hit);
    for (const auto& token : line.right_context) append(token);
    return out;
}

corpus::ConcordanceLine parse_citation(const std::string& text, std::size_t window,
                                       std::size_t line_no) {
    const std::size_t at = text.find('@');
    const std::size_t colon = text.find(':', at == std::string::npos ? 0 : at);
    if (at == std::string::npos || colon == std::string::npos || at == 0) {
        fail_validation("session line " + std::to_string(line_no) + ": malformed citation \"" +
                        text + "\"");
    }
    corpus::ConcordanceLine line;
    line.doc_id = text.substr(0, at);
    try {
        line.token_offset = std::stoul(text.substr(at + 1, colon - at - 1));
    } catch (const std::exception&) {
        fail_validation("session line " + std::to_string(line_no) + ": bad citation offset in \"" +
                        text + "\"");
    }
    std::vector<std::string> tokens;
    std::size_t start = colon + 1;
    while (start <= text.size()) {
        const std::size_t sp = text.find(' ', start);
        if (sp == std::string::npos) {
            if (start < text.size()) tokens.push_back(text.substr(start));
            break;
        }
        tokens.push_back(text.substr(start, sp - start));
        start = sp + 1;
    }
    // Left context always holds exactly min(offset, window) tokens.
    const std::size_t hit_at = std::min(line.token_offset, window);
    if (tokens.size() <= hit_at) {
        fail_validation("session line " + std::to_string(line_no) +
                        ": citation shorter than its left context: \"" + text + "\"");
    }
    line.left_context.assign(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(hit_at));
    line.hit = tokens[hit_at];
    line.right_context.assign(tokens.begin() + static_cast<std::ptrdiff_t>(hit_at) + 1,
                              tokens.end());
    return line;
}

}  // namespace

const SubConcept* ConceptSpec::find(int index) const {
    for (const SubConcept& sub : sub_concepts) {
        if (sub.index == index) return &sub;
    }
    return nullptr;
}

ConceptSpec parse_concept_spec(std::string_view text) {
    ConceptSpec spec;
    std::size_t line_no = 0;
    for (const std::string& raw_line : split_lines(text)) {
        ++line_no;
        const std::string line = strip(raw_line);
        if (line.empty() || line.front() == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            fail_validation("concept file line " + std::to_string(line_no) +
                            ": expected key=value, got \"" + line + "\"");
        }
        const std::string key = line.substr(0, eq);
        const std::string value = strip(line.substr(eq + 1));
        if (key == "concept") {
            spec.name = value;
        } else if (key == "sub") {
            SubConcept sub;
            const std::size_t bar = value.find('|');
            const std::string raw_name = bar == std::string::npos ? value : value.substr(0, bar);
            const auto tokens = corpus::tokenize(raw_name);
            if (tokens.size() != 1) {
                fail_validation("concept file line " + std::to_string(line_no) +
                                ": sub-concept name must be a single term, got \"" + raw_name +
                                "\"");
            }
            sub.name = corpus::normalize_inflection(tokens.front());
            if (bar != std::string::npos) sub.criteria = strip(value.substr(bar + 1));
            sub.index = static_cast<int>(spec.sub_concepts.size()) + 1;
            sub.sign = sub.index % 2 == 1 ? +1 : -1;
            sub.dummy = false;
            spec.sub_concepts.push_back(std::move(sub));
        } else {
            fail_validation("concept file line " + std::to_string(line_no) + ": unknown key \"" +
                            key + "\"");
        }
    }
    validate_concept_spec(spec);
    return spec;
}

void validate_concept_spec(const ConceptSpec& spec) {
    if (spec.name.empty()) {
        fail_validation("concept spec: missing concept name");
    }
    const int n = spec.n();
    if (n < 2 || n % 2 != 0) {
        fail_validation("concept spec: sub-concept count must be even and >= 2, got " +
                        std::to_string(n));
    }
    std::set<std::string> names;
    for (int i = 0; i < n; ++i) {
        const SubConcept& sub = spec.sub_concepts[static_cast<std::size_t>(i)];
        if (sub.index != i + 1) {
            fail_validation("concept spec: sub-concept indices must be 1..n in order");
        }
        if (sub.sign != (sub.index % 2 == 1 ? +1 : -1)) {
            fail_validation("concept spec: sign of sub-concept " + std::to_string(sub.index) +
                            " contradicts its parity");
        }
        if (sub.dummy) {
            fail_validation("concept spec: dummies are added by the landscape, not listed");
        }
        if (sub.name.empty() || !names.insert(sub.name).second) {
            fail_validation("concept spec: sub-concept names must be non-empty and unique");
        }
    }
}

ScriptedAnswers::ScriptedAnswers(std::string_view script_text) {
    for (std::string& line : split_lines(script_text)) {
        answers_.push_back(strip(std::move(line)));
    }
    while (!answers_.empty() && answers_.back().empty()) answers_.pop_back();
}

std::string ScriptedAnswers::next(const std::string&) {
    if (cursor_ >= answers_.size()) {
        fail_validation("scripted answers exhausted after " + std::to_string(cursor_) +
                        " answers");
    }
    return answers_[cursor_++];
}

std::string InteractiveAnswers::next(const std::string& question) {
    out_ << question << "\n> " << std::flush;
    std::string answer;
    if (!std::getline(in_, answer)) {
        fail_io("interview: input stream closed before the session finished");
    }
    return answer;
}

std::optional<std::pair<std::string, std::string>> extract_copula(
    std::string_view sentence, const std::vector<std::string>& names) {
    const std::vector<std::string> tokens = corpus::tokenize(sentence);
    if (tokens.size() < 3) return std::nullopt;
    for (std::size_t i = 0; i + 2 < tokens.size(); ++i) {
        if (std::find(kCopulas.begin(), kCopulas.end(), tokens[i + 1]) == kCopulas.end()) {
            continue;
        }
        const std::string x = corpus::normalize_inflection(tokens[i]);
        for (const std::string& name : names) {
            if (corpus::normalize_inflection(name) == x) {
                return std::make_pair(name, tokens[i + 2]);
            }
        }
    }
    return std::nullopt;
}

double likert_to_value(int level) {
    if (level < 1 || level > 5) {
        fail_validation("likert level out of range: " + std::to_string(level));
    }
    return (level - 3) * 0.5;
}

int likert_from_so(double so, double sigma) {
    if (sigma <= 0.0) {
        fail_validation("likert_from_so: sigma must be > 0");
    }
    if (so >= sigma) return 5;
    if (so > 0.0) return 4;
    if (so == 0.0) return 3;
    if (so > -sigma) return 2;
    return 1;
}

PlumLevel plum_level(double value) {
    if (!(value >= -1.0 && value <= 1.0)) {
        fail_validation("plum_level: value outside [-1, 1]");
    }
    if (value < -0.75) return PlumLevel::strong_negative;
    if (value < -0.25) return PlumLevel::negative;
    if (value <= 0.25) return PlumLevel::neutral;
    if (value <= 0.75) return PlumLevel::positive;
    return PlumLevel::strong_positive;
}

const char* to_string(PlumLevel level) {
    switch (level) {
        case PlumLevel::strong_negative: return "strong-negative";
        case PlumLevel::negative: return "negative";
        case PlumLevel::neutral: return "neutral";
        case PlumLevel::positive: return "positive";
        case PlumLevel::strong_positive: return "strong-positive";
    }
    return "neutral";
}

SessionRecord run_session(const ConceptSpec& spec, AnswerSource& answers,
                          const SoLookup& so_lookup, const SessionOptions& options) {
    validate_concept_spec(spec);
    SessionRecord record;
    record.concept = spec;

    for (const SubConcept& sub : spec.sub_concepts) {
        std::string question = "On a scale of 1 to 5, how do you rate the " + sub.name + " of " +
                               spec.name + "? (a short sentence works too)";
        if (!sub.criteria.empty()) {
            question += " [criteria: " + sub.criteria + "]";
        }
        const std::string answer = answers.next(question);
        record.transcript.push_back(answer);

        LikertResponse response;
        response.sub_concept_index = sub.index;
        if (const auto direct = parse_direct_level(answer)) {
            response.level = *direct;
            response.source = ResponseSource::direct_answer;
        } else {
            bool rated = false;
            if (const auto copula = extract_copula(answer, {sub.name})) {
                if (const auto so = so_lookup ? so_lookup(copula->second) : std::nullopt) {
                    response.level = likert_from_so(*so, options.so_sigma);
                    response.source = ResponseSource::copula_extracted;
                    rated = true;
                }
            }
            if (!rated) {
                response.level = 3;
                response.source = ResponseSource::direct_answer;
                response.warning = true;
            }
        }
        record.responses.push_back(response);
    }

    // Concordance every sub-concept name over the accumulated transcript.
    std::vector<corpus::Document> transcript_docs;
    for (std::size_t i = 0; i < record.transcript.size(); ++i) {
        corpus::Document doc;
        doc.id = answer_doc_id(static_cast<int>(i) + 1, spec.n());
        doc.body = record.transcript[i];
        transcript_docs.push_back(std::move(doc));
    }
    for (const SubConcept& sub : spec.sub_concepts) {
        record.citations[sub.index] = corpus::concordance(sub.name, transcript_docs, options.window);
    }
    return record;
}

std::string write_session(const SessionRecord& record) {
    std::string out = "#robopinion-session v1\n";
    out += "concept=" + record.concept.name + "\n";
    for (const LikertResponse& response : record.responses) {
        out += "R[" + std::to_string(response.sub_concept_index) +
               "]=" + std::to_string(response.level) + "\n";
        out += "L[" + std::to_string(response.sub_concept_index) + "]=";
        const auto it = record.citations.find(response.sub_concept_index);
        if (it != record.citations.end()) {
            for (std::size_t i = 0; i < it->second.size(); ++i) {
                if (i != 0) out += "|||";
                out += citation_text(it->second[i]);
            }
        }
        out.push_back('\n');
    }
    return out;
}

SessionRecord parse_session(std::string_view text, std::size_t window) {
    const std::vector<std::string> lines = split_lines(text);
    if (lines.empty() || lines[0] != "#robopinion-session v1") {
        fail_validation("session line 1: missing '#robopinion-session v1' header");
    }
    if (lines.size() < 2 || lines[1].rfind("concept=", 0) != 0) {
        fail_validation("session line 2: expected 'concept=<name>'");
    }
    SessionRecord record;
    record.concept.name = lines[1].substr(std::string("concept=").size());

    int expected = 1;
    std::size_t i = 2;
    while (i < lines.size()) {
        const std::string r_prefix = "R[" + std::to_string(expected) + "]=";
        const std::string l_prefix = "L[" + std::to_string(expected) + "]=";
        if (lines[i].rfind(r_prefix, 0) != 0) {
            fail_validation("session line " + std::to_string(i + 1) + ": expected '" + r_prefix +
                            "<level>', got \"" + lines[i] + "\"");
        }
        const std::string level_text = lines[i].substr(r_prefix.size());
        if (level_text.size() != 1 || level_text[0] < '1' || level_text[0] > '5') {
            fail_validation("session line " + std::to_string(i + 1) + ": level must be 1..5, got \"" +
                            level_text + "\"");
        }
        LikertResponse response;
        response.sub_concept_index = expected;
        response.level = level_text[0] - '0';
        record.responses.push_back(response);

        if (i + 1 >= lines.size() || lines[i + 1].rfind(l_prefix, 0) != 0) {
            fail_validation("session line " + std::to_string(i + 2) + ": expected '" + l_prefix +
                            "...' citation line");
        }
        const std::string rhs = lines[i + 1].substr(l_prefix.size());
        std::vector<corpus::ConcordanceLine> citations;
        if (!rhs.empty()) {
            std::size_t start = 0;
            while (start <= rhs.size()) {
                const std::size_t sep = rhs.find("|||", start);
                const std::string part =
                    rhs.substr(start, sep == std::string::npos ? sep : sep - start);
                citations.push_back(parse_citation(part, window, i + 2));
                if (sep == std::string::npos) break;
                start = sep + 3;
            }
        }
        record.citations[expected] = std::move(citations);

        i += 2;
        ++expected;
    }
    if (record.responses.empty()) {
        fail_validation("session file holds no responses");
    }
    // Rebuild minimal sub-concept entries; names come from citation hits
    // when present (the file format does not store them).
    for (const LikertResponse& response : record.responses) {
        SubConcept sub;
        sub.index = response.sub_concept_index;
        sub.sign = sub.index % 2 == 1 ? +1 : -1;
        const auto& cites = record.citations[sub.index];
        if (!cites.empty()) sub.name = cites.front().hit;
        record.concept.sub_concepts.push_back(std::move(sub));
    }
    return record;
}

}  // namespace robopinion::interview
