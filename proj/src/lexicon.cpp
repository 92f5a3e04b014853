#include "robopinion/lexicon.hpp"

#include <algorithm>
#include <cmath>

#include "robopinion/error.hpp"
#include "robopinion/io.hpp"

namespace robopinion::lexicon {

namespace {

std::pair<std::string, std::string> ordered(std::string_view a, std::string_view b) {
    if (b < a) std::swap(a, b);
    return {std::string(a), std::string(b)};
}

void count_context(const std::set<std::string>& terms,
                   std::map<std::string, std::uint64_t>& unigram,
                   std::map<std::pair<std::string, std::string>, std::uint64_t>& pairs) {
    for (auto it = terms.begin(); it != terms.end(); ++it) {
        ++unigram[*it];
        for (auto jt = std::next(it); jt != terms.end(); ++jt) {
            ++pairs[{*it, *jt}];  // set iteration keeps *it < *jt
        }
    }
}

}  // namespace

std::string CooccurrenceTable::key(std::string_view term) {
    const auto tokens = corpus::tokenize(term);
    if (tokens.empty()) {
        fail_validation("lexicon: query term has no token: \"" + std::string(term) + "\"");
    }
    return corpus::normalize_inflection(tokens.front());
}

bool CooccurrenceTable::has(std::string_view term) const {
    return unigram_.contains(key(term));
}

std::uint64_t CooccurrenceTable::count(std::string_view term) const {
    const auto it = unigram_.find(key(term));
    if (it == unigram_.end()) {
        fail_validation("lexicon: unknown term \"" + std::string(term) + "\"");
    }
    return it->second;
}

std::uint64_t CooccurrenceTable::pair_count(std::string_view x, std::string_view y) const {
    const std::string kx = key(x);
    const std::string ky = key(y);
    if (kx == ky) {
        return count(x);  // a context holding x trivially holds the pair (x, x)
    }
    const auto it = pair_.find(kx < ky ? std::make_pair(kx, ky) : std::make_pair(ky, kx));
    return it == pair_.end() ? 0 : it->second;
}

CooccurrenceTable build_counts(const std::vector<corpus::Document>& docs, ContextMode mode,
                               std::size_t window_size) {
    if (docs.empty()) {
        fail_validation("build_counts: empty corpus");
    }
    if (mode == ContextMode::window && window_size == 0) {
        fail_validation("build_counts: window size must be >= 1");
    }

    CooccurrenceTable table;
    table.mode_ = mode;
    table.window_size_ = mode == ContextMode::window ? window_size : 0;

    for (const corpus::Document& doc : docs) {
        std::vector<std::string> tokens = corpus::tokenize(doc.body);
        for (std::string& token : tokens) {
            token = corpus::normalize_inflection(token);
        }
        if (mode == ContextMode::document) {
            ++table.contexts_;
            count_context({tokens.begin(), tokens.end()}, table.unigram_, table.pair_);
        } else {
            if (tokens.empty()) continue;
            const std::size_t windows =
                tokens.size() <= window_size ? 1 : tokens.size() - window_size + 1;
            for (std::size_t start = 0; start < windows; ++start) {
                const std::size_t end = std::min(tokens.size(), start + window_size);
                ++table.contexts_;
                count_context({tokens.begin() + static_cast<std::ptrdiff_t>(start),
                               tokens.begin() + static_cast<std::ptrdiff_t>(end)},
                              table.unigram_, table.pair_);
            }
        }
    }
    if (table.contexts_ == 0) {
        fail_validation("build_counts: corpus produced no contexts");
    }
    return table;
}

double pmi(const CooccurrenceTable& table, std::string_view x, std::string_view y,
           double smoothing_k) {
    if (smoothing_k < 0.0) {
        fail_validation("pmi: smoothing must be >= 0");
    }
    const double n = static_cast<double>(table.contexts());
    const double cx = static_cast<double>(table.count(x));
    const double cy = static_cast<double>(table.count(y));
    const double cxy = static_cast<double>(table.pair_count(x, y)) + smoothing_k;
    return std::log2(n * cxy / (cx * cy));
}

ParadigmSets default_paradigms() {
    return ParadigmSets{
        {"good", "nice", "excellent", "positive", "fortunate", "correct", "superior"},
        {"bad", "nasty", "poor", "negative", "unfortunate", "wrong", "inferior"},
    };
}

ParadigmSets parse_paradigms(std::string_view text) {
    ParadigmSets sets;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t nl = text.find('\n', start);
        std::string line(text.substr(start, nl == std::string_view::npos ? nl : nl - start));
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (line.front() != '+' && line.front() != '-') {
            fail_validation("paradigm file line " + std::to_string(line_no) +
                            ": expected '+term' or '-term', got \"" + line + "\"");
        }
        const std::string term = CooccurrenceTable::key(line.substr(1));
        (line.front() == '+' ? sets.positive : sets.negative).insert(term);
    }
    if (sets.positive.empty() || sets.negative.empty()) {
        fail_validation("paradigm sets must both be non-empty");
    }
    for (const std::string& term : sets.positive) {
        if (sets.negative.contains(term)) {
            fail_validation("paradigm term \"" + term + "\" appears in both sets");
        }
    }
    return sets;
}

std::string serialize_paradigms(const ParadigmSets& paradigms) {
    std::string out;
    for (const std::string& term : paradigms.positive) out += "+" + term + "\n";
    for (const std::string& term : paradigms.negative) out += "-" + term + "\n";
    return out;
}

double semantic_orientation(const CooccurrenceTable& table, const ParadigmSets& paradigms,
                            std::string_view term, double smoothing_k,
                            std::vector<std::string>* skipped) {
    if (paradigms.positive.empty() || paradigms.negative.empty()) {
        fail_validation("semantic_orientation: paradigm sets must be non-empty");
    }
    double so = 0.0;
    std::size_t used = 0;
    for (const std::string& seed : paradigms.positive) {
        if (!table.has(seed)) {
            if (skipped) skipped->push_back("+" + seed);
            continue;
        }
        so += pmi(table, term, seed, smoothing_k);
        ++used;
    }
    for (const std::string& seed : paradigms.negative) {
        if (!table.has(seed)) {
            if (skipped) skipped->push_back("-" + seed);
            continue;
        }
        so -= pmi(table, term, seed, smoothing_k);
        ++used;
    }
    if (used == 0) {
        fail_validation("semantic_orientation: no paradigm term occurs in the corpus");
    }
    return so;
}

Classification classify_mean_so(const CooccurrenceTable& table, const ParadigmSets& paradigms,
                                const corpus::Document& doc, double smoothing_k, double tau) {
    if (tau < 0.0) {
        fail_validation("classify_mean_so: tau must be >= 0");
    }
    double sum = 0.0;
    std::size_t used = 0;
    for (const std::string& token : corpus::tokenize(doc.body)) {
        const std::string term = corpus::normalize_inflection(token);
        if (stop_words().contains(term) || !table.has(term)) continue;
        sum += semantic_orientation(table, paradigms, term, smoothing_k);
        ++used;
    }
    if (used == 0) {
        fail_validation("classify_mean_so: document '" + doc.id +
                        "' is unclassifiable (no in-vocabulary content term)");
    }
    Classification result;
    result.score = sum / static_cast<double>(used);
    if (result.score > tau) {
        result.label = Label::positive;
    } else if (result.score < -tau) {
        result.label = Label::negative;
    } else {
        result.label = Label::neutral;
    }
    return result;
}

const std::set<std::string>& stop_words() {
    // 50 high-frequency function words, normalized like every table key.
    static const std::set<std::string> words = [] {
        const char* raw[] = {
            "a",    "about", "all",  "an",   "and",  "are",  "as",   "at",   "be",   "been",
            "but",  "by",    "can",  "do",   "for",  "from", "had",  "has",  "have", "he",
            "her",  "his",   "i",    "if",   "in",   "is",   "it",   "its",  "my",   "no",
            "not",  "of",    "on",   "or",   "our",  "she",  "so",   "that", "the",  "their",
            "them", "they",  "this", "to",   "was",  "we",   "were", "will", "with", "you",
        };
        std::set<std::string> out;
        for (const char* word : raw) {
            out.insert(corpus::normalize_inflection(word));
        }
        return out;
    }();
    return words;
}

std::string lexicon_dump(const CooccurrenceTable& table, const ParadigmSets& paradigms,
                         double smoothing_k) {
    std::string out;
    for (const auto& [term, count] : table.unigrams()) {
        out += term;
        out.push_back('\t');
        out += fmt_double(semantic_orientation(table, paradigms, term, smoothing_k));
        out.push_back('\n');
    }
    return out;
}

const char* to_string(Label label) {
    switch (label) {
        case Label::positive: return "positive";
        case Label::negative: return "negative";
        case Label::neutral: return "neutral";
    }
    return "neutral";
}

}  // namespace robopinion::lexicon
