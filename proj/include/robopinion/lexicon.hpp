#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "robopinion/corpus.hpp"

namespace robopinion::lexicon {

enum class ContextMode { document, window };

/// Corpus-wide co-occurrence counts over normalized terms. N is the number
/// of contexts (documents, or sliding token windows), c(x) the number of
/// contexts containing x and c(x, y) the number containing both.
class CooccurrenceTable {
public:
    std::uint64_t contexts() const { return contexts_; }
    ContextMode mode() const { return mode_; }
    std::size_t window_size() const { return window_size_; }

    bool has(std::string_view term) const;
    std::uint64_t count(std::string_view term) const;  // throws on unknown term
    std::uint64_t pair_count(std::string_view x, std::string_view y) const;

    const std::map<std::string, std::uint64_t>& unigrams() const { return unigram_; }

    /// Normalized form used as the table key for a raw query term.
    static std::string key(std::string_view term);

private:
    friend CooccurrenceTable build_counts(const std::vector<corpus::Document>&, ContextMode,
                                          std::size_t);

    std::uint64_t contexts_ = 0;
    ContextMode mode_ = ContextMode::document;
    std::size_t window_size_ = 0;
    std::map<std::string, std::uint64_t> unigram_;
    std::map<std::pair<std::string, std::string>, std::uint64_t> pair_;
};

CooccurrenceTable build_counts(const std::vector<corpus::Document>& docs,
                               ContextMode mode = ContextMode::document,
                               std::size_t window_size = 10);

constexpr double kDefaultSmoothing = 0.01;

/// Pointwise mutual information in bits: log2(N * (c(x,y) + k) / (c(x) c(y))).
/// With k = 0 this is the exact unsmoothed value (and -inf when c(x,y) = 0).
double pmi(const CooccurrenceTable& table, std::string_view x, std::string_view y,
           double smoothing_k = kDefaultSmoothing);

/// Seed terms of known polarity. Defaults are a configurable convention.
struct ParadigmSets {
    std::set<std::string> positive;
    std::set<std::string> negative;
};

ParadigmSets default_paradigms();

/// `+term` / `-term` lines; blank lines and `#` comments ignored.
ParadigmSets parse_paradigms(std::string_view text);
std::string serialize_paradigms(const ParadigmSets& paradigms);

/// Sum of PMI against positive paradigm terms minus the sum against negative
/// ones. Paradigm terms missing from the table are skipped (reported through
/// `skipped` when given); if none is present at all, throws.
double semantic_orientation(const CooccurrenceTable& table, const ParadigmSets& paradigms,
                            std::string_view term, double smoothing_k = kDefaultSmoothing,
                            std::vector<std::string>* skipped = nullptr);

enum class Label { positive, negative, neutral };

struct Classification {
    Label label = Label::neutral;
    double score = 0.0;
};

/// Mean semantic orientation over the document's in-vocabulary content
/// tokens (stop words removed); label by sign against threshold tau.
Classification classify_mean_so(const CooccurrenceTable& table, const ParadigmSets& paradigms,
                                const corpus::Document& doc,
                                double smoothing_k = kDefaultSmoothing, double tau = 0.0);

/// Fixed 50-word stop list, stored in normalized form.
const std::set<std::string>& stop_words();

/// `term<TAB>SO` lines sorted by term, one per unigram in the table.
std::string lexicon_dump(const CooccurrenceTable& table, const ParadigmSets& paradigms,
                         double smoothing_k = kDefaultSmoothing);

const char* to_string(Label label);

}  // namespace robopinion::lexicon
