#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "robopinion/corpus.hpp"

namespace robopinion::interview {

/// One assessable feature of the concept. Indices are 1-based; odd indices
/// carry sign +1 (positive features), even indices -1. The two dummy anchor
/// sub-concepts (pre-zero, zero) are not part of a ConceptSpec; the
/// landscape adds them.
struct SubConcept {
    int index = 0;
    std::string name;  // normalized term
    int sign = 0;
    bool dummy = false;
    std::string criteria;
};

struct ConceptSpec {
    std::string name;
    std::vector<SubConcept> sub_concepts;  // index order 1..n, n even

    int n() const { return static_cast<int>(sub_concepts.size()); }
    const SubConcept* find(int index) const;
};

/// Concept file: `concept=<name>` then one `sub=<name>[|criteria]` line per
/// sub-concept in index order. `#` comments and blank lines are ignored.
ConceptSpec parse_concept_spec(std::string_view text);
void validate_concept_spec(const ConceptSpec& spec);

enum class ResponseSource { direct_answer, copula_extracted };

struct LikertResponse {
    int sub_concept_index = 0;
    int level = 0;  // 1..5
    ResponseSource source = ResponseSource::direct_answer;
    bool warning = false;  // set when neither answer path produced a level

    bool operator==(const LikertResponse&) const = default;
};

struct SessionRecord {
    ConceptSpec concept;
    std::vector<LikertResponse> responses;  // one per sub-concept, index order
    std::map<int, std::vector<corpus::ConcordanceLine>> citations;
    std::vector<std::string> transcript;  // raw answer per question
};

/// Answer provider for a session: scripted (one answer per line) or
/// interactive over a stream pair.
class AnswerSource {
public:
    virtual ~AnswerSource() = default;
    virtual std::string next(const std::string& question) = 0;
};

class ScriptedAnswers final : public AnswerSource {
public:
    explicit ScriptedAnswers(std::string_view script_text);
    std::string next(const std::string& question) override;

private:
    std::vector<std::string> answers_;
    std::size_t cursor_ = 0;
};

class InteractiveAnswers final : public AnswerSource {
public:
    InteractiveAnswers(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
    std::string next(const std::string& question) override;

private:
    std::istream& in_;
    std::ostream& out_;
};

/// Maps a term to its semantic orientation, when known. Sessions use this to
/// rate copula answers; it is usually backed by a lexicon table.
using SoLookup = std::function<std::optional<double>(const std::string&)>;

struct SessionOptions {
    std::size_t window = corpus::kDefaultContextWindow;
    double so_sigma = 1.0;  // |SO| at or past which a copula answer is rated extreme
};

/// Run the structured interview: one planned question per sub-concept in
/// index order. Numeric answers 1..5 are taken directly; otherwise the
/// answer is scanned for an "X is Y" copula with X the asked sub-concept and
/// Y is rated through the SO lookup. Unanswerable questions record level 3
/// with a warning. Afterwards each sub-concept name is concordanced over the
/// accumulated transcript and the citations stored.
SessionRecord run_session(const ConceptSpec& spec, AnswerSource& answers,
                          const SoLookup& so_lookup, const SessionOptions& options = {});

/// First <X, copula, Y> token triple with normalize(X) among `names`.
/// Returns (matched sub-concept name, Y token).
std::optional<std::pair<std::string, std::string>> extract_copula(
    std::string_view sentence, const std::vector<std::string>& names);

/// Linear Likert map {1,2,3,4,5} -> {-1,-0.5,0,0.5,1}.
double likert_to_value(int level);

/// SO -> Likert level with thresholds at 0 and +-sigma.
int likert_from_so(double so, double sigma);

enum class PlumLevel { strong_negative, negative, neutral, positive, strong_positive };

/// Five-band reading of a value in [-1, 1]; band edges at +-0.25 and +-0.75
/// belong to the band nearer zero.
PlumLevel plum_level(double value);
const char* to_string(PlumLevel level);

/// TEMP session file: `#robopinion-session v1`, `concept=<name>`, then per
/// sub-concept `R[<i>]=<level>` and `L[<i>]=<citation>|||...` lines where a
/// citation is `doc_id@offset:left hit right`. The context window is not
/// stored; parse with the same window used when writing (default 5).
std::string write_session(const SessionRecord& record);
SessionRecord parse_session(std::string_view text,
                            std::size_t window = corpus::kDefaultContextWindow);

}  // namespace robopinion::interview
