#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace robopinion::corpus {

/// One opinion document. For stance-annotated debate posts the metadata
/// fields come from the `#key=value` header line; plain documents carry
/// only an id and a body.
struct Document {
    std::string id;
    std::optional<std::string> stance;
    std::optional<std::string> original_stance_text;
    std::optional<std::string> topic;
    /// Unknown `#key=value` pairs, in file order.
    std::vector<std::pair<std::string, std::string>> extra;
    /// Verbatim body text (no trailing newline; serialization appends one).
    std::string body;

    bool operator==(const Document&) const = default;
};

/// KWIC line: one occurrence of a queried term with its token context.
struct ConcordanceLine {
    std::string doc_id;
    std::string hit;  // normalized form, equals the normalized query term
    std::vector<std::string> left_context;
    std::vector<std::string> right_context;
    std::size_t token_offset = 0;

    bool operator==(const ConcordanceLine&) const = default;
};

/// Lowercased tokens split on non-alphanumeric runs (ASCII letters and
/// digits; anything else, including multi-byte UTF-8, separates tokens).
std::vector<std::string> tokenize(std::string_view text);

/// Canonical stem via an ordered suffix-rule list (-es after sibilants,
/// -s, -ed, -ing; minimum stem length 3), applied until no rule fires,
/// which makes the map idempotent.
std::string normalize_inflection(std::string_view token);

constexpr std::size_t kDefaultContextWindow = 5;

/// Every occurrence of `term` (matched on normalized forms) across `docs`,
/// ordered by (doc_id, token_offset).
std::vector<ConcordanceLine> concordance(std::string_view term,
                                         const std::vector<Document>& docs,
                                         std::size_t window = kDefaultContextWindow);

/// Parse a single debate post: id line, optional `#key=value` header line,
/// then the body. Throws on a header token lacking '='.
Document parse_post(std::string_view raw);
std::string serialize_post(const Document& doc);

/// Parse a file that holds either one post or several separated by blank
/// lines. A blank line starts a new post only when the following lines look
/// like a post head (id line then a '#' header), so single-post bodies may
/// contain blank lines.
std::vector<Document> parse_posts(std::string_view raw);

/// Load every regular file in a directory (sorted by filename) as posts.
/// Throws on duplicate document ids.
std::vector<Document> load_corpus_dir(const std::filesystem::path& dir);

/// Tab-separated export: doc_id, offset, left, hit, right (header row, LF).
std::string concordance_tsv(const std::vector<ConcordanceLine>& lines);

}  // namespace robopinion::corpus
