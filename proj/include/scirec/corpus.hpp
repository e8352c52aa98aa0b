#pragma once
// Bibliographic corpus: papers, canonical keywords, keyword postings and
// citation lists.
//
// Papers and keywords are assigned dense indices in lexicographic order of
// their ids, so every downstream computation iterates in a fixed order.
// Adjacency is stored CSR-style (offsets + flat array):
//
//   keywords_of(p)   K(p), sorted keyword indices
//   postings(A)      P(A), sorted paper indices
//   raw_citations(p) sorted, deduplicated, self-citations and foreign ids removed
//
// A Corpus is immutable after construction.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace scirec {

using PaperIndex = std::uint32_t;
using KeywordIndex = std::uint32_t;

// Lowercase (ASCII), trim, collapse runs of whitespace into one space.
std::string canonicalize_keyword(std::string_view raw);

struct PaperRecord {
    std::string id;
    std::string title;
    std::vector<std::string> keywords;
    std::vector<std::string> cites;
};

struct CorpusStats {
    std::uint64_t paper_count = 0;
    std::uint64_t keyword_count = 0;
    std::uint64_t citation_count = 0;
    std::uint64_t state_count = 0;

    bool operator==(const CorpusStats&) const = default;
};

enum class InputFormat { jsonl, csv };

InputFormat parse_input_format(std::string_view name);

class Corpus {
public:
    Corpus() = default;

    // Validates and normalizes raw records. Throws ValidationError when a
    // paper ends up with no keywords or a paper id is duplicated/empty.
    static Corpus from_records(std::vector<PaperRecord> records);

    std::size_t paper_count() const { return paper_ids_.size(); }
    std::size_t keyword_count() const { return keyword_ids_.size(); }

    const std::string& paper_id(PaperIndex p) const { return paper_ids_.at(p); }
    const std::string& paper_title(PaperIndex p) const { return titles_.at(p); }
    const std::string& keyword_id(KeywordIndex a) const { return keyword_ids_.at(a); }
    const std::vector<std::string>& paper_ids() const { return paper_ids_; }
    const std::vector<std::string>& keyword_ids() const { return keyword_ids_; }

    std::optional<PaperIndex> find_paper(std::string_view id) const;
    // The raw keyword is canonicalized before lookup.
    std::optional<KeywordIndex> find_keyword(std::string_view raw) const;
    PaperIndex paper_index(std::string_view id) const;        // throws UnknownPaper
    KeywordIndex keyword_index(std::string_view raw) const;   // throws UnknownKeyword

    std::span<const KeywordIndex> keywords_of(PaperIndex p) const {
        return {paper_keywords_.data() + paper_keyword_offsets_[p],
                paper_keywords_.data() + paper_keyword_offsets_[p + 1]};
    }
    std::span<const PaperIndex> postings(KeywordIndex a) const {
        return {posting_papers_.data() + posting_offsets_[a],
                posting_papers_.data() + posting_offsets_[a + 1]};
    }
    std::span<const PaperIndex> raw_citations(PaperIndex p) const {
        return {citations_.data() + citation_offsets_[p], citations_.data() + citation_offsets_[p + 1]};
    }

    // Offset of paper p's first keyword in the flattened K(p) array. This is
    // also the index of the first (keyword, p) state.
    std::uint64_t keyword_offset(PaperIndex p) const { return paper_keyword_offsets_[p]; }

    bool has_keyword(PaperIndex p, KeywordIndex a) const;
    bool cites(PaperIndex from, PaperIndex to) const;

    // A paper that cites nothing is treated as citing the whole corpus,
    // itself included.
    bool uses_citation_fallback(PaperIndex p) const { return raw_citations(p).empty(); }
    std::size_t cited_count(PaperIndex p) const;
    bool in_cited_set(PaperIndex from, PaperIndex to) const;
    std::vector<PaperIndex> cited_set(PaperIndex p) const;
    std::vector<std::string> cited_set(std::string_view paper_id) const;

    CorpusStats stats() const;

    bool operator==(const Corpus& other) const;

private:
    std::vector<std::string> paper_ids_;
    std::vector<std::string> titles_;
    std::vector<std::string> keyword_ids_;

    std::vector<std::uint64_t> paper_keyword_offsets_{0};
    std::vector<KeywordIndex> paper_keywords_;
    std::vector<std::uint64_t> posting_offsets_{0};
    std::vector<PaperIndex> posting_papers_;
    std::vector<std::uint64_t> citation_offsets_{0};
    std::vector<PaperIndex> citations_;

    std::unordered_map<std::string, PaperIndex> paper_lookup_;
    std::unordered_map<std::string, KeywordIndex> keyword_lookup_;
};

std::vector<PaperRecord> read_jsonl_records(const std::filesystem::path& file);
// `path` is either a directory holding papers.csv / paper_keywords.csv /
// citations.csv, or the papers.csv file itself (siblings looked up next to it).
std::vector<PaperRecord> read_csv_records(const std::filesystem::path& path);

Corpus load_corpus(const std::filesystem::path& papers_file, InputFormat format);

}  // namespace scirec
