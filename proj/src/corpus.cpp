#include "scirec/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "scirec/error.hpp"

namespace scirec {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF tolerant.
// Quoted fields may not span lines.
std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    bool field_was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            if (!cur.empty() || field_was_quoted) throw ParseError(line_no, "stray quote in field");
            quoted = true;
            field_was_quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
            field_was_quoted = false;
        } else if (c == '\r' && i + 1 == line.size()) {
            // CRLF
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) throw ParseError(line_no, "unterminated quoted field");
    fields.push_back(std::move(cur));
    return fields;
}

struct CsvTable {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
};

CsvTable read_csv_table(const std::filesystem::path& file, std::size_t expected_columns, bool required) {
    CsvTable table;
    std::ifstream in(file);
    if (!in) {
        if (!required) return table;
        throw IoError("cannot open " + file.string());
    }
    std::string line;
    std::size_t line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line, line_no);
        if (header) {
            header = false;
            if (fields.size() != expected_columns)
                throw ParseError(line_no, file.filename().string() + ": expected " +
                                              std::to_string(expected_columns) + " header columns");
            continue;
        }
        if (fields.size() != expected_columns)
            throw ParseError(line_no, file.filename().string() + ": expected " +
                                          std::to_string(expected_columns) + " columns, got " +
                                          std::to_string(fields.size()));
        table.rows.push_back(std::move(fields));
        table.line_numbers.push_back(line_no);
    }
    return table;
}

template <class Index>
void build_csr(const std::vector<std::vector<Index>>& lists, std::vector<std::uint64_t>& offsets,
               std::vector<Index>& flat) {
    offsets.assign(1, 0);
    flat.clear();
    for (const auto& l : lists) {
        flat.insert(flat.end(), l.begin(), l.end());
        offsets.push_back(flat.size());
    }
}

}  // namespace

std::string canonicalize_keyword(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char c : raw) {
        if (is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

InputFormat parse_input_format(std::string_view name) {
    if (name == "jsonl") return InputFormat::jsonl;
    if (name == "csv") return InputFormat::csv;
    throw InvalidConfig("unknown input format '" + std::string(name) + "' (expected jsonl or csv)");
}

Corpus Corpus::from_records(std::vector<PaperRecord> records) {
    std::map<std::string, std::size_t> by_id;
    std::vector<std::string> empty_ids;
    std::vector<std::string> duplicates;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].id.empty()) {
            empty_ids.push_back("<record " + std::to_string(i + 1) + ">");
            continue;
        }
        if (!by_id.emplace(records[i].id, i).second) duplicates.push_back(records[i].id);
    }
    if (!empty_ids.empty()) throw ValidationError("papers with empty id", empty_ids);
    if (!duplicates.empty()) throw ValidationError("duplicate paper ids", duplicates);

    // Canonical keyword sets per paper; reject papers left with none.
    std::vector<std::set<std::string>> canon(records.size());
    std::vector<std::string> keywordless;
    std::set<std::string> all_keywords;
    for (const auto& [id, i] : by_id) {
        for (const auto& raw : records[i].keywords) {
            auto k = canonicalize_keyword(raw);
            if (!k.empty()) canon[i].insert(std::move(k));
        }
        if (canon[i].empty()) keywordless.push_back(id);
        all_keywords.insert(canon[i].begin(), canon[i].end());
    }
    if (!keywordless.empty()) throw ValidationError("papers without keywords", keywordless);

    Corpus c;
    c.keyword_ids_.assign(all_keywords.begin(), all_keywords.end());
    for (std::size_t i = 0; i < c.keyword_ids_.size(); ++i)
        c.keyword_lookup_.emplace(c.keyword_ids_[i], static_cast<KeywordIndex>(i));

    std::vector<std::size_t> record_of;
    for (const auto& [id, i] : by_id) {
        c.paper_lookup_.emplace(id, static_cast<PaperIndex>(c.paper_ids_.size()));
        c.paper_ids_.push_back(id);
        c.titles_.push_back(records[i].title);
        record_of.push_back(i);
    }

    const std::size_t n = c.paper_ids_.size();
    std::vector<std::vector<KeywordIndex>> kw(n);
    std::vector<std::vector<PaperIndex>> posting(c.keyword_ids_.size());
    std::vector<std::vector<PaperIndex>> cites(n);
    for (PaperIndex p = 0; p < n; ++p) {
        const auto& rec = records[record_of[p]];
        // std::set iteration is lexicographic, matching index order.
        for (const auto& k : canon[record_of[p]]) {
            KeywordIndex a = c.keyword_lookup_.at(k);
            kw[p].push_back(a);
            posting[a].push_back(p);
        }
        for (const auto& target : rec.cites) {
            auto it = c.paper_lookup_.find(target);
            if (it == c.paper_lookup_.end() || it->second == p) continue;
            cites[p].push_back(it->second);
        }
        std::sort(cites[p].begin(), cites[p].end());
        cites[p].erase(std::unique(cites[p].begin(), cites[p].end()), cites[p].end());
    }
    build_csr(kw, c.paper_keyword_offsets_, c.paper_keywords_);
    build_csr(posting, c.posting_offsets_, c.posting_papers_);
    build_csr(cites, c.citation_offsets_, c.citations_);
    return c;
}

std::optional<PaperIndex> Corpus::find_paper(std::string_view id) const {
    auto it = paper_lookup_.find(std::string(id));
    if (it == paper_lookup_.end()) return std::nullopt;
    return it->second;
}

std::optional<KeywordIndex> Corpus::find_keyword(std::string_view raw) const {
    auto it = keyword_lookup_.find(canonicalize_keyword(raw));
    if (it == keyword_lookup_.end()) return std::nullopt;
    return it->second;
}

PaperIndex Corpus::paper_index(std::string_view id) const {
    if (auto p = find_paper(id)) return *p;
    throw UnknownPaper(std::string(id));
}

KeywordIndex Corpus::keyword_index(std::string_view raw) const {
    if (auto a = find_keyword(raw)) return *a;
    throw UnknownKeyword(std::string(raw));
}

bool Corpus::has_keyword(PaperIndex p, KeywordIndex a) const {
    auto k = keywords_of(p);
    return std::binary_search(k.begin(), k.end(), a);
}

bool Corpus::cites(PaperIndex from, PaperIndex to) const {
    auto c = raw_citations(from);
    return std::binary_search(c.begin(), c.end(), to);
}

std::size_t Corpus::cited_count(PaperIndex p) const {
    auto c = raw_citations(p);
    return c.empty() ? paper_count() : c.size();
}

bool Corpus::in_cited_set(PaperIndex from, PaperIndex to) const {
    return uses_citation_fallback(from) || cites(from, to);
}

std::vector<PaperIndex> Corpus::cited_set(PaperIndex p) const {
    if (p >= paper_count()) throw UnknownPaper("#" + std::to_string(p));
    auto c = raw_citations(p);
    if (!c.empty()) return {c.begin(), c.end()};
    std::vector<PaperIndex> all(paper_count());
    for (PaperIndex q = 0; q < all.size(); ++q) all[q] = q;
    return all;
}

std::vector<std::string> Corpus::cited_set(std::string_view paper_id) const {
    std::vector<std::string> out;
    for (PaperIndex q : cited_set(paper_index(paper_id))) out.push_back(paper_ids_[q]);
    return out;
}

CorpusStats Corpus::stats() const {
    return {paper_count(), keyword_count(), citations_.size(), paper_keywords_.size()};
}

bool Corpus::operator==(const Corpus& o) const {
    return paper_ids_ == o.paper_ids_ && titles_ == o.titles_ && keyword_ids_ == o.keyword_ids_ &&
           paper_keyword_offsets_ == o.paper_keyword_offsets_ && paper_keywords_ == o.paper_keywords_ &&
           posting_offsets_ == o.posting_offsets_ && posting_papers_ == o.posting_papers_ &&
           citation_offsets_ == o.citation_offsets_ && citations_ == o.citations_;
}

std::vector<PaperRecord> read_jsonl_records(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file.string());
    std::vector<PaperRecord> records;
    std::string line;
    std::size_t line_no = 0;
    auto string_list = [&](const nlohmann::json& j, const char* key) {
        std::vector<std::string> out;
        if (!j.contains(key)) return out;
        const auto& v = j.at(key);
        if (!v.is_array()) throw ParseError(line_no, std::string("'") + key + "' must be an array");
        for (const auto& e : v) {
            if (!e.is_string()) throw ParseError(line_no, std::string("'") + key + "' entries must be strings");
            out.push_back(e.get<std::string>());
        }
        return out;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (std::all_of(line.begin(), line.end(), is_space)) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(line_no, e.what());
        }
        if (!j.is_object()) throw ParseError(line_no, "record must be a JSON object");
        if (!j.contains("id") || !j.at("id").is_string()) throw ParseError(line_no, "missing string field 'id'");
        if (!j.contains("keywords")) throw ParseError(line_no, "missing field 'keywords'");
        PaperRecord rec;
        rec.id = j.at("id").get<std::string>();
        if (j.contains("title")) {
            if (!j.at("title").is_string()) throw ParseError(line_no, "'title' must be a string");
            rec.title = j.at("title").get<std::string>();
        }
        rec.keywords = string_list(j, "keywords");
        rec.cites = string_list(j, "cites");
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<PaperRecord> read_csv_records(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    fs::path dir = fs::is_directory(path) ? path : path.parent_path();
    fs::path papers_file = fs::is_directory(path) ? dir / "papers.csv" : path;

    auto papers = read_csv_table(papers_file, 2, true);
    auto keywords = read_csv_table(dir / "paper_keywords.csv", 2, true);
    auto citations = read_csv_table(dir / "citations.csv", 2, false);

    std::vector<PaperRecord> records;
    std::map<std::string, std::size_t> slot;
    for (auto& row : papers.rows) {
        slot.emplace(row[0], records.size());
        records.push_back({row[0], row[1], {}, {}});
    }
    std::vector<std::string> unknown;
    for (auto& row : keywords.rows) {
        auto it = slot.find(row[0]);
        if (it == slot.end()) {
            unknown.push_back(row[0]);
            continue;
        }
        records[it->second].keywords.push_back(row[1]);
    }
    if (!unknown.empty()) throw ValidationError("paper_keywords.csv references unknown papers", unknown);
    for (auto& row : citations.rows) {
        // Citations from unknown papers are foreign and dropped, like foreign targets.
        auto it = slot.find(row[0]);
        if (it != slot.end()) records[it->second].cites.push_back(row[1]);
    }
    return records;
}

Corpus load_corpus(const std::filesystem::path& papers_file, InputFormat format) {
    if (!std::filesystem::exists(papers_file)) throw IoError("no such file: " + papers_file.string());
    auto records = format == InputFormat::jsonl ? read_jsonl_records(papers_file) : read_csv_records(papers_file);
    return Corpus::from_records(std::move(records));
}

}  // namespace scirec
