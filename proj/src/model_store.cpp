#include "scirec/model_store.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "scirec/error.hpp"

namespace scirec {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kCorpusMagic{"SCRCORP\0", 8};
constexpr std::string_view kStationaryMagic{"SCRSTAT\0", 8};
constexpr std::string_view kSampleMagic{"SCRSAMP\0", 8};

class Writer {
public:
    explicit Writer(std::string_view magic) {
        buf_.append(magic);
        u32(kBinaryFormatVersion);
    }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void str(std::string_view s) {
        u64(s.size());
        buf_.append(s);
    }
    std::string finish() {
        const auto h = fnv1a64(buf_);
        u64(h);
        return std::move(buf_);
    }

private:
    std::string buf_;
};

class Reader {
public:
    Reader(std::string_view bytes, std::string_view magic, const char* what) : what_(what) {
        if (bytes.size() < magic.size() + 4 + 8) fail("file too short");
        const auto body = bytes.substr(0, bytes.size() - 8);
        data_ = bytes;
        if (bytes.substr(0, magic.size()) != magic) fail("bad magic");
        pos_ = magic.size();
        const auto version = u32();
        if (version != kBinaryFormatVersion)
            throw VersionMismatch(std::string(what_) + ": format version " + std::to_string(version) +
                                  ", expected " + std::to_string(kBinaryFormatVersion));
        Reader tail(*this);
        tail.pos_ = bytes.size() - 8;
        if (tail.u64() != fnv1a64(body)) fail("checksum mismatch");
        end_ = bytes.size() - 8;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str() {
        const auto n = u64();
        need(n);
        std::string s(data_.substr(pos_, n));
        pos_ += n;
        return s;
    }
    // Element count that must fit in the remaining bytes at `min_size` each.
    std::uint64_t count(std::size_t min_size) {
        const auto n = u64();
        if (min_size && n > remaining() / min_size) fail("implausible element count");
        return n;
    }
    std::size_t remaining() const { return end_ - pos_; }
    void expect_end() {
        if (pos_ != end_) fail("trailing bytes");
    }
    [[noreturn]] void fail(const std::string& why) const { throw ParseError(std::string(what_) + ": " + why); }

private:
    void need(std::uint64_t n) {
        if (n > end_ - pos_) fail("truncated");
    }
    std::string_view data_;
    std::size_t pos_ = 0;
    std::size_t end_ = std::numeric_limits<std::size_t>::max();
    const char* what_;
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failed: " + p.string());
    return ss.str();
}

// Write-then-rename so readers never observe a half-written file.
void write_file(const fs::path& p, std::string_view bytes) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    if (ec) throw IoError("cannot create " + p.parent_path().string() + ": " + ec.message());
    const fs::path tmp = p.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    fs::rename(tmp, p, ec);
    if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

nlohmann::json alpha_json(const ActionWeights& w) {
    return nlohmann::json::array({w.same_paper, w.same_topic, w.citation, w.random_jump});
}

ActionWeights alpha_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 4) throw ParseError("manifest: alpha must be an array of 4 numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string encode_corpus(const Corpus& c) {
    Writer w(kCorpusMagic);
    w.u64(c.keyword_count());
    for (const auto& k : c.keyword_ids()) w.str(k);
    w.u64(c.paper_count());
    for (PaperIndex p = 0; p < c.paper_count(); ++p) {
        w.str(c.paper_id(p));
        w.str(c.paper_title(p));
        const auto kw = c.keywords_of(p);
        w.u64(kw.size());
        for (auto a : kw) w.u32(a);
        const auto cites = c.raw_citations(p);
        w.u64(cites.size());
        for (auto q : cites) w.u32(q);
    }
    return w.finish();
}

Corpus decode_corpus(std::string_view bytes) {
    Reader r(bytes, kCorpusMagic, "corpus.bin");
    std::vector<std::string> keywords(r.count(8));
    for (auto& k : keywords) {
        k = r.str();
        if (k.empty() || canonicalize_keyword(k) != k) r.fail("keyword is not canonical");
    }
    std::vector<PaperRecord> records(r.count(8 * 4));
    std::vector<std::vector<std::uint32_t>> cited(records.size());
    for (std::size_t p = 0; p < records.size(); ++p) {
        auto& rec = records[p];
        rec.id = r.str();
        rec.title = r.str();
        for (auto n = r.count(4); n > 0; --n) {
            const auto a = r.u32();
            if (a >= keywords.size()) r.fail("keyword index out of range");
            rec.keywords.push_back(keywords[a]);
        }
        for (auto n = r.count(4); n > 0; --n) {
            const auto q = r.u32();
            if (q >= records.size()) r.fail("citation index out of range");
            cited[p].push_back(q);
        }
    }
    r.expect_end();
    for (std::size_t p = 0; p < records.size(); ++p)
        for (auto q : cited[p]) records[p].cites.push_back(records[q].id);

    Corpus c = Corpus::from_records(std::move(records));
    // Rebuilding must reproduce the stored encoding exactly; anything else
    // means the file was not written by encode_corpus.
    if (c.keyword_count() != keywords.size() || encode_corpus(c) != bytes)
        r.fail("content is not a canonical corpus encoding");
    return c;
}

std::string corpus_hash(const Corpus& c) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a64(encode_corpus(c))));
    return buf;
}

nlohmann::json ModelManifest::to_json() const {
    nlohmann::json j;
    j["schema_version"] = schema_version;
    j["counts"] = {{"papers", counts.paper_count},
                   {"keywords", counts.keyword_count},
                   {"citations", counts.citation_count},
                   {"states", counts.state_count}};
    j["corpus_hash"] = corpus_hash;
    j["corpus_file"] = "corpus.bin";
    if (stationary) {
        j["stationary"] = {{"file", "stationary.bin"},
                           {"alpha", alpha_json(stationary->alpha)},
                           {"epsilon", stationary->solver.epsilon},
                           {"max_iterations", stationary->solver.max_iterations},
                           {"norm", "max-abs"},
                           {"start", "uniform"},
                           {"iterations", stationary->iterations},
                           {"residual", stationary->residual},
                           {"corpus_hash", stationary->corpus_hash}};
    }
    if (sample) {
        j["sample"] = {{"file", "sample.bin"},
                       {"n0", sample->n0},
                       {"num_sequences", sample->num_sequences},
                       {"seed", sample->seed},
                       {"rng_id", sample->rng_id},
                       {"alpha", alpha_json(sample->alpha)},
                       {"start_law", "stationary"},
                       {"tracked_keywords", sample->tracked_keywords},
                       {"corpus_hash", sample->corpus_hash}};
    }
    return j;
}

ModelManifest ModelManifest::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("schema_version")) throw ParseError("manifest: missing schema_version");
    ModelManifest m;
    try {
        m.schema_version = j.at("schema_version").get<int>();
        if (m.schema_version != kSchemaVersion)
            throw VersionMismatch("manifest schema_version " + std::to_string(m.schema_version) + ", expected " +
                                  std::to_string(kSchemaVersion));
        const auto& c = j.at("counts");
        m.counts = {c.at("papers").get<std::uint64_t>(), c.at("keywords").get<std::uint64_t>(),
                    c.at("citations").get<std::uint64_t>(), c.at("states").get<std::uint64_t>()};
        m.corpus_hash = j.at("corpus_hash").get<std::string>();
        if (j.contains("stationary")) {
            const auto& s = j.at("stationary");
            StationaryManifest sm;
            sm.alpha = alpha_from_json(s.at("alpha"));
            sm.solver.epsilon = s.at("epsilon").get<double>();
            sm.solver.max_iterations = s.at("max_iterations").get<std::size_t>();
            sm.iterations = s.at("iterations").get<std::size_t>();
            sm.residual = s.at("residual").get<double>();
            sm.corpus_hash = s.at("corpus_hash").get<std::string>();
            m.stationary = sm;
        }
        if (j.contains("sample")) {
            const auto& s = j.at("sample");
            SampleManifest sm;
            sm.n0 = s.at("n0").get<std::uint32_t>();
            sm.num_sequences = s.at("num_sequences").get<std::uint64_t>();
            sm.seed = s.at("seed").get<std::uint64_t>();
            sm.rng_id = s.at("rng_id").get<std::string>();
            sm.alpha = alpha_from_json(s.at("alpha"));
            sm.tracked_keywords = s.at("tracked_keywords").get<std::size_t>();
            sm.corpus_hash = s.at("corpus_hash").get<std::string>();
            m.sample = sm;
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("manifest: ") + e.what());
    }
    return m;
}

ModelManifest read_manifest(const fs::path& dir) {
    const auto text = read_file(dir / "manifest.json");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("manifest.json: ") + e.what());
    }
    return ModelManifest::from_json(j);
}

void write_manifest(const fs::path& dir, const ModelManifest& m) {
    write_file(dir / "manifest.json", m.to_json().dump(2) + "\n");
}

void save_model(const Corpus& c, const fs::path& dir) {
    const auto bytes = encode_corpus(c);
    write_file(dir / "corpus.bin", bytes);
    ModelManifest m;
    m.counts = c.stats();
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    m.corpus_hash = buf;
    write_manifest(dir, m);
}

Corpus load_model(const fs::path& dir) {
    const auto manifest = read_manifest(dir);
    const auto bytes = read_file(dir / "corpus.bin");
    Corpus c = decode_corpus(bytes);
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    if (manifest.corpus_hash != buf) throw ParseError("corpus.bin does not match the manifest corpus_hash");
    if (!(c.stats() == manifest.counts)) throw ParseError("corpus.bin does not match the manifest counts");
    return c;
}

std::string encode_stationary(const StationaryScores& s) {
    Writer w(kStationaryMagic);
    w.u64(s.iterations);
    w.f64(s.residual);
    w.u64(s.pr.size());
    for (double x : s.pr) w.f64(x);
    return w.finish();
}

StationaryScores decode_stationary(std::string_view bytes) {
    Reader r(bytes, kStationaryMagic, "stationary.bin");
    StationaryScores s;
    s.iterations = r.u64();
    s.residual = r.f64();
    s.pr.resize(r.count(8));
    for (double& x : s.pr) {
        x = r.f64();
        if (!(x >= 0.0 && x <= 1.0)) r.fail("probability out of range");
    }
    r.expect_end();
    return s;
}

void save_stationary(const fs::path& dir, const StationaryScores& s) {
    write_file(dir / "stationary.bin", encode_stationary(s));
}

StationaryScores load_stationary(const fs::path& dir, std::size_t expected_states) {
    auto s = decode_stationary(read_file(dir / "stationary.bin"));
    if (s.pr.size() != expected_states) throw ParseError("stationary.bin: state count does not match the corpus");
    return s;
}

void save_sample(const fs::path& dir, const SequenceSample& s) {
    Writer w(kSampleMagic);
    w.u32(s.config().n0);
    w.u64(s.config().num_sequences);
    w.u64(s.config().seed);
    w.u64(s.keyword_count());
    for (std::size_t a = 0; a < s.keyword_count(); ++a) w.u32(s.covers(static_cast<KeywordIndex>(a)) ? 1 : 0);
    for (std::uint64_t i = 0; i < s.total(); ++i) {
        const auto seq = s.sequence(i);
        w.u32(static_cast<std::uint32_t>(seq.size()));
        for (auto a : seq) w.u32(a);
    }
    write_file(dir / "sample.bin", w.finish());
}

SequenceSample load_sample(const fs::path& dir, std::size_t expected_keywords) {
    const auto bytes = read_file(dir / "sample.bin");
    Reader r(bytes, kSampleMagic, "sample.bin");
    SamplerConfig cfg;
    cfg.n0 = r.u32();
    cfg.num_sequences = r.u64();
    cfg.seed = r.u64();
    const auto k = r.count(4);
    if (k != expected_keywords) r.fail("keyword count does not match the corpus");
    std::vector<bool> tracked(k);
    for (std::size_t a = 0; a < k; ++a) tracked[a] = r.u32() != 0;
    if (cfg.num_sequences > r.remaining() / 4) r.fail("implausible sequence count");
    std::vector<std::uint64_t> offsets{0};
    offsets.reserve(cfg.num_sequences + 1);
    std::vector<KeywordIndex> keywords;
    for (std::uint64_t i = 0; i < cfg.num_sequences; ++i) {
        const auto len = r.u32();
        if (len > cfg.n0) r.fail("sequence longer than n0");
        KeywordIndex prev = 0;
        for (std::uint32_t t = 0; t < len; ++t) {
            const auto a = r.u32();
            if (a >= k || !tracked[a] || (t > 0 && a <= prev)) r.fail("malformed sequence");
            keywords.push_back(a);
            prev = a;
        }
        offsets.push_back(keywords.size());
    }
    r.expect_end();
    try {
        cfg.validate();
        return SequenceSample(cfg, std::move(tracked), std::move(offsets), std::move(keywords));
    } catch (const InvalidConfig& e) {
        r.fail(e.what());
    }
}

}  // namespace scirec
