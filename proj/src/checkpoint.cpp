#include "subsumm/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "json.hpp"
#include "subsumm/error.hpp"

namespace subsumm {

using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'S', 'B', 'S', 'M'};

void write_u32(std::ofstream& out, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t read_u32(std::ifstream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw Error("TruncatedPayload", "unexpected end of file");
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

void write_doubles(std::ofstream& out, const std::vector<double>& v) {
    for (double d : v) {
        uint64_t bits;
        std::memcpy(&bits, &d, 8);
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
        out.write(reinterpret_cast<const char*>(b), 8);
    }
}

void read_doubles(std::ifstream& in, std::vector<double>& v, size_t n) {
    v.resize(n);
    for (size_t k = 0; k < n; ++k) {
        unsigned char b[8];
        in.read(reinterpret_cast<char*>(b), 8);
        if (!in) throw Error("TruncatedPayload", "payload shorter than header dims");
        uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= static_cast<uint64_t>(b[i]) << (8 * i);
        double d;
        std::memcpy(&d, &bits, 8);
        v[k] = d;
    }
}

void save_blob(const std::string& path, const json& header,
               const std::vector<const std::vector<double>*>& blocks) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("IoError", "cannot write " + path);
    out.write(kMagic, 4);
    write_u32(out, kCheckpointVersion);
    std::string h = header.dump();
    write_u32(out, static_cast<uint32_t>(h.size()));
    out.write(h.data(), static_cast<std::streamsize>(h.size()));
    for (const auto* b : blocks) write_doubles(out, *b);
}

json open_blob(std::ifstream& in, const std::string& path, const std::string& expected_kind) {
    if (!in) throw Error("IoError", "cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw Error("BadMagic", path);
    uint32_t version = read_u32(in);
    if (version != kCheckpointVersion)
        throw Error("VersionMismatch", "version " + std::to_string(version));
    uint32_t hlen = read_u32(in);
    std::string h(hlen, '\0');
    in.read(h.data(), hlen);
    if (!in) throw Error("TruncatedPayload", "header truncated");
    json header = json::parse(h, nullptr, false);
    if (header.is_discarded()) throw Error("BadMagic", "header is not JSON");
    if (!expected_kind.empty() && header.value("kind", "") != expected_kind)
        throw Error("WrongKind", "expected " + expected_kind + " checkpoint");
    return header;
}

void expect_eof(std::ifstream& in) {
    char extra;
    if (in.read(&extra, 1)) throw Error("TruncatedPayload", "payload longer than header dims");
}

}  // namespace

void save_checkpoint(const SentimentModel& model, const std::string& path) {
    save_blob(path,
              {{"kind", "sentiment"}, {"num_classes", model.num_classes}, {"dim", kFeatureDim}},
              {&model.weights, &model.bias});
}

SentimentModel load_sentiment_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    json h = open_blob(in, path, "sentiment");
    int classes = h.value("num_classes", 0);
    if (classes < 1 || h.value("dim", 0) != kFeatureDim)
        throw Error("DimMismatch", "sentiment dims in " + path);
    SentimentModel m;
    m.num_classes = classes;
    read_doubles(in, m.weights, static_cast<size_t>(classes) * kFeatureDim);
    read_doubles(in, m.bias, classes);
    expect_eof(in);
    return m;
}

void save_checkpoint(const ValuationScorer& scorer, const std::string& path) {
    save_blob(path, {{"kind", "valuation"}, {"dim", scorer.dim}, {"feature_dim", kFeatureDim}},
              {&scorer.proj});
}

ValuationScorer load_valuation_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    json h = open_blob(in, path, "valuation");
    int dim = h.value("dim", 0);
    if (dim < 1 || h.value("feature_dim", 0) != kFeatureDim)
        throw Error("DimMismatch", "valuation dims in " + path);
    ValuationScorer s;
    s.dim = dim;
    read_doubles(in, s.proj, static_cast<size_t>(dim) * kFeatureDim);
    expect_eof(in);
    return s;
}

void save_checkpoint(const SummarizerModel& model, const std::string& path) {
    save_blob(path,
              {{"kind", "summarizer"},
               {"vocab_size", model.vocab_size},
               {"emb_dim", model.emb_dim},
               {"ctx_dim", model.ctx_dim},
               {"feature_dim", kFeatureDim}},
              {&model.emb, &model.ctx_proj, &model.cond, &model.hidden, &model.out_w, &model.out_b});
}

SummarizerModel load_summarizer_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    json h = open_blob(in, path, "summarizer");
    SummarizerModel m;
    m.vocab_size = h.value("vocab_size", 0);
    m.emb_dim = h.value("emb_dim", 0);
    m.ctx_dim = h.value("ctx_dim", 0);
    if (m.vocab_size < Vocab::kNumReserved || m.emb_dim < 1 || m.ctx_dim < 1 ||
        h.value("feature_dim", 0) != kFeatureDim)
        throw Error("DimMismatch", "summarizer dims in " + path);
    read_doubles(in, m.emb, static_cast<size_t>(m.vocab_size) * m.emb_dim);
    read_doubles(in, m.ctx_proj, static_cast<size_t>(m.ctx_dim) * kFeatureDim);
    read_doubles(in, m.cond, static_cast<size_t>(m.emb_dim) * m.ctx_dim);
    read_doubles(in, m.hidden, static_cast<size_t>(m.emb_dim) * m.emb_dim);
    read_doubles(in, m.out_w, static_cast<size_t>(m.vocab_size) * m.emb_dim);
    read_doubles(in, m.out_b, m.vocab_size);
    expect_eof(in);
    return m;
}

std::string checkpoint_kind(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return open_blob(in, path, "").value("kind", "");
}

}  // namespace subsumm
