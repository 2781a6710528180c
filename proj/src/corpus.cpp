#include "subsumm/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "json.hpp"
#include "subsumm/error.hpp"

namespace subsumm {

using nlohmann::json;

const char* to_string(Perspective p) {
    switch (p) {
        case Perspective::Pros: return "pros";
        case Perspective::Cons: return "cons";
        case Perspective::Verdict: return "verdict";
    }
    return "?";
}

std::optional<Perspective> perspective_from_string(const std::string& s) {
    if (s == "pros") return Perspective::Pros;
    if (s == "cons") return Perspective::Cons;
    if (s == "verdict") return Perspective::Verdict;
    return std::nullopt;
}

TokenSeq tokenize(const std::string& text) {
    TokenSeq out;
    std::string cur;
    for (unsigned char c : text) {
        bool word = std::isalnum(c) || c >= 0x80;
        if (word) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

namespace {

std::string join_tokens(const TokenSeq& tokens) {
    std::string s;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i) s.push_back(' ');
        s += tokens[i];
    }
    return s;
}

Entity parse_entity(const json& j, int line_no, int rating_max) {
    auto require = [&](const char* field) -> const json& {
        if (!j.contains(field))
            throw Error("MissingField", std::string(field) + " at line " + std::to_string(line_no));
        return j.at(field);
    };
    Entity e;
    e.entity_id = require("entity_id").get<std::string>();
    const json& reviews = require("reviews");
    if (!reviews.is_array() || reviews.empty())
        throw Error("EmptyReviewSet", "entity " + e.entity_id + " at line " + std::to_string(line_no));
    int id = 0;
    for (const auto& r : reviews) {
        Review rev;
        rev.id = id++;
        if (!r.contains("text"))
            throw Error("MissingField", "reviews[].text at line " + std::to_string(line_no));
        if (!r.contains("rating"))
            throw Error("MissingField", "reviews[].rating at line " + std::to_string(line_no));
        rev.text = r.at("text").get<std::string>();
        rev.rating = r.at("rating").get<int>();
        if (rev.rating < 1 || rev.rating > rating_max)
            throw Error("RatingOutOfRange",
                        "rating " + std::to_string(rev.rating) + " at line " + std::to_string(line_no));
        rev.tokens = tokenize(rev.text);
        if (rev.tokens.empty())
            throw Error("MalformedLine", "empty review text at line " + std::to_string(line_no));
        e.reviews.push_back(std::move(rev));
    }
    if (j.contains("summaries")) {
        const json& s = j.at("summaries");
        for (Perspective p : kAllPerspectives) {
            const char* key = to_string(p);
            if (s.contains(key) && !s.at(key).is_null())
                e.summaries[p] = tokenize(s.at(key).get<std::string>());
        }
    }
    return e;
}

}  // namespace

Corpus load_corpus(const std::string& path, Split split) {
    std::ifstream in(path);
    if (!in) throw Error("IoError", "cannot open " + path);
    Corpus corpus;
    corpus.split = split;
    std::string line;
    int line_no = 0;
    bool first = true;
    std::unordered_map<std::string, int> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error&) {
            throw Error("MalformedLine", "line " + std::to_string(line_no));
        }
        if (first && j.contains("meta")) {
            corpus.rating_max = j.at("meta").value("rating_max", 5);
            first = false;
            continue;
        }
        first = false;
        Entity e = parse_entity(j, line_no, corpus.rating_max);
        if (seen.count(e.entity_id))
            throw Error("MalformedLine",
                        "duplicate entity_id " + e.entity_id + " at line " + std::to_string(line_no));
        seen[e.entity_id] = line_no;
        corpus.entities.push_back(std::move(e));
    }
    return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("IoError", "cannot write " + path);
    out << json{{"meta", {{"rating_max", corpus.rating_max}}}}.dump() << "\n";
    for (const Entity& e : corpus.entities) {
        json reviews = json::array();
        for (const Review& r : e.reviews)
            reviews.push_back({{"text", r.text}, {"rating", r.rating}});
        json summaries;
        for (Perspective p : kAllPerspectives) {
            const TokenSeq* s = e.summary(p);
            summaries[to_string(p)] = s ? json(join_tokens(*s)) : json(nullptr);
        }
        out << json{{"entity_id", e.entity_id}, {"reviews", reviews}, {"summaries", summaries}}.dump()
            << "\n";
    }
}

std::vector<int> Vocab::encode(const TokenSeq& tokens) const {
    std::vector<int> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) ids.push_back(id_of(t));
    return ids;
}

TokenSeq Vocab::decode(const std::vector<int>& ids) const {
    TokenSeq out;
    out.reserve(ids.size());
    for (int id : ids)
        out.push_back(id >= 0 && id < size() ? id_to_token[id] : id_to_token[kUnk]);
    return out;
}

Vocab build_vocab(const Corpus& corpus, int min_freq) {
    if (corpus.entities.empty()) throw Error("EmptyCorpus", "no entities");
    std::map<std::string, long> freq;  // ordered map gives the lexicographic tiebreak for free
    for (const Entity& e : corpus.entities) {
        for (const Review& r : e.reviews)
            for (const auto& t : r.tokens) ++freq[t];
        for (const auto& [p, summary] : e.summaries)
            for (const auto& t : summary) ++freq[t];
    }
    std::vector<std::pair<std::string, long>> items(freq.begin(), freq.end());
    std::stable_sort(items.begin(), items.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    Vocab v;
    v.id_to_token = {"<pad>", "<bos>", "<eos>", "<unk>", "<s>"};
    for (const auto& [tok, n] : items)
        if (n >= min_freq) v.id_to_token.push_back(tok);
    for (int i = 0; i < v.size(); ++i) v.token_to_id[v.id_to_token[i]] = i;
    return v;
}

void save_vocab(const Vocab& vocab, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("IoError", "cannot write " + path);
    for (const auto& t : vocab.id_to_token) out << t << "\n";
}

Vocab load_vocab(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("IoError", "cannot open " + path);
    Vocab v;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) v.id_to_token.push_back(line);
    if (v.size() < Vocab::kNumReserved)
        throw Error("MalformedLine", "vocab file too short: " + path);
    for (int i = 0; i < v.size(); ++i) v.token_to_id[v.id_to_token[i]] = i;
    return v;
}

}  // namespace subsumm
