#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace subsumm {

using TokenSeq = std::vector<std::string>;

enum class Perspective { Pros, Cons, Verdict };

constexpr Perspective kAllPerspectives[] = {Perspective::Pros, Perspective::Cons,
                                            Perspective::Verdict};

const char* to_string(Perspective p);
std::optional<Perspective> perspective_from_string(const std::string& s);

// Lowercase, split on maximal runs of non-alphanumeric characters, drop
// empties. Bytes >= 0x80 are kept as token characters so UTF-8 survives.
TokenSeq tokenize(const std::string& text);

struct Review {
    int id = 0;
    std::string text;
    int rating = 0;
    TokenSeq tokens;  // cached tokenize(text)
};

struct Entity {
    std::string entity_id;
    std::vector<Review> reviews;
    std::map<Perspective, TokenSeq> summaries;

    const TokenSeq* summary(Perspective p) const {
        auto it = summaries.find(p);
        return it == summaries.end() ? nullptr : &it->second;
    }
};

enum class Split { Train, Dev, Test };

struct Corpus {
    std::vector<Entity> entities;
    Split split = Split::Train;
    int rating_max = 5;
};

// JSONL: optional {"meta": {"rating_max": int}} header line, then one entity
// per line. Throws Error with codes MalformedLine, MissingField,
// RatingOutOfRange, EmptyReviewSet.
Corpus load_corpus(const std::string& path, Split split);
void save_corpus(const Corpus& corpus, const std::string& path);

struct Vocab {
    static constexpr int kPad = 0;
    static constexpr int kBos = 1;
    static constexpr int kEos = 2;
    static constexpr int kUnk = 3;
    static constexpr int kSep = 4;
    static constexpr int kNumReserved = 5;

    std::vector<std::string> id_to_token;          // index = id
    std::unordered_map<std::string, int> token_to_id;

    int size() const { return static_cast<int>(id_to_token.size()); }

    int id_of(const std::string& token) const {
        auto it = token_to_id.find(token);
        return it == token_to_id.end() ? kUnk : it->second;
    }

    std::vector<int> encode(const TokenSeq& tokens) const;
    TokenSeq decode(const std::vector<int>& ids) const;
};

// Tokens with frequency >= min_freq over reviews + reference summaries,
// ids assigned by frequency desc then lexicographic. Throws EmptyCorpus.
Vocab build_vocab(const Corpus& corpus, int min_freq);

// One token per line, reserved tokens included, line number = id.
void save_vocab(const Vocab& vocab, const std::string& path);
Vocab load_vocab(const std::string& path);

}  // namespace subsumm
