#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "subsumm/corpus.hpp"

namespace subsumm {

struct PRF {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct RougeScore {
    PRF r1, r2, rl;
};

using TokenView = std::span<const std::string>;

// n-grams keyed by their tokens joined with '\x1f', with multiplicity.
std::unordered_map<std::string, int> ngram_counts(TokenView tokens, int n);

PRF rouge_n(TokenView candidate, TokenView reference, int n);
PRF rouge_l(TokenView candidate, TokenView reference);

RougeScore rouge_all(TokenView candidate, TokenView reference);

// Mean of R-1/R-2/R-L F1; the ranking metric for reviews and candidates.
double rouge_mean(TokenView candidate, TokenView reference);

size_t lcs_length(TokenView a, TokenView b);

}  // namespace subsumm
