#pragma once

#include <string>

#include "subsumm/sentiment.hpp"
#include "subsumm/summodel.hpp"
#include "subsumm/valuation.hpp"

namespace subsumm {

// Checkpoint file: magic "SBSM", u32 version, u32 header length, JSON header
// (kind + dims), little-endian f64 payload row-major. Errors: BadMagic,
// VersionMismatch, DimMismatch, TruncatedPayload, WrongKind.
constexpr uint32_t kCheckpointVersion = 1;

void save_checkpoint(const SentimentModel& model, const std::string& path);
void save_checkpoint(const ValuationScorer& scorer, const std::string& path);
void save_checkpoint(const SummarizerModel& model, const std::string& path);

SentimentModel load_sentiment_checkpoint(const std::string& path);
ValuationScorer load_valuation_checkpoint(const std::string& path);
SummarizerModel load_summarizer_checkpoint(const std::string& path);

// Kind tag of an on-disk checkpoint without loading the payload.
std::string checkpoint_kind(const std::string& path);

}  // namespace subsumm
