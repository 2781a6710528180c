#include "subsumm/pipeline.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"
#include "subsumm/error.hpp"
#include "subsumm/mathutil.hpp"
#include "subsumm/rng.hpp"
#include "subsumm/rouge.hpp"

namespace subsumm {

using nlohmann::json;

const char* to_string(SubsetStrategy s) {
    switch (s) {
        case SubsetStrategy::Random: return "random";
        case SubsetStrategy::SentimentRandom: return "sentiment-random";
        case SubsetStrategy::SentimentInfo: return "sentiment-info";
        case SubsetStrategy::SentimentInfoWeighted: return "sentiment-info-weighted";
    }
    return "?";
}

std::vector<Polarity> entity_tags(const SentimentModel& model, const Entity& entity,
                                  int rating_max) {
    std::vector<Polarity> tags(entity.reviews.size());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < static_cast<int>(entity.reviews.size()); ++i)
        tags[i] = predict_sentiment(model, entity.reviews[i], rating_max).polarity;
    return tags;
}

std::vector<double> entity_corr(const ValuationScorer& scorer, const Entity& entity) {
    if (entity.reviews.size() < 2) return std::vector<double>(entity.reviews.size(), 0.0);
    return corr_scores(scorer, entity.reviews);
}

Subset draw_subset(SubsetStrategy strategy, const Entity& entity,
                   const std::vector<Polarity>& tags, const std::vector<double>& corr,
                   Perspective perspective, int k, uint64_t seed) {
    if (strategy == SubsetStrategy::Random) return sample_random(entity, k, seed);
    int n_pos = static_cast<int>(std::count(tags.begin(), tags.end(), Polarity::Positive));
    int n_neg = static_cast<int>(tags.size()) - n_pos;
    Quota quota = compute_quota(perspective, k, n_pos, n_neg);
    switch (strategy) {
        case SubsetStrategy::SentimentRandom:
            return sample_sentiment_random(entity, tags, quota, seed);
        case SubsetStrategy::SentimentInfo:
            return select_sentiment_info(entity, tags, corr, quota);
        case SubsetStrategy::SentimentInfoWeighted:
            return sample_sentiment_info_weighted(entity, tags, corr, quota, seed);
        default: return sample_random(entity, k, seed);
    }
}

namespace {

// Per-entity state reused across epochs.
struct TrainItem {
    const Entity* entity;
    std::vector<FeatureVec> review_features;
    std::vector<int> reference_ids;
    std::vector<Polarity> tags;
    std::vector<double> corr;
};

std::vector<TrainItem> prepare_items(const Corpus& corpus, const Vocab& vocab,
                                     const SentimentModel& sentiment,
                                     const ValuationScorer& scorer, Perspective perspective) {
    std::vector<TrainItem> items;
    for (const Entity& e : corpus.entities) {
        const TokenSeq* ref = e.summary(perspective);
        if (!ref || ref->empty()) continue;
        TrainItem it;
        it.entity = &e;
        it.review_features.reserve(e.reviews.size());
        for (const Review& r : e.reviews) it.review_features.push_back(featurize(r.tokens));
        it.reference_ids = vocab.encode(*ref);
        it.tags = entity_tags(sentiment, e, corpus.rating_max);
        it.corr = entity_corr(scorer, e);
        items.push_back(std::move(it));
    }
    if (items.empty())
        throw Error("NoReferenceForPerspective",
                    std::string("no entity has a ") + to_string(perspective) + " reference");
    return items;
}

FeatureVec pooled_subset(const TrainItem& it, const std::vector<int>& ids) {
    std::vector<FeatureVec> per_review;
    per_review.reserve(ids.size());
    for (int id : ids) per_review.push_back(it.review_features[id]);
    return pool_features(per_review);
}

void apply_update(SummarizerModel& model, SummarizerGrad& grad, double lr, double clip_norm) {
    clip_global_norm(grad.param_blocks(), clip_norm);
    auto mb = model.param_blocks();
    auto gb = grad.param_blocks();
    for (size_t b = 0; b < mb.size(); ++b)
        for (size_t i = 0; i < mb[b]->size(); ++i) (*mb[b])[i] -= lr * (*gb[b])[i];
}

}  // namespace

SummarizerTrainResult train_stage1(const Corpus& corpus, const Vocab& vocab,
                                   const SentimentModel& sentiment, const ValuationScorer& scorer,
                                   Perspective perspective, const RunConfig& cfg,
                                   SubsetStrategy strategy) {
    auto items = prepare_items(corpus, vocab, sentiment, scorer, perspective);

    SummarizerTrainResult result;
    result.model = make_summarizer(
        vocab.size(), cfg.emb_dim, cfg.ctx_dim,
        derive_seed(cfg.master_seed, std::string("stage1/init/") + to_string(perspective)));

    SummarizerGrad grad;
    for (int epoch = 0; epoch < cfg.stage1_epochs; ++epoch) {
        double epoch_loss = 0.0;
        for (size_t start = 0; start < items.size(); start += cfg.batch_entities) {
            size_t end = std::min(items.size(), start + cfg.batch_entities);
            grad.reset(result.model);
            double inv_b = 1.0 / static_cast<double>(end - start);
            for (size_t idx = start; idx < end; ++idx) {
                const TrainItem& it = items[idx];
                uint64_t seed = derive_seed(
                    cfg.master_seed, std::string("stage1/") + to_string(perspective) + "/epoch" +
                                         std::to_string(epoch) + "/" + it.entity->entity_id);
                Subset subset = draw_subset(strategy, *it.entity, it.tags, it.corr, perspective,
                                            cfg.k, seed);
                FeatureVec pooled = pooled_subset(it, subset.review_ids);
                epoch_loss +=
                    grad_xent(result.model, pooled, it.reference_ids, inv_b, grad);
            }
            apply_update(result.model, grad, cfg.stage1_lr, cfg.clip_norm);
        }
        result.epoch_loss.push_back(epoch_loss / static_cast<double>(items.size()));
    }
    return result;
}

CandidateStore gen_candidates(const Corpus& corpus, const Vocab& vocab,
                              const SummarizerModel& stage1, const SentimentModel& sentiment,
                              const ValuationScorer& scorer, Perspective perspective,
                              const RunConfig& cfg, SubsetStrategy strategy) {
    auto items = prepare_items(corpus, vocab, sentiment, scorer, perspective);
    DecodeConfig decode = cfg.decode_for(perspective);

    std::vector<std::vector<Candidate>> results(items.size());
    std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic)
    for (int idx = 0; idx < static_cast<int>(items.size()); ++idx) {
        try {
        const TrainItem& it = items[idx];
        const TokenSeq& ref = *it.entity->summary(perspective);
        std::vector<Candidate> cands;
        for (int m = 0; m < cfg.m; ++m) {
            uint64_t seed = derive_seed(
                cfg.master_seed, std::string("cand/") + to_string(perspective) + "/" +
                                     it.entity->entity_id + "/" + std::to_string(m));
            Subset subset =
                draw_subset(strategy, *it.entity, it.tags, it.corr, perspective, cfg.k, seed);
            FeatureVec pooled = pooled_subset(it, subset.review_ids);
            try {
                DecodeResult dec =
                    beam_search(stage1, context_from_features(stage1, pooled), decode);
                Candidate c;
                c.tokens = vocab.decode(dec.token_ids);
                c.rouge = rouge_mean(c.tokens, ref);
                c.subset_ids = subset.review_ids;
                c.seed = seed;
                cands.push_back(std::move(c));
            } catch (const Error& e) {
                if (e.code() != "DecodeFailure") throw;  // dropped candidate otherwise
            }
        }
        results[idx] = std::move(cands);
        } catch (...) {
#pragma omp critical
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    CandidateStore store;
    for (size_t idx = 0; idx < items.size(); ++idx)
        store[items[idx].entity->entity_id] = std::move(results[idx]);
    return store;
}

void save_candidates(const CandidateStore& store, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("IoError", "cannot write " + path);
    for (const auto& [entity_id, cands] : store) {
        json jc = json::array();
        for (const Candidate& c : cands)
            jc.push_back({{"tokens", c.tokens},
                          {"rouge_mean", c.rouge},
                          {"subset_ids", c.subset_ids},
                          {"seed", c.seed}});
        out << json{{"entity_id", entity_id}, {"candidates", jc}}.dump() << "\n";
    }
}

CandidateStore load_candidates(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("IoError", "cannot open " + path);
    CandidateStore store;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw Error("MalformedLine", "candidate store line " + std::to_string(line_no));
        std::vector<Candidate> cands;
        for (const auto& jc : j.at("candidates")) {
            Candidate c;
            c.tokens = jc.at("tokens").get<TokenSeq>();
            c.rouge = jc.at("rouge_mean").get<double>();
            c.subset_ids = jc.at("subset_ids").get<std::vector<int>>();
            c.seed = jc.at("seed").get<uint64_t>();
            cands.push_back(std::move(c));
        }
        store[j.at("entity_id").get<std::string>()] = std::move(cands);
    }
    return store;
}

std::vector<double> candidate_lh(const SummarizerModel& model, const Vocab& vocab,
                                 const Entity& entity, const std::vector<int>& subset_ids,
                                 const std::vector<Candidate>& candidates, double alpha) {
    std::vector<TokenSeq> reviews;
    for (int id : subset_ids) reviews.push_back(entity.reviews[id].tokens);
    std::vector<double> context = encode_input(model, reviews);
    std::vector<double> lh(candidates.size());
    for (size_t m = 0; m < candidates.size(); ++m) {
        std::vector<int> ids = vocab.encode(candidates[m].tokens);
        double ll = seq_loglik(model, context, ids);
        lh[m] = length_norm_lik(ll, std::max<int>(1, static_cast<int>(ids.size())), alpha);
    }
    return lh;
}

double pairwise_ranking_accuracy(const std::vector<double>& lh,
                                 const std::vector<Candidate>& cands) {
    long correct = 0, total = 0;
    for (size_t i = 0; i < cands.size(); ++i)
        for (size_t j = i + 1; j < cands.size(); ++j) {
            if (std::abs(cands[i].rouge - cands[j].rouge) <= 1e-9) continue;
            ++total;
            bool i_better = cands[i].rouge > cands[j].rouge;
            if ((lh[i] > lh[j]) == i_better && lh[i] != lh[j]) ++correct;
        }
    return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
}

SummarizerTrainResult train_stage2(const Corpus& corpus, const Vocab& vocab,
                                   const SummarizerModel& stage1, const SentimentModel& sentiment,
                                   const ValuationScorer& scorer, const CandidateStore& candidates,
                                   Perspective perspective, const RunConfig& cfg,
                                   SubsetStrategy input_strategy) {
    auto items = prepare_items(corpus, vocab, sentiment, scorer, perspective);
    const double gamma = cfg.gamma_for(perspective);

    struct Stage2Item {
        const TrainItem* base;
        FeatureVec pooled;                   // input subset, fixed across epochs
        std::vector<const Candidate*> cands;
        std::vector<std::vector<int>> cand_ids;
        std::vector<int> cand_len;
        Ranking ranking;                     // by candidate ROUGE, descending
        bool use_ctr = true;
    };
    std::vector<Stage2Item> s2;
    for (const TrainItem& it : items) {
        auto found = candidates.find(it.entity->entity_id);
        if (found == candidates.end() || found->second.size() < 2) continue;  // skipped, logged by CLI
        Stage2Item item;
        item.base = &it;
        uint64_t seed = derive_seed(cfg.master_seed, std::string("stage2/input/") +
                                                         to_string(perspective) + "/" +
                                                         it.entity->entity_id);
        Subset subset =
            draw_subset(input_strategy, *it.entity, it.tags, it.corr, perspective, cfg.k, seed);
        item.pooled = pooled_subset(it, subset.review_ids);
        std::vector<double> rouge_scores;
        for (const Candidate& c : found->second) {
            item.cands.push_back(&c);
            item.cand_ids.push_back(vocab.encode(c.tokens));
            item.cand_len.push_back(std::max<int>(1, static_cast<int>(c.tokens.size())));
            rouge_scores.push_back(c.rouge);
        }
        item.ranking = ranking_from_scores(rouge_scores);
        item.use_ctr = it.reference_ids.size() >= 2;
        s2.push_back(std::move(item));
    }
    if (s2.empty()) throw Error("NoCandidates", "no entity has >= 2 candidates");

    SummarizerTrainResult result;
    result.model = stage1;
    SummarizerGrad grad;
    for (int epoch = 0; epoch < cfg.stage2_epochs; ++epoch) {
        double epoch_loss = 0.0;
        for (size_t start = 0; start < s2.size(); start += cfg.batch_entities) {
            size_t end = std::min(s2.size(), start + cfg.batch_entities);
            grad.reset(result.model);
            double inv_b = 1.0 / static_cast<double>(end - start);
            for (size_t idx = start; idx < end; ++idx) {
                const Stage2Item& item = s2[idx];
                double xent =
                    grad_xent(result.model, item.pooled, item.base->reference_ids, inv_b, grad);
                double ctr = 0.0;
                if (gamma > 0.0 && item.use_ctr) {
                    std::vector<double> context =
                        context_from_features(result.model, item.pooled);
                    const size_t mcount = item.cands.size();
                    std::vector<double> lh(mcount);
                    for (size_t m = 0; m < mcount; ++m)
                        lh[m] = length_norm_lik(seq_loglik(result.model, context, item.cand_ids[m]),
                                                item.cand_len[m], cfg.alpha);
                    ctr = ctr_loss(lh, item.ranking, cfg.lambda_ctr);
                    std::vector<double> coeff = ctr_loss_lh_grad(lh, item.ranking, cfg.lambda_ctr);
                    for (size_t m = 0; m < mcount; ++m) {
                        if (coeff[m] == 0.0) continue;
                        double w = -gamma * inv_b * coeff[m] /
                                   std::pow(static_cast<double>(item.cand_len[m]), cfg.alpha);
                        grad_xent(result.model, item.pooled, item.cand_ids[m], w, grad);
                    }
                }
                epoch_loss += multitask_loss(xent, ctr, gamma);
            }
            apply_update(result.model, grad, cfg.stage2_lr, cfg.clip_norm);
        }
        result.epoch_loss.push_back(epoch_loss / static_cast<double>(s2.size()));
    }
    return result;
}

InferResult infer(const ModelBundle& bundle, const Vocab& vocab, const Entity& entity,
                  Perspective perspective, const RunConfig& cfg, int rating_max,
                  SubsetStrategy strategy, uint64_t seed) {
    if (entity.reviews.empty()) throw Error("EmptyEntity", entity.entity_id);
    InferResult r;
    r.tags = entity_tags(bundle.sentiment, entity, rating_max);
    r.corr = entity_corr(bundle.scorer, entity);
    r.subset = draw_subset(strategy, entity, r.tags, r.corr, perspective, cfg.k, seed);
    std::vector<TokenSeq> reviews;
    for (int id : r.subset.review_ids) reviews.push_back(entity.reviews[id].tokens);
    std::vector<double> context = encode_input(bundle.summarizer, reviews);
    DecodeResult dec = beam_search(bundle.summarizer, context, cfg.decode_for(perspective));
    r.summary = vocab.decode(dec.token_ids);
    r.lh = length_norm_lik(dec.loglik, static_cast<int>(dec.token_ids.size()), cfg.alpha);
    r.blocking_fallback = dec.blocking_fallback;
    return r;
}

std::string infer_audit_json(const std::string& entity_id, Perspective perspective,
                             const InferResult& result) {
    std::string summary;
    for (size_t i = 0; i < result.summary.size(); ++i) {
        if (i) summary.push_back(' ');
        summary += result.summary[i];
    }
    return json{{"entity_id", entity_id},
                {"perspective", to_string(perspective)},
                {"summary", summary},
                {"subset_ids", result.subset.review_ids},
                {"strategy", result.subset.strategy},
                {"corr", result.corr},
                {"lh", result.lh},
                {"blocking_fallback", result.blocking_fallback}}
        .dump();
}

}  // namespace subsumm
