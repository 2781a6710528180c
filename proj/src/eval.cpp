#include "subsumm/eval.hpp"

#include <sstream>

#include "json.hpp"
#include "subsumm/error.hpp"
#include "subsumm/rng.hpp"
#include "subsumm/rouge.hpp"

namespace subsumm {

using nlohmann::json;

std::string MetricsTable::to_csv() const {
    std::ostringstream out;
    out << "variant,perspective,n,r1,r2,rl\n";
    for (const MetricsRow& r : rows)
        out << r.variant << ',' << r.perspective << ',' << r.n << ',' << r.r1 << ',' << r.r2 << ','
            << r.rl << '\n';
    return out.str();
}

std::string MetricsTable::to_json() const {
    json j = json::array();
    for (const MetricsRow& r : rows)
        j.push_back({{"variant", r.variant},
                     {"perspective", r.perspective},
                     {"n", r.n},
                     {"r1", r.r1},
                     {"r2", r.r2},
                     {"rl", r.rl}});
    return j.dump(2);
}

MetricsRow evaluate(const ModelBundle& bundle, const Vocab& vocab, const Corpus& corpus,
                    Perspective perspective, const RunConfig& cfg,
                    SubsetStrategy inference_strategy, const std::string& variant) {
    std::vector<const Entity*> entities;
    for (const Entity& e : corpus.entities)
        if (e.summary(perspective) && !e.summary(perspective)->empty()) entities.push_back(&e);
    if (entities.empty()) throw Error("EmptySplit", "no entities with a reference");

    std::vector<RougeScore> scores(entities.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < static_cast<int>(entities.size()); ++i) {
        const Entity& e = *entities[i];
        uint64_t seed = derive_seed(cfg.master_seed, std::string("evalinfer/") +
                                                         to_string(perspective) + "/" + e.entity_id);
        InferResult r =
            infer(bundle, vocab, e, perspective, cfg, corpus.rating_max, inference_strategy, seed);
        scores[i] = rouge_all(r.summary, *e.summary(perspective));
    }
    MetricsRow row;
    row.variant = variant;
    row.perspective = to_string(perspective);
    row.n = static_cast<int>(entities.size());
    for (const RougeScore& s : scores) {
        row.r1 += s.r1.f1;
        row.r2 += s.r2.f1;
        row.rl += s.rl.f1;
    }
    row.r1 /= row.n;
    row.r2 /= row.n;
    row.rl /= row.n;
    return row;
}

MetricsTable compare_strategies(const Corpus& train, const Corpus& test, const Vocab& vocab,
                                const SentimentModel& sentiment, const ValuationScorer& scorer,
                                Perspective perspective, const RunConfig& cfg) {
    auto train_variant = [&](SubsetStrategy s) {
        return train_stage1(train, vocab, sentiment, scorer, perspective, cfg, s).model;
    };
    SummarizerModel rand_model = train_variant(SubsetStrategy::Random);
    SummarizerModel senti_rand_model = train_variant(SubsetStrategy::SentimentRandom);
    SummarizerModel senti_info_model = train_variant(SubsetStrategy::SentimentInfo);

    MetricsTable table;
    auto row = [&](const SummarizerModel& m, SubsetStrategy infer_s, const std::string& name) {
        ModelBundle bundle{sentiment, scorer, m};
        table.rows.push_back(evaluate(bundle, vocab, test, perspective, cfg, infer_s, name));
    };
    row(rand_model, SubsetStrategy::Random, "rand");
    row(senti_rand_model, SubsetStrategy::SentimentRandom, "senti-rand");
    row(senti_info_model, SubsetStrategy::SentimentInfo, "senti-info");
    // shares the senti-rand checkpoint; only the test subsets differ
    row(senti_rand_model, SubsetStrategy::SentimentInfo, "senti-rand-info");
    return table;
}

MetricsRow run_ablation(const AblationSpec& spec, const Corpus& train, const Corpus& test,
                        const Vocab& vocab, const SentimentModel& sentiment,
                        const ValuationScorer& scorer, Perspective perspective,
                        const RunConfig& cfg, const std::string& variant) {
    if (spec.skip_stage1 && spec.skip_stage2)
        throw Error("InvalidAblation", "at most one of skip_stage1/skip_stage2");

    SubsetStrategy stage1_strategy =
        spec.random_in_stage1 ? SubsetStrategy::Random : SubsetStrategy::SentimentRandom;

    SummarizerModel stage1;
    if (spec.skip_stage1) {
        stage1 = make_summarizer(
            vocab.size(), cfg.emb_dim, cfg.ctx_dim,
            derive_seed(cfg.master_seed, std::string("stage1/init/") + to_string(perspective)));
    } else {
        stage1 = train_stage1(train, vocab, sentiment, scorer, perspective, cfg, stage1_strategy)
                     .model;
    }

    SummarizerModel final_model = stage1;
    if (!spec.skip_stage2) {
        SubsetStrategy cand_strategy = spec.random_in_stage2
                                           ? SubsetStrategy::Random
                                           : SubsetStrategy::SentimentInfoWeighted;
        SubsetStrategy input_strategy =
            spec.random_in_stage2 ? SubsetStrategy::Random : SubsetStrategy::SentimentInfo;
        CandidateStore cands = gen_candidates(train, vocab, stage1, sentiment, scorer, perspective,
                                              cfg, cand_strategy);
        final_model = train_stage2(train, vocab, stage1, sentiment, scorer, cands, perspective,
                                   cfg, input_strategy)
                          .model;
    }

    ModelBundle bundle{sentiment, scorer, final_model};
    return evaluate(bundle, vocab, test, perspective, cfg, spec.strategy_for_inference, variant);
}

}  // namespace subsumm
