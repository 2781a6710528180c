#include <cstdio>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "subsumm/error.hpp"
#include "subsumm/pipeline.hpp"

using namespace subsumm;

namespace {

bool models_equal(const SummarizerModel& a, const SummarizerModel& b) {
    auto ab = a.param_blocks();
    auto bb = b.param_blocks();
    for (size_t i = 0; i < ab.size(); ++i)
        if (*ab[i] != *bb[i]) return false;
    return true;
}

}  // namespace

TEST_CASE("entity_tags and entity_corr shapes") {
    const auto& w = fixtures::world();
    const Entity& e = w.syn.corpus.entities[0];
    auto tags = entity_tags(w.sentiment, e, w.syn.corpus.rating_max);
    CHECK(tags.size() == e.reviews.size());
    auto corr = entity_corr(w.scorer, e);
    CHECK(corr.size() == e.reviews.size());

    Entity single;
    single.entity_id = "solo";
    Review r;
    r.id = 0;
    r.text = "only one review";
    r.rating = 4;
    r.tokens = tokenize(r.text);
    single.reviews.push_back(r);
    auto c1 = entity_corr(w.scorer, single);
    REQUIRE(c1.size() == 1);
    CHECK(c1[0] == 0.0);
}

TEST_CASE("draw_subset respects strategy determinism rules") {
    const auto& w = fixtures::world();
    const Entity& e = w.syn.corpus.entities[1];
    auto tags = entity_tags(w.sentiment, e, w.syn.corpus.rating_max);
    auto corr = entity_corr(w.scorer, e);

    // deterministic strategy ignores the seed
    Subset a = draw_subset(SubsetStrategy::SentimentInfo, e, tags, corr, Perspective::Pros, 4, 1);
    Subset b = draw_subset(SubsetStrategy::SentimentInfo, e, tags, corr, Perspective::Pros, 4, 999);
    CHECK(a.review_ids == b.review_ids);

    // stochastic strategies are pure functions of the seed
    Subset r1 = draw_subset(SubsetStrategy::Random, e, tags, corr, Perspective::Pros, 4, 5);
    Subset r2 = draw_subset(SubsetStrategy::Random, e, tags, corr, Perspective::Pros, 4, 5);
    CHECK(r1.review_ids == r2.review_ids);
    Subset w1 = draw_subset(SubsetStrategy::SentimentInfoWeighted, e, tags, corr,
                            Perspective::Verdict, 4, 7);
    Subset w2 = draw_subset(SubsetStrategy::SentimentInfoWeighted, e, tags, corr,
                            Perspective::Verdict, 4, 7);
    CHECK(w1.review_ids == w2.review_ids);
    CHECK(w1.review_ids.size() == 4);
}

TEST_CASE("stage one training lowers the loss and is deterministic") {
    const auto& w = fixtures::world();
    SummarizerTrainResult a =
        train_stage1(w.syn.corpus, w.vocab, w.sentiment, w.scorer, Perspective::Pros, w.cfg);
    REQUIRE(a.epoch_loss.size() == static_cast<size_t>(w.cfg.stage1_epochs));
    CHECK(a.epoch_loss.back() < a.epoch_loss.front());

    SummarizerTrainResult b =
        train_stage1(w.syn.corpus, w.vocab, w.sentiment, w.scorer, Perspective::Pros, w.cfg);
    CHECK(models_equal(a.model, b.model));
    CHECK(a.epoch_loss == b.epoch_loss);
}

TEST_CASE("zero stage-one epochs returns the untouched init") {
    const auto& w = fixtures::world();
    RunConfig cfg = w.cfg;
    cfg.stage1_epochs = 0;
    SummarizerTrainResult a =
        train_stage1(w.syn.corpus, w.vocab, w.sentiment, w.scorer, Perspective::Cons, cfg);
    SummarizerTrainResult b =
        train_stage1(w.syn.corpus, w.vocab, w.sentiment, w.scorer, Perspective::Cons, cfg);
    CHECK(a.epoch_loss.empty());
    CHECK(models_equal(a.model, b.model));
}

TEST_CASE("stage one training lacks references for a stripped perspective") {
    const auto& w = fixtures::world();
    Corpus stripped = w.syn.corpus;
    for (Entity& e : stripped.entities) e.summaries.erase(Perspective::Cons);
    CHECK_THROWS_WITH_AS(
        train_stage1(stripped, w.vocab, w.sentiment, w.scorer, Perspective::Cons, w.cfg),
        doctest::Contains("NoReferenceForPerspective"), Error);
}

TEST_CASE("candidate generation, store round trip, and determinism") {
    const auto& w = fixtures::world();
    SummarizerModel stage1 =
        train_stage1(w.syn.corpus, w.vocab, w.sentiment, w.scorer, Perspective::Pros, w.cfg).model;

    CandidateStore store = gen_candidates(w.syn.corpus, w.vocab, stage1, w.sentiment, w.scorer,
                                          Perspective::Pros, w.cfg);
    CHECK(store.size() == w.syn.corpus.entities.size());
    for (const auto& [eid, cands] : store) {
        CHECK(!cands.empty());
        CHECK(cands.size() <= static_cast<size_t>(w.cfg.m));
        std::set<uint64_t> seeds;
        for (const Candidate& c : cands) {
            CHECK(!c.tokens.empty());
            CHECK(c.rouge >= 0.0);
            CHECK(c.rouge <= 1.0);
            CHECK(!c.subset_ids.empty());
            seeds.insert(c.seed);
        }
        CHECK(seeds.size() == cands.size());
    }

    CandidateStore again = gen_candidates(w.syn.corpus, w.vocab, stage1, w.sentiment, w.scorer,
                                          Perspective::Pros, w.cfg);
    REQUIRE(again.size() == store.size());
    for (const auto& [eid, cands] : store) {
        const auto& other = again.at(eid);
        REQUIRE(other.size() == cands.size());
        for (size_t i = 0; i < cands.size(); ++i) {
            CHECK(other[i].tokens == cands[i].tokens);
            CHECK(other[i].rouge == cands[i].rouge);
            CHECK(other[i].subset_ids == cands[i].subset_ids);
        }
    }

    std::string path = "cand_store_test.jsonl";
    save_candidates(store, path);
    CandidateStore loaded = load_candidates(path);
    REQUIRE(loaded.size() == store.size());
    for (const auto& [eid, cands] : store) {
        const auto& other = loaded.at(eid);
        REQUIRE(other.size() == cands.size());
        for (size_t i = 0; i < cands.size(); ++i) {
            CHECK(other[i].tokens == cands[i].tokens);
            CHECK(other[i].rouge == doctest::Approx(cands[i].rouge));
            CHECK(other[i].subset_ids == cands[i].subset_ids);
            CHECK(other[i].seed == cands[i].seed);
        }
    }
    std::remove(path.c_str());
}

TEST_CASE("stage two trains from stage one and is deterministic") {
    const auto& w = fixtures::world();
    SummarizerModel stage1 =
        train_stage1(w.syn.corpus, w.vocab, w.sentiment, w.scorer, Perspective::Pros, w.cfg).model;
    CandidateStore store = gen_candidates(w.syn.corpus, w.vocab, stage1, w.sentiment, w.scorer,
                                          Perspective::Pros, w.cfg);

    SummarizerTrainResult a = train_stage2(w.syn.corpus, w.vocab, stage1, w.sentiment, w.scorer,
                                           store, Perspective::Pros, w.cfg);
    REQUIRE(a.epoch_loss.size() == static_cast<size_t>(w.cfg.stage2_epochs));
    for (double l : a.epoch_loss) CHECK(std::isfinite(l));
    CHECK(!models_equal(a.model, stage1));

    SummarizerTrainResult b = train_stage2(w.syn.corpus, w.vocab, stage1, w.sentiment, w.scorer,
                                           store, Perspective::Pros, w.cfg);
    CHECK(models_equal(a.model, b.model));
    CHECK(a.epoch_loss == b.epoch_loss);

    CHECK_THROWS_WITH_AS(train_stage2(w.syn.corpus, w.vocab, stage1, w.sentiment, w.scorer,
                                      CandidateStore{}, Perspective::Pros, w.cfg),
                         doctest::Contains("NoCandidates"), Error);
}

TEST_CASE("inference produces a consistent audit trail") {
    const auto& w = fixtures::world();
    ModelBundle bundle;
    bundle.sentiment = w.sentiment;
    bundle.scorer = w.scorer;
    bundle.summarizer =
        train_stage1(w.syn.corpus, w.vocab, w.sentiment, w.scorer, Perspective::Pros, w.cfg).model;

    const Entity& e = w.syn.corpus.entities[2];
    InferResult res =
        infer(bundle, w.vocab, e, Perspective::Pros, w.cfg, w.syn.corpus.rating_max);
    CHECK(!res.summary.empty());
    CHECK(res.subset.review_ids.size() <= static_cast<size_t>(w.cfg.k));
    CHECK(res.tags.size() == e.reviews.size());
    CHECK(res.corr.size() == e.reviews.size());
    CHECK(res.lh < 0.0);

    // the reported Lh matches rescoring the summary as a candidate
    Candidate c;
    c.tokens = res.summary;
    auto lh = candidate_lh(bundle.summarizer, w.vocab, e, res.subset.review_ids, {c}, w.cfg.alpha);
    REQUIRE(lh.size() == 1);
    CHECK(res.lh == doctest::Approx(lh[0]));

    InferResult res2 =
        infer(bundle, w.vocab, e, Perspective::Pros, w.cfg, w.syn.corpus.rating_max);
    CHECK(res2.summary == res.summary);
    CHECK(res2.subset.review_ids == res.subset.review_ids);

    auto j = nlohmann::json::parse(infer_audit_json(e.entity_id, Perspective::Pros, res));
    CHECK(j["entity_id"] == e.entity_id);
    CHECK(j["perspective"] == "pros");
    CHECK(j["summary"].is_string());
    CHECK(j["subset_ids"].size() == res.subset.review_ids.size());
    CHECK(j["lh"] == doctest::Approx(res.lh));

    Entity empty;
    empty.entity_id = "none";
    CHECK_THROWS_WITH_AS(
        infer(bundle, w.vocab, empty, Perspective::Pros, w.cfg, w.syn.corpus.rating_max),
        doctest::Contains("EmptyEntity"), Error);
}

TEST_CASE("pairwise ranking accuracy hand-computed values") {
    auto mk = [](std::initializer_list<double> rouges) {
        std::vector<Candidate> cs;
        for (double r : rouges) {
            Candidate c;
            c.rouge = r;
            cs.push_back(c);
        }
        return cs;
    };
    // rouge ties are skipped; all ordered pairs agree
    CHECK(pairwise_ranking_accuracy({1.0, 0.2, 0.9, 0.0}, mk({0.9, 0.5, 0.5, 0.1})) ==
          doctest::Approx(1.0));
    // two of five comparable pairs disagree
    CHECK(pairwise_ranking_accuracy({1.0, 0.2, 0.9, 0.95}, mk({0.9, 0.5, 0.5, 0.1})) ==
          doctest::Approx(0.6));
    // equal likelihoods never count as correct
    CHECK(pairwise_ranking_accuracy({0.5, 0.5}, mk({0.9, 0.1})) == doctest::Approx(0.0));
}
