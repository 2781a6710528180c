#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "subsumm/error.hpp"
#include "subsumm/rng.hpp"
#include "subsumm/summodel.hpp"

using namespace subsumm;

namespace {

SummarizerModel tiny_model(uint64_t seed, int vocab = 9, int emb = 4, int ctx = 3,
                           double scale = 0.4) {
    return make_summarizer(vocab, emb, ctx, seed, scale);
}

void zero_params(SummarizerModel& m) {
    for (auto* b : m.param_blocks()) std::fill(b->begin(), b->end(), 0.0);
}

// Independent re-derivation of one decoder step with plain loops.
std::vector<double> brute_next_dist(const SummarizerModel& m, const std::vector<double>& c,
                                    int prev) {
    std::vector<double> z(m.emb_dim);
    for (int i = 0; i < m.emb_dim; ++i) {
        z[i] = m.emb[static_cast<size_t>(prev) * m.emb_dim + i];
        for (int j = 0; j < m.ctx_dim; ++j)
            z[i] += m.cond[static_cast<size_t>(i) * m.ctx_dim + j] * c[j];
    }
    std::vector<double> h(m.emb_dim);
    for (int i = 0; i < m.emb_dim; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.emb_dim; ++j)
            s += m.hidden[static_cast<size_t>(i) * m.emb_dim + j] * z[j];
        h[i] = std::tanh(s);
    }
    std::vector<double> logits(m.vocab_size);
    double mx = -1e300;
    for (int v = 0; v < m.vocab_size; ++v) {
        double s = m.out_b[v];
        for (int j = 0; j < m.emb_dim; ++j)
            s += m.out_w[static_cast<size_t>(v) * m.emb_dim + j] * h[j];
        logits[v] = s;
        mx = std::max(mx, s);
    }
    double zsum = 0.0;
    for (double& l : logits) {
        l = std::exp(l - mx);
        zsum += l;
    }
    for (double& l : logits) l /= zsum;
    return logits;
}

std::vector<double> rand_context(Rng& rng, int d) {
    std::vector<double> c(d);
    for (double& v : c) v = rng.next_double() - 0.5;
    return c;
}

}  // namespace

TEST_CASE("next_token_dist matches a plain-loop re-derivation") {
    Rng rng(41);
    SummarizerModel m = tiny_model(1);
    auto c = rand_context(rng, m.ctx_dim);
    for (int prev : {Vocab::kBos, 5, 7}) {
        auto got = next_token_dist(m, c, prev);
        auto want = brute_next_dist(m, c, prev);
        REQUIRE(got.size() == want.size());
        double sum = 0.0;
        for (size_t v = 0; v < got.size(); ++v) {
            CHECK(got[v] == doctest::Approx(want[v]));
            sum += got[v];
        }
        CHECK(sum == doctest::Approx(1.0));
    }
}

TEST_CASE("all-zero parameters give the uniform cross entropy") {
    SummarizerModel m = tiny_model(2);
    zero_params(m);
    std::vector<double> c(m.ctx_dim, 0.0);
    std::vector<int> targets{5, 6, 7};
    // 3 content tokens plus the closing EOS, each at probability 1/9
    CHECK(xent_loss(m, c, targets) == doctest::Approx(4.0 * std::log(9.0)));
    CHECK(xent_loss(m, c, {}) == doctest::Approx(std::log(9.0)));
}

TEST_CASE("seq_loglik is the negated cross entropy") {
    Rng rng(43);
    SummarizerModel m = tiny_model(3);
    auto c = rand_context(rng, m.ctx_dim);
    std::vector<int> targets{6, 5, 8, 6};
    CHECK(seq_loglik(m, c, targets) == doctest::Approx(-xent_loss(m, c, targets)));
}

TEST_CASE("target ids outside the vocabulary fail") {
    SummarizerModel m = tiny_model(4);
    std::vector<double> c(m.ctx_dim, 0.0);
    CHECK_THROWS_WITH_AS(xent_loss(m, c, {5, 9}), doctest::Contains("UnknownToken"), Error);
}

TEST_CASE("encode_input rejects empty inputs and pools invariantly") {
    SummarizerModel m = tiny_model(5);
    CHECK_THROWS_WITH_AS(encode_input(m, {}), doctest::Contains("EmptySubset"), Error);
    std::vector<TokenSeq> revs{tokenize("good sound"), tokenize("bad battery"),
                               tokenize("fine screen")};
    std::vector<TokenSeq> perm{revs[2], revs[0], revs[1]};
    auto a = encode_input(m, revs), b = encode_input(m, perm);
    REQUIRE(a.size() == static_cast<size_t>(m.ctx_dim));
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]));
}

TEST_CASE("length-normalized likelihood arithmetic") {
    CHECK(length_norm_lik(-10.0, 5, 2.0) == doctest::Approx(-0.4));
    CHECK(length_norm_lik(-10.0, 5, 1.0) == doctest::Approx(-2.0));
    CHECK(length_norm_lik(-3.0, 1, 2.0) == doctest::Approx(-3.0));
}

TEST_CASE("contrastive loss hand-computed value") {
    Ranking r = ranking_from_scores({3.0, 2.0, 1.0});
    std::vector<double> lh{0.3, 0.1, 0.2};
    CHECK(ctr_loss(lh, r, 0.1) == doctest::Approx(0.3));
    CHECK(multitask_loss(2.0, 0.3, 1.0) == doctest::Approx(2.3));
    CHECK(multitask_loss(2.0, 0.3, 0.1) == doctest::Approx(2.03));
}

TEST_CASE("contrastive gradient matches finite differences") {
    Ranking r = ranking_from_scores({4.0, 3.0, 2.0, 1.0});
    std::vector<double> lh{-0.21, -0.48, -0.33, -0.11};
    const double lambda = 0.017;
    auto grad = ctr_loss_lh_grad(lh, r, lambda);
    for (size_t i = 0; i < lh.size(); ++i) {
        double num = oracles::central_diff(lh, i, [&]() { return ctr_loss(lh, r, lambda); });
        CHECK(oracles::grad_close(grad[i], num));
    }
}

TEST_CASE("grad_xent matches finite differences on every block") {
    SummarizerModel m = tiny_model(6, 8, 3, 2, 0.3);
    FeatureVec pooled = featurize(tokenize("good sound very good"));
    std::vector<int> targets{5, 7, 6};

    SummarizerGrad g;
    g.reset(m);
    double loss0 = grad_xent(m, pooled, targets, 1.0, g);
    auto loss = [&]() { return xent_loss(m, context_from_features(m, pooled), targets); };
    CHECK(loss0 == doctest::Approx(loss()));

    auto blocks = m.param_blocks();
    auto gblocks = g.param_blocks();
    const char* names[] = {"emb", "ctx_proj", "cond", "hidden", "out_w", "out_b"};
    Rng rng(44);
    for (size_t b = 0; b < blocks.size(); ++b) {
        CAPTURE(names[b]);
        std::vector<size_t> idx;
        if (b == 1) {
            for (const auto& [i, v] : pooled.entries)
                for (int row = 0; row < m.ctx_dim; ++row)
                    idx.push_back(static_cast<size_t>(row) * kFeatureDim + i);
        } else {
            for (int t = 0; t < 12; ++t) idx.push_back(rng.next_below(blocks[b]->size()));
        }
        for (size_t i : idx) {
            double num = oracles::central_diff(*blocks[b], i, loss);
            CHECK(oracles::grad_close((*gblocks[b])[i], num, 2e-4));
        }
    }
}

TEST_CASE("grad_xent scales with the weight and accumulates") {
    SummarizerModel m = tiny_model(7);
    FeatureVec pooled = featurize(tokenize("alpha beta gamma"));
    std::vector<int> targets{5, 8};
    SummarizerGrad g1, g2;
    g1.reset(m);
    g2.reset(m);
    grad_xent(m, pooled, targets, 1.0, g1);
    grad_xent(m, pooled, targets, 0.5, g2);
    grad_xent(m, pooled, targets, 1.5, g2);
    auto b1 = g1.param_blocks(), b2 = g2.param_blocks();
    for (size_t b = 0; b < b1.size(); ++b)
        for (size_t i = 0; i < b1[b]->size(); ++i)
            CHECK((*b2[b])[i] == doctest::Approx(2.0 * (*b1[b])[i]));
}

TEST_CASE("beam size one equals greedy decoding") {
    Rng rng(45);
    SummarizerModel m = tiny_model(8, 12, 4, 3, 0.6);
    auto c = rand_context(rng, m.ctx_dim);
    DecodeConfig cfg;
    cfg.beam_size = 1;
    cfg.trigram_block = false;
    cfg.max_len = 15;
    DecodeResult res = beam_search(m, c, cfg);

    std::vector<int> greedy;
    int prev = Vocab::kBos;
    for (int step = 0; step < cfg.max_len; ++step) {
        auto dist = next_token_dist(m, c, prev);
        dist[Vocab::kPad] = dist[Vocab::kBos] = dist[Vocab::kSep] = -1.0;
        if (static_cast<int>(greedy.size()) < cfg.min_len) dist[Vocab::kEos] = -1.0;
        int best = 0;
        for (int v = 1; v < m.vocab_size; ++v)
            if (dist[v] > dist[best]) best = v;
        if (best == Vocab::kEos) break;
        greedy.push_back(best);
        prev = best;
    }
    CHECK(res.token_ids == greedy);
    CHECK(!res.blocking_fallback);
}

TEST_CASE("decoded sequences respect min_len, max_len, and the banned ids") {
    Rng rng(46);
    for (int trial = 0; trial < 10; ++trial) {
        SummarizerModel m = tiny_model(100 + trial, 15, 4, 3, 0.8);
        auto c = rand_context(rng, m.ctx_dim);
        DecodeConfig cfg;
        cfg.min_len = 6;
        cfg.max_len = 20;
        DecodeResult res = beam_search(m, c, cfg);
        CHECK(res.token_ids.size() >= 6);
        CHECK(res.token_ids.size() <= 20);
        for (int id : res.token_ids) {
            CHECK(id != Vocab::kPad);
            CHECK(id != Vocab::kBos);
            CHECK(id != Vocab::kEos);
            CHECK(id != Vocab::kSep);
        }
    }
}

TEST_CASE("trigram blocking forbids repeated trigrams") {
    Rng rng(47);
    for (int trial = 0; trial < 10; ++trial) {
        SummarizerModel m = tiny_model(200 + trial, 8, 4, 3, 0.9);
        auto c = rand_context(rng, m.ctx_dim);
        DecodeConfig cfg;
        cfg.max_len = 40;
        cfg.min_len = 10;
        DecodeResult res = beam_search(m, c, cfg);
        if (res.blocking_fallback) continue;
        std::set<std::vector<int>> seen;
        for (size_t i = 0; i + 3 <= res.token_ids.size(); ++i) {
            std::vector<int> tri(res.token_ids.begin() + i, res.token_ids.begin() + i + 3);
            CHECK(seen.insert(tri).second);
        }
    }
}

TEST_CASE("decoding is deterministic") {
    Rng rng(48);
    SummarizerModel m = tiny_model(9, 20, 4, 3, 0.5);
    auto c = rand_context(rng, m.ctx_dim);
    DecodeConfig cfg;
    cfg.min_len = 4;
    cfg.max_len = 25;
    DecodeResult a = beam_search(m, c, cfg);
    DecodeResult b = beam_search(m, c, cfg);
    CHECK(a.token_ids == b.token_ids);
    CHECK(a.loglik == b.loglik);
}

TEST_CASE("reported loglik matches rescoring the decoded tokens") {
    Rng rng(49);
    SummarizerModel m = tiny_model(10, 12, 4, 3, 0.5);
    auto c = rand_context(rng, m.ctx_dim);
    DecodeConfig cfg;
    cfg.max_len = 12;
    DecodeResult res = beam_search(m, c, cfg);
    CHECK(res.loglik == doctest::Approx(seq_loglik(m, c, res.token_ids)));
}

TEST_CASE("invalid decode configs fail") {
    SummarizerModel m = tiny_model(11);
    std::vector<double> c(m.ctx_dim, 0.0);
    DecodeConfig cfg;
    cfg.beam_size = 0;
    CHECK_THROWS_WITH_AS(beam_search(m, c, cfg), doctest::Contains("InvalidDecodeConfig"), Error);
    DecodeConfig cfg2;
    cfg2.min_len = 10;
    cfg2.max_len = 5;
    CHECK_THROWS_WITH_AS(beam_search(m, c, cfg2), doctest::Contains("InvalidDecodeConfig"), Error);
}
