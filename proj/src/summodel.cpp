#include "subsumm/summodel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "subsumm/error.hpp"
#include "subsumm/mathutil.hpp"
#include "subsumm/rng.hpp"

namespace subsumm {

SummarizerModel make_summarizer(int vocab_size, int emb_dim, int ctx_dim, uint64_t seed,
                                double init_scale) {
    SummarizerModel m;
    m.vocab_size = vocab_size;
    m.emb_dim = emb_dim;
    m.ctx_dim = ctx_dim;
    m.emb.resize(static_cast<size_t>(vocab_size) * emb_dim);
    m.ctx_proj.resize(static_cast<size_t>(ctx_dim) * kFeatureDim);
    m.cond.resize(static_cast<size_t>(emb_dim) * ctx_dim);
    m.hidden.resize(static_cast<size_t>(emb_dim) * emb_dim);
    m.out_w.resize(static_cast<size_t>(vocab_size) * emb_dim);
    m.out_b.assign(vocab_size, 0.0);
    Rng rng(seed);
    for (auto* block : {&m.emb, &m.ctx_proj, &m.cond, &m.hidden, &m.out_w})
        for (double& v : *block) v = (rng.next_double() * 2.0 - 1.0) * init_scale;
    return m;
}

void SummarizerGrad::reset(const SummarizerModel& m) {
    emb.assign(m.emb.size(), 0.0);
    ctx_proj.assign(m.ctx_proj.size(), 0.0);
    cond.assign(m.cond.size(), 0.0);
    hidden.assign(m.hidden.size(), 0.0);
    out_w.assign(m.out_w.size(), 0.0);
    out_b.assign(m.out_b.size(), 0.0);
}

void SummarizerGrad::add_scaled(const SummarizerGrad& other, double scale) {
    auto blocks = param_blocks();
    auto oblocks = const_cast<SummarizerGrad&>(other).param_blocks();
    for (size_t b = 0; b < blocks.size(); ++b)
        for (size_t i = 0; i < blocks[b]->size(); ++i)
            (*blocks[b])[i] += scale * (*oblocks[b])[i];
}

std::vector<double> context_from_features(const SummarizerModel& model, const FeatureVec& pooled) {
    std::vector<double> c(model.ctx_dim);
    for (int r = 0; r < model.ctx_dim; ++r)
        c[r] = pooled.dot_dense(model.ctx_proj.data() + static_cast<size_t>(r) * kFeatureDim);
    return c;
}

std::vector<double> encode_input(const SummarizerModel& model,
                                 const std::vector<TokenSeq>& reviews) {
    if (reviews.empty()) throw Error("EmptySubset", "encode_input on empty subset");
    std::vector<FeatureVec> per_review;
    per_review.reserve(reviews.size());
    for (const TokenSeq& r : reviews) per_review.push_back(featurize(r));
    return context_from_features(model, pool_features(per_review));
}

namespace {

struct StepForward {
    std::vector<double> z;       // emb(prev) + U c
    std::vector<double> h;       // tanh(H z)
    std::vector<double> probs;   // softmax(W h + b)
};

StepForward forward_step(const SummarizerModel& m, const std::vector<double>& context,
                         int prev_token) {
    if (prev_token < 0 || prev_token >= m.vocab_size)
        throw Error("UnknownToken", "token id " + std::to_string(prev_token));
    StepForward s;
    s.z.assign(m.emb_dim, 0.0);
    const double* erow = m.emb.data() + static_cast<size_t>(prev_token) * m.emb_dim;
    for (int i = 0; i < m.emb_dim; ++i) {
        double v = erow[i];
        const double* urow = m.cond.data() + static_cast<size_t>(i) * m.ctx_dim;
        for (int j = 0; j < m.ctx_dim; ++j) v += urow[j] * context[j];
        s.z[i] = v;
    }
    s.h.assign(m.emb_dim, 0.0);
    for (int i = 0; i < m.emb_dim; ++i) {
        const double* hrow = m.hidden.data() + static_cast<size_t>(i) * m.emb_dim;
        double a = 0.0;
        for (int j = 0; j < m.emb_dim; ++j) a += hrow[j] * s.z[j];
        s.h[i] = std::tanh(a);
    }
    s.probs.assign(m.vocab_size, 0.0);
    for (int v = 0; v < m.vocab_size; ++v) {
        const double* wrow = m.out_w.data() + static_cast<size_t>(v) * m.emb_dim;
        double l = m.out_b[v];
        for (int i = 0; i < m.emb_dim; ++i) l += wrow[i] * s.h[i];
        s.probs[v] = l;
    }
    softmax_inplace(s.probs);
    return s;
}

}  // namespace

std::vector<double> next_token_dist(const SummarizerModel& model,
                                    const std::vector<double>& context, int last_token_id) {
    return forward_step(model, context, last_token_id).probs;
}

double xent_loss(const SummarizerModel& model, const std::vector<double>& context,
                 const std::vector<int>& target_ids) {
    double loss = 0.0;
    int prev = Vocab::kBos;
    for (size_t t = 0; t <= target_ids.size(); ++t) {
        int target = t < target_ids.size() ? target_ids[t] : Vocab::kEos;
        if (target < 0 || target >= model.vocab_size)
            throw Error("UnknownToken", "token id " + std::to_string(target));
        StepForward s = forward_step(model, context, prev);
        loss -= std::log(std::max(s.probs[target], 1e-300));
        prev = target;
    }
    return loss;
}

double seq_loglik(const SummarizerModel& model, const std::vector<double>& context,
                  const std::vector<int>& target_ids) {
    return -xent_loss(model, context, target_ids);
}

double ctr_loss(const std::vector<double>& lh, const Ranking& ranking, double lambda) {
    // Same hinge as the valuation margin loss, applied to Lh values.
    return margin_loss(lh, ranking, lambda);
}

std::vector<double> ctr_loss_lh_grad(const std::vector<double>& lh, const Ranking& ranking,
                                     double lambda) {
    return margin_loss_corr_grad(lh, ranking, lambda);
}

double grad_xent(const SummarizerModel& model, const FeatureVec& pooled,
                 const std::vector<int>& target_ids, double weight, SummarizerGrad& grad) {
    const int e = model.emb_dim;
    const int d = model.ctx_dim;
    std::vector<double> context = context_from_features(model, pooled);
    std::vector<double> dcontext(d, 0.0);
    std::vector<double> dh(e), da(e), dz(e);
    double loss = 0.0;
    int prev = Vocab::kBos;
    for (size_t t = 0; t <= target_ids.size(); ++t) {
        int target = t < target_ids.size() ? target_ids[t] : Vocab::kEos;
        if (target < 0 || target >= model.vocab_size)
            throw Error("UnknownToken", "token id " + std::to_string(target));
        StepForward s = forward_step(model, context, prev);
        loss -= std::log(std::max(s.probs[target], 1e-300));

        // dlogits = weight * (p - onehot)
        std::fill(dh.begin(), dh.end(), 0.0);
        for (int v = 0; v < model.vocab_size; ++v) {
            double dl = weight * (s.probs[v] - (v == target ? 1.0 : 0.0));
            if (dl == 0.0) continue;
            double* gw = grad.out_w.data() + static_cast<size_t>(v) * e;
            const double* wrow = model.out_w.data() + static_cast<size_t>(v) * e;
            for (int i = 0; i < e; ++i) {
                gw[i] += dl * s.h[i];
                dh[i] += dl * wrow[i];
            }
            grad.out_b[v] += dl;
        }
        for (int i = 0; i < e; ++i) da[i] = dh[i] * (1.0 - s.h[i] * s.h[i]);
        std::fill(dz.begin(), dz.end(), 0.0);
        for (int i = 0; i < e; ++i) {
            if (da[i] == 0.0) continue;
            double* gh = grad.hidden.data() + static_cast<size_t>(i) * e;
            const double* hrow = model.hidden.data() + static_cast<size_t>(i) * e;
            for (int j = 0; j < e; ++j) {
                gh[j] += da[i] * s.z[j];
                dz[j] += da[i] * hrow[j];
            }
        }
        double* gemb = grad.emb.data() + static_cast<size_t>(prev) * e;
        for (int i = 0; i < e; ++i) {
            gemb[i] += dz[i];
            double* gc = grad.cond.data() + static_cast<size_t>(i) * d;
            const double* urow = model.cond.data() + static_cast<size_t>(i) * d;
            for (int j = 0; j < d; ++j) {
                gc[j] += dz[i] * context[j];
                dcontext[j] += dz[i] * urow[j];
            }
        }
        prev = target;
    }
    for (int r = 0; r < d; ++r)
        pooled.axpy_dense(dcontext[r], grad.ctx_proj.data() + static_cast<size_t>(r) * kFeatureDim);
    return loss;
}

namespace {

struct Hypothesis {
    std::vector<int> tokens;  // content ids
    double loglik = 0.0;
    std::set<std::array<int, 3>> trigrams;

    bool would_repeat(int next) const {
        if (tokens.size() < 2) return false;
        return trigrams.count({tokens[tokens.size() - 2], tokens.back(), next}) > 0;
    }
};

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool better(const Hypothesis& a, const Hypothesis& b) {
    if (a.loglik != b.loglik) return a.loglik > b.loglik;
    return lex_less(a.tokens, b.tokens);
}

DecodeResult run_beam(const SummarizerModel& model, const std::vector<double>& context,
                      const DecodeConfig& cfg, bool blocking) {
    std::vector<Hypothesis> live(1);
    std::vector<Hypothesis> finished;

    for (int step = 0; step < cfg.max_len && !live.empty(); ++step) {
        // EOS expansions compete for beam slots like any other token, so
        // beam_size 1 reduces exactly to greedy decoding
        std::vector<std::pair<Hypothesis, bool>> expansions;  // (hypothesis, done)
        for (const Hypothesis& hyp : live) {
            int prev = hyp.tokens.empty() ? Vocab::kBos : hyp.tokens.back();
            std::vector<double> p = next_token_dist(model, context, prev);
            int len = static_cast<int>(hyp.tokens.size());
            for (int v = 0; v < model.vocab_size; ++v) {
                if (v == Vocab::kPad || v == Vocab::kBos || v == Vocab::kSep) continue;
                if (v == Vocab::kEos) {
                    if (len < cfg.min_len) continue;
                    Hypothesis done = hyp;
                    done.loglik += std::log(std::max(p[v], 1e-300));
                    expansions.emplace_back(std::move(done), true);
                    continue;
                }
                if (blocking && hyp.would_repeat(v)) continue;
                Hypothesis next = hyp;
                next.loglik += std::log(std::max(p[v], 1e-300));
                if (next.tokens.size() >= 2)
                    next.trigrams.insert(
                        {next.tokens[next.tokens.size() - 2], next.tokens.back(), v});
                next.tokens.push_back(v);
                expansions.emplace_back(std::move(next), false);
            }
        }
        std::sort(expansions.begin(), expansions.end(),
                  [](const auto& a, const auto& b) { return better(a.first, b.first); });
        if (expansions.size() > static_cast<size_t>(cfg.beam_size))
            expansions.resize(cfg.beam_size);
        live.clear();
        for (auto& [hyp, done] : expansions)
            (done ? finished : live).push_back(std::move(hyp));
    }
    // beams alive at max_len are closed with a forced EOS so their scores
    // stay comparable to naturally finished ones
    for (Hypothesis& hyp : live) {
        if (static_cast<int>(hyp.tokens.size()) < cfg.min_len) continue;
        std::vector<double> p = next_token_dist(model, context, hyp.tokens.back());
        hyp.loglik += std::log(std::max(p[Vocab::kEos], 1e-300));
        finished.push_back(std::move(hyp));
    }

    if (finished.empty()) return {{}, 0.0, false};  // caller handles the failure

    auto rerank = [&](const Hypothesis& h) {
        return length_norm_lik(h.loglik, static_cast<int>(h.tokens.size()), cfg.lenpen);
    };
    const Hypothesis* best = &finished[0];
    for (const Hypothesis& h : finished) {
        double sh = rerank(h), sb = rerank(*best);
        if (sh > sb || (sh == sb && lex_less(h.tokens, best->tokens))) best = &h;
    }
    return {best->tokens, best->loglik, false};
}

}  // namespace

DecodeResult beam_search(const SummarizerModel& model, const std::vector<double>& context,
                         const DecodeConfig& cfg) {
    if (cfg.beam_size < 1 || cfg.min_len < 1 || cfg.min_len > cfg.max_len)
        throw Error("InvalidDecodeConfig", "beam >= 1 and 1 <= min <= max required");
    DecodeResult r = run_beam(model, context, cfg, cfg.trigram_block);
    if (!r.token_ids.empty() || !cfg.trigram_block) {
        if (r.token_ids.empty()) throw Error("DecodeFailure", "no hypothesis completed");
        return r;
    }
    r = run_beam(model, context, cfg, false);
    if (r.token_ids.empty()) throw Error("DecodeFailure", "no hypothesis completed");
    r.blocking_fallback = true;
    return r;
}

}  // namespace subsumm
