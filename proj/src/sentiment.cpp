#include "subsumm/sentiment.hpp"

#include <cmath>

#include "subsumm/error.hpp"
#include "subsumm/mathutil.hpp"

namespace subsumm {

SentimentModel make_sentiment_model(int num_classes) {
    SentimentModel m;
    m.num_classes = num_classes;
    m.weights.assign(static_cast<size_t>(num_classes) * kFeatureDim, 0.0);
    m.bias.assign(num_classes, 0.0);
    return m;
}

std::vector<double> sentiment_distribution(const SentimentModel& model, const FeatureVec& x) {
    std::vector<double> logits(model.num_classes);
    for (int c = 0; c < model.num_classes; ++c)
        logits[c] = x.dot_dense(model.row(c)) + model.bias[c];
    softmax_inplace(logits);
    return logits;
}

SentimentTag predict_sentiment(const SentimentModel& model, const Review& review, int rating_max) {
    SentimentTag tag;
    tag.dist = sentiment_distribution(model, featurize(review.tokens));
    tag.cls = argmax_lowest(tag.dist) + 1;
    tag.polarity = polarity_of(tag.cls, rating_max);
    return tag;
}

double sentiment_nll_grad(const SentimentModel& model, const std::vector<SentimentExample>& batch,
                          double l2, SentimentModel* grad) {
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;
    if (grad) {
        grad->num_classes = model.num_classes;
        grad->weights.assign(model.weights.size(), 0.0);
        grad->bias.assign(model.bias.size(), 0.0);
    }
    for (const SentimentExample& ex : batch) {
        std::vector<double> p = sentiment_distribution(model, ex.x);
        loss -= std::log(std::max(p[ex.label], 1e-300)) * inv_n;
        if (grad) {
            for (int c = 0; c < model.num_classes; ++c) {
                double delta = (p[c] - (c == ex.label ? 1.0 : 0.0)) * inv_n;
                ex.x.axpy_dense(delta, grad->row(c));
                grad->bias[c] += delta;
            }
        }
    }
    // L2 on weights only
    double reg = 0.0;
    for (double w : model.weights) reg += w * w;
    loss += l2 * reg;
    if (grad)
        for (size_t i = 0; i < model.weights.size(); ++i)
            grad->weights[i] += 2.0 * l2 * model.weights[i];
    return loss;
}

SentimentTrainResult train_sentiment(const Corpus& corpus, const SentimentTrainConfig& cfg) {
    std::vector<SentimentExample> examples;
    for (const Entity& e : corpus.entities)
        for (const Review& r : e.reviews)
            examples.push_back({featurize(r.tokens), r.rating - 1});
    if (examples.empty()) throw Error("EmptyTrainingSet", "no rated reviews");

    SentimentTrainResult result;
    result.model = make_sentiment_model(corpus.rating_max);
    SentimentModel grad;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (size_t start = 0; start < examples.size(); start += cfg.batch_size) {
            size_t end = std::min(examples.size(), start + cfg.batch_size);
            std::vector<SentimentExample> batch(examples.begin() + start, examples.begin() + end);
            sentiment_nll_grad(result.model, batch, cfg.l2, &grad);
            for (size_t i = 0; i < result.model.weights.size(); ++i)
                result.model.weights[i] -= cfg.learning_rate * grad.weights[i];
            for (size_t i = 0; i < result.model.bias.size(); ++i)
                result.model.bias[i] -= cfg.learning_rate * grad.bias[i];
        }
        result.epoch_loss.push_back(sentiment_nll_grad(result.model, examples, cfg.l2, nullptr));
    }
    return result;
}

}  // namespace subsumm
