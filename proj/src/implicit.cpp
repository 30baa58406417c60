#include "returnguard/implicit.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace returnguard::implicit {

Json SignalWeights::to_json() const {
    return Json{{"w_view", w_view},
                {"w_click", w_click},
                {"w_cart", w_cart},
                {"w_order", w_order},
                {"bias", bias}};
}

SignalWeights SignalWeights::from_json(const Json& j) {
    SignalWeights w;
    w.w_view = j.at("w_view").get<double>();
    w.w_click = j.at("w_click").get<double>();
    w.w_cart = j.at("w_cart").get<double>();
    w.w_order = j.at("w_order").get<double>();
    w.bias = j.at("bias").get<double>();
    return w;
}

namespace {

std::array<double, 4> as_features(const SignalCounts& c) {
    return {static_cast<double>(c.views), static_cast<double>(c.clicks),
            static_cast<double>(c.cart_adds), static_cast<double>(c.orders)};
}

}  // namespace

double rate(const SignalCounts& counts, const SignalWeights& w) {
    const auto x = as_features(counts);
    return sigmoid(w.bias + w.w_view * x[0] + w.w_click * x[1] + w.w_cart * x[2] +
                   w.w_order * x[3]);
}

double log_loss(const std::vector<LabeledPair>& pairs, const SignalWeights& w) {
    double total = 0.0;
    for (const auto& p : pairs) {
        const auto x = as_features(p.counts);
        const double z = w.bias + w.w_view * x[0] + w.w_click * x[1] + w.w_cart * x[2] +
                         w.w_order * x[3];
        total += p.ordered ? -log_sigmoid(z) : -log_sigmoid(-z);
    }
    return total / static_cast<double>(pairs.size());
}

TrainResult learn_weights_detailed(const std::vector<LabeledPair>& pairs, const TrainConfig& cfg) {
    std::size_t n_pos = 0;
    for (const auto& p : pairs) n_pos += p.ordered ? 1 : 0;
    if (n_pos == 0 || n_pos == pairs.size()) {
        throw ModelError("learn_weights: need at least one pair of each class");
    }

    const std::size_t n = pairs.size();
    // Standardize each signal column; gradient descent with a fixed step is
    // only stable when the feature scales are comparable.
    std::array<double, 4> mean{}, stddev{};
    for (const auto& p : pairs) {
        const auto x = as_features(p.counts);
        for (int j = 0; j < 4; ++j) mean[j] += x[j];
    }
    for (int j = 0; j < 4; ++j) mean[j] /= static_cast<double>(n);
    for (const auto& p : pairs) {
        const auto x = as_features(p.counts);
        for (int j = 0; j < 4; ++j) stddev[j] += (x[j] - mean[j]) * (x[j] - mean[j]);
    }
    for (int j = 0; j < 4; ++j) {
        stddev[j] = std::sqrt(stddev[j] / static_cast<double>(n));
        if (stddev[j] == 0.0) stddev[j] = 1.0;
    }

    std::vector<std::array<double, 4>> xs(n);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = as_features(pairs[i].counts);
        for (int j = 0; j < 4; ++j) xs[i][j] = (x[j] - mean[j]) / stddev[j];
        ys[i] = pairs[i].ordered ? 1.0 : 0.0;
    }

    std::array<double, 4> w{};
    double bias = 0.0;
    TrainResult result;
    result.epoch_loss.reserve(static_cast<std::size_t>(cfg.epochs));

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::array<double, 4> grad{};
        double grad_bias = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double z = bias;
            for (int j = 0; j < 4; ++j) z += w[j] * xs[i][j];
            const double residual = sigmoid(z) - ys[i];
            for (int j = 0; j < 4; ++j) grad[j] += residual * xs[i][j];
            grad_bias += residual;
        }
        for (int j = 0; j < 4; ++j) {
            grad[j] = grad[j] / static_cast<double>(n) + cfg.l2 * w[j];
            w[j] -= cfg.learning_rate * grad[j];
        }
        bias -= cfg.learning_rate * grad_bias / static_cast<double>(n);

        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double z = bias;
            for (int j = 0; j < 4; ++j) z += w[j] * xs[i][j];
            loss += ys[i] > 0.5 ? -log_sigmoid(z) : -log_sigmoid(-z);
        }
        result.epoch_loss.push_back(loss / static_cast<double>(n));
    }

    // Fold the standardization back so callers apply raw counts.
    SignalWeights out;
    out.w_view = w[0] / stddev[0];
    out.w_click = w[1] / stddev[1];
    out.w_cart = w[2] / stddev[2];
    out.w_order = w[3] / stddev[3];
    out.bias = bias;
    for (int j = 0; j < 4; ++j) out.bias -= w[j] * mean[j] / stddev[j];
    result.weights = out;
    return result;
}

SignalWeights learn_weights(const std::vector<LabeledPair>& pairs, const TrainConfig& cfg) {
    return learn_weights_detailed(pairs, cfg).weights;
}

std::map<PairKey, SignalCounts> count_signals(const std::vector<domain::InteractionEvent>& events,
                                              EpochMs cutoff) {
    std::map<PairKey, SignalCounts> out;
    for (const auto& e : events) {
        if (cutoff != 0 && e.ts >= cutoff) continue;
        SignalCounts& c = out[{e.user_id, e.product_id}];
        switch (e.kind) {
            case domain::EventKind::View: c.views++; break;
            case domain::EventKind::Click: c.clicks++; break;
            case domain::EventKind::CartAdd: c.cart_adds++; break;
            case domain::EventKind::Order: c.orders++; break;
            case domain::EventKind::Return: break;  // not an engagement signal
        }
    }
    return out;
}

std::vector<LabeledPair> build_training_pairs(const std::vector<domain::InteractionEvent>& events,
                                              double split_fraction) {
    if (events.empty()) throw ModelError("build_training_pairs: no events");
    if (split_fraction <= 0.0 || split_fraction >= 1.0) {
        throw ConfigError("build_training_pairs: split_fraction must be in (0,1)");
    }
    EpochMs lo = events.front().ts, hi = events.front().ts;
    for (const auto& e : events) {
        lo = std::min(lo, e.ts);
        hi = std::max(hi, e.ts);
    }
    const EpochMs split =
        lo + static_cast<EpochMs>(split_fraction * static_cast<double>(hi - lo));

    auto counts = count_signals(events, split);
    std::map<PairKey, bool> later_order;
    for (const auto& e : events) {
        if (e.kind == domain::EventKind::Order && e.ts >= split) {
            later_order[{e.user_id, e.product_id}] = true;
        }
    }
    std::vector<LabeledPair> out;
    out.reserve(counts.size());
    for (const auto& [key, c] : counts) {
        if (c.empty()) continue;
        out.push_back(LabeledPair{c, later_order.count(key) > 0});
    }
    return out;
}

std::vector<Rating> build_ratings(const std::vector<domain::InteractionEvent>& events,
                                  const SignalWeights& weights) {
    auto counts = count_signals(events, 0);
    std::vector<Rating> out;
    out.reserve(counts.size());
    for (const auto& [key, c] : counts) {
        if (c.empty()) continue;
        out.push_back(Rating{key.first, key.second, rate(c, weights)});
    }
    return out;  // map iteration is already (user, product) sorted
}

void save_ratings(const std::string& path, const std::vector<Rating>& ratings) {
    JsonlWriter w(path);
    for (const auto& r : ratings) {
        w.write(Json{{"user_id", r.user_id}, {"product_id", r.product_id}, {"rating", r.rating}});
    }
}

std::vector<Rating> load_ratings(const std::string& path) {
    std::vector<Rating> out;
    for_each_jsonl(path, [&](const Json& j) {
        out.push_back(Rating{j.at("user_id").get<std::string>(),
                             j.at("product_id").get<std::string>(),
                             j.at("rating").get<double>()});
    });
    return out;
}

}  // namespace returnguard::implicit
