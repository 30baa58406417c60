#include "returnguard/bpr.hpp"

#include <algorithm>

#include "returnguard/container.hpp"

namespace returnguard::bpr {

void BprConfig::validate() const {
    if (dim < 1) throw ConfigError("bpr: dim must be >= 1");
    if (learning_rate <= 0.0) throw ConfigError("bpr: learning_rate must be > 0");
    if (lambda_theta < 0.0) throw ConfigError("bpr: lambda_theta must be >= 0");
    if (epochs < 0 || triplets_per_epoch < 0) throw ConfigError("bpr: negative counts");
    if (init_scale < 0.0) throw ConfigError("bpr: init_scale must be >= 0");
}

InteractionMatrix InteractionMatrix::from_ratings(const std::vector<implicit::Rating>& ratings,
                                                  const std::vector<std::string>& item_universe,
                                                  double observed_threshold) {
    InteractionMatrix m;
    m.item_ids_ = item_universe;
    std::sort(m.item_ids_.begin(), m.item_ids_.end());
    m.n_items_ = m.item_ids_.size();
    std::map<std::string, std::size_t> item_index;
    for (std::size_t i = 0; i < m.item_ids_.size(); ++i) item_index[m.item_ids_[i]] = i;

    std::map<std::string, std::vector<std::size_t>> per_user;
    for (const auto& r : ratings) {
        if (r.rating < observed_threshold) continue;  // ties toward unobserved
        auto it = item_index.find(r.product_id);
        if (it == item_index.end()) {
            throw ValidationError("ratings reference unknown item " + r.product_id);
        }
        per_user[r.user_id].push_back(it->second);
    }
    for (auto& [uid, items] : per_user) {
        std::sort(items.begin(), items.end());
        items.erase(std::unique(items.begin(), items.end()), items.end());
        m.user_ids_.push_back(uid);
        m.observed_.push_back(std::move(items));
    }
    m.finalize();
    return m;
}

InteractionMatrix InteractionMatrix::from_pairs(
    std::size_t n_users, std::size_t n_items,
    const std::vector<std::pair<std::size_t, std::size_t>>& observed,
    std::vector<std::string> user_ids, std::vector<std::string> item_ids) {
    InteractionMatrix m;
    m.n_items_ = n_items;
    if (user_ids.empty()) {
        for (std::size_t u = 0; u < n_users; ++u) user_ids.push_back("u" + std::to_string(u));
    }
    if (item_ids.empty()) {
        for (std::size_t i = 0; i < n_items; ++i) item_ids.push_back("i" + std::to_string(i));
    }
    m.user_ids_ = std::move(user_ids);
    m.item_ids_ = std::move(item_ids);
    m.observed_.resize(n_users);
    for (const auto& [u, i] : observed) {
        if (u >= n_users || i >= n_items) throw ConfigError("from_pairs: index out of range");
        m.observed_[u].push_back(i);
    }
    for (auto& items : m.observed_) {
        std::sort(items.begin(), items.end());
        items.erase(std::unique(items.begin(), items.end()), items.end());
    }
    m.finalize();
    return m;
}

void InteractionMatrix::finalize() {
    total_observed_ = 0;
    eligible_.clear();
    for (std::size_t u = 0; u < observed_.size(); ++u) {
        total_observed_ += observed_[u].size();
        if (!observed_[u].empty() && observed_[u].size() < n_items_) {
            eligible_.push_back(u);
        }
    }
}

bool InteractionMatrix::is_observed(std::size_t user, std::size_t item) const {
    const auto& v = observed_[user];
    return std::binary_search(v.begin(), v.end(), item);
}

Triplet sample_triplet(const InteractionMatrix& matrix, Rng& rng) {
    const auto& eligible = matrix.eligible_users();
    if (eligible.empty()) {
        throw ModelError("sample_triplet: no user with both observed and unobserved items");
    }
    const std::size_t user = eligible[rng.below(eligible.size())];
    const auto& obs = matrix.observed_items(user);
    const std::size_t pos = obs[rng.below(obs.size())];
    // Rejection keeps the negative draw exactly uniform over unobserved items.
    std::size_t neg;
    do {
        neg = rng.below(matrix.n_items());
    } while (matrix.is_observed(user, neg));
    return Triplet{user, pos, neg};
}

double triplet_score(const EmbeddingMatrix& emb, const Triplet& t) {
    return dot(emb.user_factors[t.user], emb.item_factors[t.pos]) -
           dot(emb.user_factors[t.user], emb.item_factors[t.neg]);
}

double triplet_loss(const EmbeddingMatrix& emb, const Triplet& t, double lambda_theta) {
    const double x = triplet_score(emb, t);
    double reg = dot(emb.user_factors[t.user], emb.user_factors[t.user]) +
                 dot(emb.item_factors[t.pos], emb.item_factors[t.pos]) +
                 dot(emb.item_factors[t.neg], emb.item_factors[t.neg]);
    return -log_sigmoid(x) + lambda_theta * reg;
}

void bpr_step(EmbeddingMatrix& emb, const Triplet& t, const BprConfig& cfg) {
    if (t.pos == t.neg) throw ModelError("bpr_step: i == j");
    auto& w_u = emb.user_factors[t.user];
    auto& h_i = emb.item_factors[t.pos];
    auto& h_j = emb.item_factors[t.neg];

    const double x = dot(w_u, h_i) - dot(w_u, h_j);
    const double coeff = 1.0 - sigmoid(x);  // d(-ln sigma(x))/dx = -(1 - sigma(x))
    const double lr = cfg.learning_rate;
    const double lam = cfg.lambda_theta;

    for (int k = 0; k < cfg.dim; ++k) {
        const double gu = -coeff * (h_i[k] - h_j[k]) + 2.0 * lam * w_u[k];
        const double gi = -coeff * w_u[k] + 2.0 * lam * h_i[k];
        const double gj = coeff * w_u[k] + 2.0 * lam * h_j[k];
        w_u[k] -= lr * gu;
        h_i[k] -= lr * gi;
        h_j[k] -= lr * gj;
        if (!std::isfinite(w_u[k]) || !std::isfinite(h_i[k]) || !std::isfinite(h_j[k])) {
            throw ModelError("bpr_step: non-finite update (learning rate too high?)");
        }
    }
}

EmbeddingMatrix init_embedding(const InteractionMatrix& matrix, const BprConfig& cfg) {
    cfg.validate();
    EmbeddingMatrix emb;
    emb.dim = cfg.dim;
    emb.user_ids = matrix.user_ids();
    emb.item_ids = matrix.item_ids();
    Rng rng(cfg.seed);
    emb.user_factors.resize(emb.user_ids.size());
    for (auto& v : emb.user_factors) {
        v.resize(static_cast<std::size_t>(cfg.dim));
        for (auto& x : v) x = rng.normal(0.0, cfg.init_scale);
    }
    emb.item_factors.resize(emb.item_ids.size());
    for (auto& v : emb.item_factors) {
        v.resize(static_cast<std::size_t>(cfg.dim));
        for (auto& x : v) x = rng.normal(0.0, cfg.init_scale);
    }
    emb.rebuild_index();
    return emb;
}

EmbeddingMatrix train(const InteractionMatrix& matrix, const BprConfig& cfg) {
    cfg.validate();
    EmbeddingMatrix emb = init_embedding(matrix, cfg);
    Rng sample_rng = Rng(cfg.seed).fork(1);
    const std::size_t per_epoch = cfg.triplets_per_epoch > 0
                                      ? static_cast<std::size_t>(cfg.triplets_per_epoch)
                                      : matrix.total_observed();
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t s = 0; s < per_epoch; ++s) {
            bpr_step(emb, sample_triplet(matrix, sample_rng), cfg);
        }
    }
    return emb;
}

void EmbeddingMatrix::rebuild_index() {
    user_index.clear();
    item_index.clear();
    for (std::size_t i = 0; i < user_ids.size(); ++i) user_index[user_ids[i]] = i;
    for (std::size_t i = 0; i < item_ids.size(); ++i) item_index[item_ids[i]] = i;
}

const std::vector<double>* EmbeddingMatrix::find_item(const std::string& product_id) const {
    auto it = item_index.find(product_id);
    return it == item_index.end() ? nullptr : &item_factors[it->second];
}

double EmbeddingMatrix::affinity_idx(std::size_t user, std::size_t item) const {
    return dot(user_factors[user], item_factors[item]);
}

double EmbeddingMatrix::affinity(const std::string& user_id, const std::string& item_id) const {
    auto u = user_index.find(user_id);
    if (u == user_index.end()) throw ModelError("affinity: unknown user " + user_id);
    auto i = item_index.find(item_id);
    if (i == item_index.end()) throw ModelError("affinity: unknown item " + item_id);
    return affinity_idx(u->second, i->second);
}

double EmbeddingMatrix::similarity(const std::string& item_a, const std::string& item_b) const {
    auto a = item_index.find(item_a);
    if (a == item_index.end()) throw ModelError("similarity: unknown item " + item_a);
    auto b = item_index.find(item_b);
    if (b == item_index.end()) throw ModelError("similarity: unknown item " + item_b);
    return cosine(item_factors[a->second], item_factors[b->second]);
}

void EmbeddingMatrix::save(const std::string& path, std::uint64_t seed) const {
    Json users = Json::array();
    for (std::size_t i = 0; i < user_ids.size(); ++i) {
        users.push_back(Json{{"id", user_ids[i]}, {"v", user_factors[i]}});
    }
    Json items = Json::array();
    for (std::size_t i = 0; i < item_ids.size(); ++i) {
        items.push_back(Json{{"id", item_ids[i]}, {"v", item_factors[i]}});
    }
    container::save(path, "bpr",
                    Json{{"d", dim},
                         {"n_users", user_ids.size()},
                         {"n_items", item_ids.size()},
                         {"seed", seed}},
                    Json{{"user_factors", users}, {"item_factors", items}});
}

EmbeddingMatrix EmbeddingMatrix::load(const std::string& path) {
    auto [header, payload] = container::open(path, "bpr");
    EmbeddingMatrix emb;
    emb.dim = header.at("d").get<int>();
    for (const auto& u : payload.at("user_factors")) {
        emb.user_ids.push_back(u.at("id").get<std::string>());
        emb.user_factors.push_back(u.at("v").get<std::vector<double>>());
    }
    for (const auto& i : payload.at("item_factors")) {
        emb.item_ids.push_back(i.at("id").get<std::string>());
        emb.item_factors.push_back(i.at("v").get<std::vector<double>>());
    }
    for (const auto& v : emb.user_factors) {
        if (static_cast<int>(v.size()) != emb.dim || !all_finite(v)) {
            throw ModelError(path + ": corrupt user factors");
        }
    }
    for (const auto& v : emb.item_factors) {
        if (static_cast<int>(v.size()) != emb.dim || !all_finite(v)) {
            throw ModelError(path + ": corrupt item factors");
        }
    }
    emb.rebuild_index();
    return emb;
}

}  // namespace returnguard::bpr
