#include "returnguard/sizing.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "returnguard/container.hpp"

namespace returnguard::sizing {

std::string escape_component(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '\\' || c == '-') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

std::string token_text(const domain::ProductRecord& p) {
    const std::array<std::string, 5> parts = {p.brand, domain::to_string(p.gender), p.category,
                                              p.usage, p.size};
    for (const auto& part : parts) {
        if (part.empty()) {
            throw ValidationError("token_text: empty component in product " + p.product_id);
        }
    }
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out.push_back('-');
        out += escape_component(parts[i]);
    }
    return out;
}

std::vector<std::string> split_token_text(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\\') {
            if (i + 1 >= text.size()) throw ParseError("token: dangling escape");
            cur.push_back(text[++i]);
        } else if (c == '-') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    if (parts.size() != 5) throw ParseError("token: expected 5 components, got " + text);
    return parts;
}

int Vocabulary::add(const std::string& text) {
    auto it = index_.find(text);
    if (it != index_.end()) return it->second;
    const int id = static_cast<int>(texts_.size());
    texts_.push_back(text);
    index_.emplace(text, id);
    return id;
}

int Vocabulary::id_of(const std::string& text) const {
    auto it = index_.find(text);
    return it == index_.end() ? -1 : it->second;
}

SizeToken tokenize(const domain::ProductRecord& p, Vocabulary& vocab) {
    SizeToken t;
    t.text = token_text(p);
    t.token_id = vocab.add(t.text);
    return t;
}

std::vector<UserSequence> build_sequences(const std::vector<domain::CartRecord>& carts,
                                          const domain::Catalog& catalog, Vocabulary& vocab) {
    struct Entry {
        EpochMs ts;
        std::string product_id;
    };
    std::map<std::string, std::vector<Entry>> per_user;
    for (const auto& cart : carts) {
        for (const auto& item : cart.items) {
            if (!catalog.find(item.product_id)) {
                throw ValidationError("build_sequences: unknown product " + item.product_id);
            }
            per_user[cart.user_id].push_back(Entry{item.cart_add_timestamp, item.product_id});
        }
    }
    std::vector<UserSequence> out;
    out.reserve(per_user.size());
    for (auto& [uid, entries] : per_user) {
        std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
            if (a.ts != b.ts) return a.ts < b.ts;
            return a.product_id < b.product_id;
        });
        UserSequence seq;
        seq.user_id = uid;
        for (const auto& e : entries) {
            seq.tokens.push_back(vocab.add(token_text(catalog.at(e.product_id))));
        }
        out.push_back(std::move(seq));
    }
    return out;
}

void SkipGramConfig::validate() const {
    if (window < 1) throw ConfigError("skipgram: window must be >= 1");
    if (dim < 1) throw ConfigError("skipgram: dim must be >= 1");
    if (learning_rate <= 0.0) throw ConfigError("skipgram: learning_rate must be > 0");
    if (epochs < 0) throw ConfigError("skipgram: epochs must be >= 0");
    if (sampled_softmax && negatives < 1) throw ConfigError("skipgram: negatives must be >= 1");
}

std::vector<std::pair<int, int>> context_pairs(const std::vector<UserSequence>& seqs, int window) {
    std::vector<std::pair<int, int>> pairs;
    for (const auto& seq : seqs) {
        const int n = static_cast<int>(seq.tokens.size());
        for (int j = 0; j < n; ++j) {
            for (int k = -window; k <= window; ++k) {
                if (k == 0) continue;
                const int t = j + k;
                if (t < 0 || t >= n) continue;
                pairs.emplace_back(seq.tokens[static_cast<std::size_t>(j)],
                                   seq.tokens[static_cast<std::size_t>(t)]);
            }
        }
    }
    return pairs;
}

int SkipGramModel::id_of(const std::string& text) const {
    auto it = std::find(vocab_texts.begin(), vocab_texts.end(), text);
    return it == vocab_texts.end() ? -1 : static_cast<int>(it - vocab_texts.begin());
}

namespace {

std::vector<double> softmax_over_vocab(const SkipGramModel& m, int center) {
    const auto& u = m.input_vectors[static_cast<std::size_t>(center)];
    const std::size_t v_count = m.output_vectors.size();
    std::vector<double> logits(v_count);
    double max_logit = -1e300;
    for (std::size_t w = 0; w < v_count; ++w) {
        logits[w] = dot(u, m.output_vectors[w]);
        max_logit = std::max(max_logit, logits[w]);
    }
    double denom = 0.0;
    for (std::size_t w = 0; w < v_count; ++w) {
        logits[w] = std::exp(logits[w] - max_logit);
        denom += logits[w];
    }
    for (auto& p : logits) p /= denom;
    return logits;
}

}  // namespace

double softmax_prob(const SkipGramModel& model, int center, int target) {
    if (center < 0 || center >= model.vocab_size() || target < 0 ||
        target >= model.vocab_size()) {
        throw ModelError("softmax_prob: token id out of range");
    }
    return softmax_over_vocab(model, center)[static_cast<std::size_t>(target)];
}

double pair_loss(const SkipGramModel& model, int center, int target) {
    return -std::log(softmax_prob(model, center, target));
}

SkipGramModel train_skipgram(const std::vector<UserSequence>& seqs, const Vocabulary& vocab,
                             const SkipGramConfig& cfg) {
    cfg.validate();
    if (vocab.size() < 2) throw ModelError("train_skipgram: vocabulary must have >= 2 tokens");

    SkipGramModel model;
    model.dim = cfg.dim;
    model.window = cfg.window;
    model.vocab_texts = vocab.texts();

    // N(0, 0.01): variance 0.01, i.e. stddev 0.1.
    Rng rng(cfg.seed);
    const std::size_t v_count = vocab.size();
    model.input_vectors.assign(v_count, std::vector<double>(static_cast<std::size_t>(cfg.dim)));
    model.output_vectors.assign(v_count, std::vector<double>(static_cast<std::size_t>(cfg.dim)));
    for (auto& vec : model.input_vectors) {
        for (auto& x : vec) x = rng.normal(0.0, 0.1);
    }
    for (auto& vec : model.output_vectors) {
        for (auto& x : vec) x = rng.normal(0.0, 0.1);
    }

    auto pairs = context_pairs(seqs, cfg.window);
    if (cfg.epochs == 0) return model;
    if (pairs.empty()) throw ModelError("train_skipgram: no context pairs");

    // Fixed probe set for the monotone-progress check.
    Rng probe_rng = Rng(cfg.seed).fork(2);
    std::vector<std::pair<int, int>> probes;
    const std::size_t probe_count = std::min<std::size_t>(200, pairs.size());
    for (std::size_t i = 0; i < probe_count; ++i) {
        probes.push_back(pairs[probe_rng.below(pairs.size())]);
    }

    Rng order_rng = Rng(cfg.seed).fork(1);
    const std::size_t total_steps = pairs.size() * static_cast<std::size_t>(cfg.epochs);
    std::size_t step = 0;

    std::vector<double> probs;
    std::vector<double> grad_u(static_cast<std::size_t>(cfg.dim));
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        order_rng.shuffle(pairs);
        for (const auto& [center, target] : pairs) {
            const double lr = cfg.learning_rate *
                              std::max(0.01, 1.0 - static_cast<double>(step) /
                                                       static_cast<double>(total_steps));
            ++step;
            auto& u = model.input_vectors[static_cast<std::size_t>(center)];
            if (!cfg.sampled_softmax) {
                probs = softmax_over_vocab(model, center);
                std::fill(grad_u.begin(), grad_u.end(), 0.0);
                for (std::size_t w = 0; w < v_count; ++w) {
                    const double coeff = probs[w] - (static_cast<int>(w) == target ? 1.0 : 0.0);
                    auto& vw = model.output_vectors[w];
                    for (int k = 0; k < cfg.dim; ++k) {
                        grad_u[static_cast<std::size_t>(k)] +=
                            coeff * vw[static_cast<std::size_t>(k)];
                        vw[static_cast<std::size_t>(k)] -=
                            lr * coeff * u[static_cast<std::size_t>(k)];
                    }
                }
                for (int k = 0; k < cfg.dim; ++k) {
                    u[static_cast<std::size_t>(k)] -= lr * grad_u[static_cast<std::size_t>(k)];
                    if (!std::isfinite(u[static_cast<std::size_t>(k)])) {
                        throw ModelError("train_skipgram: non-finite update");
                    }
                }
            } else {
                // Negative-sampling mode: logistic loss on the positive plus
                // K uniform negatives.
                auto update_pair = [&](int w, double label) {
                    auto& vw = model.output_vectors[static_cast<std::size_t>(w)];
                    const double z = dot(u, vw);
                    const double coeff = sigmoid(z) - label;
                    for (int k = 0; k < cfg.dim; ++k) {
                        grad_u[static_cast<std::size_t>(k)] +=
                            coeff * vw[static_cast<std::size_t>(k)];
                        vw[static_cast<std::size_t>(k)] -=
                            lr * coeff * u[static_cast<std::size_t>(k)];
                    }
                };
                std::fill(grad_u.begin(), grad_u.end(), 0.0);
                update_pair(target, 1.0);
                for (int neg = 0; neg < cfg.negatives; ++neg) {
                    int w = static_cast<int>(order_rng.below(v_count));
                    if (w == target) w = static_cast<int>((w + 1) % v_count);
                    update_pair(w, 0.0);
                }
                for (int k = 0; k < cfg.dim; ++k) {
                    u[static_cast<std::size_t>(k)] -= lr * grad_u[static_cast<std::size_t>(k)];
                    if (!std::isfinite(u[static_cast<std::size_t>(k)])) {
                        throw ModelError("train_skipgram: non-finite update");
                    }
                }
            }
        }
        double mean_log_p = 0.0;
        for (const auto& [c, t] : probes) {
            mean_log_p += std::log(softmax_prob(model, c, t));
        }
        model.probe_log_prob.push_back(mean_log_p / static_cast<double>(probes.size()));
    }
    return model;
}

std::vector<double> mean_input_vector(const SkipGramModel& model, const std::vector<int>& tokens) {
    if (tokens.empty()) throw ModelError("user_sizing_vector: empty sequence");
    std::vector<double> out(static_cast<std::size_t>(model.dim), 0.0);
    for (int t : tokens) {
        if (t < 0 || t >= model.vocab_size()) {
            throw ModelError("user_sizing_vector: token id out of range");
        }
        const auto& u = model.input_vectors[static_cast<std::size_t>(t)];
        for (int k = 0; k < model.dim; ++k) {
            out[static_cast<std::size_t>(k)] += u[static_cast<std::size_t>(k)];
        }
    }
    for (auto& x : out) x /= static_cast<double>(tokens.size());
    return out;
}

std::vector<double> user_sizing_vector(const SkipGramModel& model, const UserSequence& seq) {
    return mean_input_vector(model, seq.tokens);
}

void SkipGramModel::save(const std::string& path, std::uint64_t seed) const {
    Json tokens = Json::array();
    for (std::size_t i = 0; i < vocab_texts.size(); ++i) {
        tokens.push_back(Json{{"text", vocab_texts[i]},
                              {"u", input_vectors[i]},
                              {"v", output_vectors[i]}});
    }
    container::save(path, "sizing",
                    Json{{"d", dim},
                         {"window", window},
                         {"n_tokens", vocab_texts.size()},
                         {"seed", seed}},
                    Json{{"tokens", tokens}, {"probe_log_prob", probe_log_prob}});
}

SkipGramModel SkipGramModel::load(const std::string& path) {
    auto [header, payload] = container::open(path, "sizing");
    SkipGramModel m;
    m.dim = header.at("d").get<int>();
    m.window = header.at("window").get<int>();
    for (const auto& t : payload.at("tokens")) {
        m.vocab_texts.push_back(t.at("text").get<std::string>());
        m.input_vectors.push_back(t.at("u").get<std::vector<double>>());
        m.output_vectors.push_back(t.at("v").get<std::vector<double>>());
    }
    m.probe_log_prob = payload.at("probe_log_prob").get<std::vector<double>>();
    for (const auto& v : m.input_vectors) {
        if (static_cast<int>(v.size()) != m.dim || !all_finite(v)) {
            throw ModelError(path + ": corrupt input vectors");
        }
    }
    return m;
}

}  // namespace returnguard::sizing
