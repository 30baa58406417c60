#pragma once

#include <map>
#include <string>
#include <vector>

#include "returnguard/domain.hpp"

namespace returnguard::sizing {

/// Escape a token component: "-" -> "\-", "\" -> "\\".
std::string escape_component(const std::string& s);

/// Brand-Gender-Category-Usage-Size with escaped components. Any empty
/// field -> ValidationError.
std::string token_text(const domain::ProductRecord& p);

/// Inverse of token_text: the 5 unescaped components. Malformed -> ParseError.
std::vector<std::string> split_token_text(const std::string& text);

class Vocabulary {
public:
    /// Returns the id, inserting if new.
    int add(const std::string& text);
    /// -1 when absent.
    int id_of(const std::string& text) const;
    const std::string& text_of(int id) const { return texts_.at(static_cast<std::size_t>(id)); }
    std::size_t size() const { return texts_.size(); }
    const std::vector<std::string>& texts() const { return texts_; }

private:
    std::vector<std::string> texts_;
    std::map<std::string, int> index_;
};

struct SizeToken {
    std::string text;
    int token_id = -1;
};

SizeToken tokenize(const domain::ProductRecord& p, Vocabulary& vocab);

/// Row M_i: one user's token ids in cart-add time order.
struct UserSequence {
    std::string user_id;
    std::vector<int> tokens;
};

/// Flatten every cart of each user into one sequence ordered by cart-add
/// time, ties broken by product_id. Users without carts are not emitted;
/// output is sorted by user_id. Unknown product -> ValidationError.
std::vector<UserSequence> build_sequences(const std::vector<domain::CartRecord>& carts,
                                          const domain::Catalog& catalog, Vocabulary& vocab);

struct SkipGramConfig {
    int window = 3;  // s
    int dim = 16;
    double learning_rate = 0.025;  // linearly decayed over all steps
    int epochs = 10;
    std::uint64_t seed = 11;
    bool sampled_softmax = false;  // optional speed mode, K negatives
    int negatives = 5;

    void validate() const;
};

struct SkipGramModel {
    int dim = 0;
    int window = 0;
    std::vector<std::string> vocab_texts;
    std::vector<std::vector<double>> input_vectors;   // u
    std::vector<std::vector<double>> output_vectors;  // v
    // Mean log p(context|center) on a fixed probe set after each epoch.
    std::vector<double> probe_log_prob;

    int vocab_size() const { return static_cast<int>(vocab_texts.size()); }
    int id_of(const std::string& text) const;

    void save(const std::string& path, std::uint64_t seed) const;
    static SkipGramModel load(const std::string& path);
};

/// (center, context) pairs for all windows of all sequences; windows never
/// cross users.
std::vector<std::pair<int, int>> context_pairs(const std::vector<UserSequence>& seqs, int window);

SkipGramModel train_skipgram(const std::vector<UserSequence>& seqs, const Vocabulary& vocab,
                             const SkipGramConfig& cfg);

/// Full softmax p(target | center) with max-subtraction.
double softmax_prob(const SkipGramModel& model, int center, int target);

/// -log softmax_prob; the per-pair training objective (used by tests).
double pair_loss(const SkipGramModel& model, int center, int target);

/// Mean of the input vectors of the sequence's tokens. Empty -> ModelError.
std::vector<double> user_sizing_vector(const SkipGramModel& model, const UserSequence& seq);

/// Same aggregation over an arbitrary token-id list.
std::vector<double> mean_input_vector(const SkipGramModel& model, const std::vector<int>& tokens);

}  // namespace returnguard::sizing
