#include "radixlab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include "radixlab/chain_laws.hpp"
#include "radixlab/error.hpp"

namespace radixlab {
namespace {

// One input Z_i: an exact atom, or a diffuse draw realized bit by bit.
class InputString {
public:
    static InputString atom(InfiniteString s) {
        InputString z;
        z.atom_ = std::move(s);
        return z;
    }
    static InputString lazy(SourceMeasure component) {
        InputString z;
        z.component_ = std::move(component);
        return z;
    }

    [[nodiscard]] bool is_atom() const noexcept { return atom_.has_value(); }
    [[nodiscard]] const InfiniteString& atom_string() const { return *atom_; }

    int bit(std::size_t i, Rng& rng) {
        if (atom_) return atom_->bit(i);
        while (bits_.size() <= i) {
            const Word prefix{bits_};
            bits_.push_back(rng.bernoulli(next_bit_probability(*component_, prefix)) ? '1' : '0');
        }
        return bits_[i] == '1' ? 1 : 0;
    }

private:
    std::optional<InfiniteString> atom_;
    std::optional<SourceMeasure> component_;
    std::string bits_;
};

InputString draw_input(const SourceMeasure& nu, Rng& rng) {
    if (const auto* mix = std::get_if<Mixture>(&nu.kind())) {
        Rational remaining = 1;
        for (std::size_t i = 0; i < mix->parts.size(); ++i) {
            const auto& part = mix->parts[i];
            if (part.weight == 0) continue;
            if (i + 1 == mix->parts.size() || part.weight >= remaining || rng.bernoulli(part.weight / remaining)) {
                return draw_input(part.measure, rng);
            }
            remaining -= part.weight;
        }
        throw Error(ErrorKind::InvalidMeasure, "mixture weights exhausted");
    }
    if (const auto* atomic = std::get_if<Atomic>(&nu.kind())) {
        Rational remaining = 1;
        for (std::size_t i = 0; i < atomic->atoms.size(); ++i) {
            const auto& a = atomic->atoms[i];
            if (i + 1 == atomic->atoms.size() || a.mass >= remaining || rng.bernoulli(a.mass / remaining)) {
                return InputString::atom(a.string);
            }
            remaining -= a.mass;
        }
    }
    return InputString::lazy(nu);
}

// Binary trie over the inputs inserted so far; leaves are the separating prefixes.
class GrowingTrie {
public:
    enum class Outcome { Inserted, Duplicate };

    explicit GrowingTrie(std::size_t probe_depth) : probe_depth_(probe_depth) {}

    [[nodiscard]] std::size_t size() const noexcept { return inputs_.size(); }

    Outcome insert(InputString z, Rng& rng) {
        const int id = static_cast<int>(inputs_.size());
        if (nodes_.empty()) {
            inputs_.push_back(std::move(z));
            nodes_.push_back(Node{});
            nodes_[0].input = id;
            nodes_[0].leaves = 1;
            leaf_node_.push_back(0);
            return Outcome::Inserted;
        }
        int cur = 0;
        std::size_t depth = 0;
        std::vector<int> path;
        while (nodes_[static_cast<std::size_t>(cur)].input < 0) {
            path.push_back(cur);
            const int b = z.bit(depth, rng);
            const int next = nodes_[static_cast<std::size_t>(cur)].child[b];
            if (next < 0) {
                inputs_.push_back(std::move(z));
                const int leaf = add_node(cur, b, id);
                for (int p : path) ++nodes_[static_cast<std::size_t>(p)].leaves;
                leaf_node_.push_back(leaf);
                return Outcome::Inserted;
            }
            cur = next;
            ++depth;
        }
        const int other = nodes_[static_cast<std::size_t>(cur)].input;
        InputString& w = inputs_[static_cast<std::size_t>(other)];
        std::size_t split = 0;
        if (z.is_atom() && w.is_atom()) {
            auto diff = first_difference(z.atom_string(), w.atom_string());
            if (!diff) return Outcome::Duplicate;
            split = *diff;
        } else {
            split = depth;
            while (z.bit(split, rng) == w.bit(split, rng)) {
                if (++split >= probe_depth_) {
                    throw Error(ErrorKind::SeparationDepthExceeded,
                                "inputs " + std::to_string(other + 1) + " and " + std::to_string(id + 1) +
                                    " agree to depth " + std::to_string(probe_depth_));
                }
            }
        }
        inputs_.push_back(std::move(z));
        InputString& zz = inputs_.back();
        InputString& ww = inputs_[static_cast<std::size_t>(other)];
        for (int p : path) ++nodes_[static_cast<std::size_t>(p)].leaves;
        // The old leaf becomes internal; extend a unary chain down to the split.
        nodes_[static_cast<std::size_t>(cur)].input = -1;
        nodes_[static_cast<std::size_t>(cur)].leaves = 2;
        for (std::size_t pos = depth; pos < split; ++pos) {
            cur = add_node(cur, zz.bit(pos, rng), -1);
            nodes_[static_cast<std::size_t>(cur)].leaves = 2;
        }
        leaf_node_[static_cast<std::size_t>(other)] = add_node(cur, ww.bit(split, rng), other);
        leaf_node_.push_back(add_node(cur, zz.bit(split, rng), id));
        return Outcome::Inserted;
    }

    [[nodiscard]] Word leaf_word(std::size_t input) const {
        std::string bits;
        for (int n = leaf_node_.at(input); n != 0; n = nodes_[static_cast<std::size_t>(n)].parent) {
            bits.push_back(nodes_[static_cast<std::size_t>(n)].bit ? '1' : '0');
        }
        std::reverse(bits.begin(), bits.end());
        return Word{bits};
    }

    [[nodiscard]] RadixTree snapshot() const {
        std::vector<Word> leaves;
        leaves.reserve(inputs_.size());
        std::string prefix;
        collect(0, prefix, leaves);
        return RadixTree{std::move(leaves)};
    }

    /// #{leaves ζ : y <= ζ}
    [[nodiscard]] std::size_t count_below(const Word& y) const {
        int cur = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const auto& node = nodes_[static_cast<std::size_t>(cur)];
            if (node.input >= 0) return 0;
            cur = node.child[y.bit(i)];
            if (cur < 0) return 0;
        }
        return nodes_[static_cast<std::size_t>(cur)].leaves;
    }

private:
    struct Node {
        int child[2] = {-1, -1};
        int parent = -1;
        int bit = 0;
        int input = -1;
        std::size_t leaves = 1;
    };

    int add_node(int parent, int bit, int input) {
        Node n;
        n.parent = parent;
        n.bit = bit;
        n.input = input;
        nodes_.push_back(n);
        const int id = static_cast<int>(nodes_.size() - 1);
        nodes_[static_cast<std::size_t>(parent)].child[bit] = id;
        return id;
    }

    void collect(int node, std::string& prefix, std::vector<Word>& out) const {
        const auto& n = nodes_[static_cast<std::size_t>(node)];
        if (n.input >= 0) {
            out.emplace_back(prefix);
            return;
        }
        for (int b = 0; b < 2; ++b) {
            if (n.child[b] < 0) continue;
            prefix.push_back(b ? '1' : '0');
            collect(n.child[b], prefix, out);
            prefix.pop_back();
        }
    }

    std::size_t probe_depth_;
    std::vector<Node> nodes_;
    std::vector<InputString> inputs_;
    std::vector<int> leaf_node_;
};

void require_diffuse(const SourceMeasure& nu) {
    if (!is_diffuse(nu)) {
        throw Error(ErrorKind::PreconditionViolated, "this sampler needs a diffuse measure; use the killed chain");
    }
}

void require_insert(GrowingTrie& trie, InputString z, Rng& rng) {
    if (trie.insert(std::move(z), rng) == GrowingTrie::Outcome::Duplicate) {
        throw Error(ErrorKind::SeparationDepthExceeded, "repeated input in a diffuse chain");
    }
}

}  // namespace

ChainPath::ChainPath(std::vector<RadixTree> trees, bool killed, std::vector<std::vector<Word>> labels)
    : trees_(std::move(trees)), killed_(killed), labels_(std::move(labels)) {
    if (!trees_.empty() && trees_.front() != RadixTree{}) {
        throw Error(ErrorKind::IdentityViolation, "path must start at the one-leaf tree");
    }
    for (std::size_t k = 1; k < trees_.size(); ++k) {
        if (!classify_move(trees_[k - 1], trees_[k])) {
            throw Error(ErrorKind::IdentityViolation,
                        "illegal step " + trees_[k - 1].to_string() + " -> " + trees_[k].to_string());
        }
    }
    if (!labels_.empty()) {
        if (labels_.size() != trees_.size()) throw Error(ErrorKind::IdentityViolation, "one labeling per tree expected");
        for (std::size_t k = 0; k < trees_.size(); ++k) LabeledRadixTree(trees_[k], labels_[k]);
    }
}

bool LabelTrace::is_monotone() const {
    for (const auto& seq : per_label_) {
        for (std::size_t m = 1; m < seq.size(); ++m) {
            if (!seq[m - 1].is_prefix_of(seq[m])) return false;
        }
    }
    return true;
}

bool LabelTrace::meets_are_stable() const {
    const std::size_t n = per_label_.size();
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = i + 1; j <= n; ++j) {
            const Word first = common_prefix(at(i, j), at(j, j));
            for (std::size_t m = j + 1; m <= n; ++m) {
                if (common_prefix(at(i, m), at(j, m)) != first) return false;
            }
        }
    }
    return true;
}

namespace {

LabeledChain run_chain(const SourceMeasure& nu, std::size_t n, std::uint64_t seed, std::uint64_t replica,
                       bool with_labels) {
    require_diffuse(nu);
    if (n == 0) throw Error(ErrorKind::PreconditionViolated, "n must be at least 1");
    Rng rng(seed, replica);
    GrowingTrie trie(kSimulationProbeDepth);
    std::vector<RadixTree> trees;
    std::vector<std::vector<Word>> labels;
    std::vector<std::vector<Word>> per_label(with_labels ? n : 0);
    for (std::size_t k = 0; k < n; ++k) {
        require_insert(trie, draw_input(nu, rng), rng);
        trees.push_back(trie.snapshot());
        if (!with_labels) continue;
        std::vector<Word> step;
        for (std::size_t i = 0; i <= k; ++i) {
            step.push_back(trie.leaf_word(i));
            per_label[i].push_back(step.back());
        }
        labels.push_back(std::move(step));
    }
    return {ChainPath(std::move(trees), false, std::move(labels)), LabelTrace(std::move(per_label))};
}

}  // namespace

ChainPath sample_chain(const SourceMeasure& nu, std::size_t n, std::uint64_t seed, std::uint64_t replica) {
    return run_chain(nu, n, seed, replica, false).path;
}

RadixTree sample_tree(const SourceMeasure& nu, std::size_t n, std::uint64_t seed, std::uint64_t replica) {
    require_diffuse(nu);
    if (n == 0) throw Error(ErrorKind::PreconditionViolated, "n must be at least 1");
    Rng rng(seed, replica);
    GrowingTrie trie(kSimulationProbeDepth);
    for (std::size_t k = 0; k < n; ++k) require_insert(trie, draw_input(nu, rng), rng);
    return trie.snapshot();
}

LabeledChain sample_labeled_chain(const SourceMeasure& nu, std::size_t n, std::uint64_t seed,
                                  std::uint64_t replica) {
    return run_chain(nu, n, seed, replica, true);
}

ChainPath sample_bridge(const RadixTree& t, std::uint64_t seed, std::uint64_t replica) {
    Rng rng(seed, replica);
    std::vector<Word> leaf_of_label = t.leaves();
    for (std::size_t i = leaf_of_label.size(); i > 1; --i) {
        std::swap(leaf_of_label[i - 1], leaf_of_label[rng.uniform_below(i)]);
    }
    std::vector<RadixTree> trees{t};
    std::vector<std::vector<Word>> labels{leaf_of_label};
    RadixTree cur = t;
    while (cur.leaf_count() > 1) {
        const Word v = leaf_of_label.back();
        leaf_of_label.pop_back();
        auto pruned = prune_leaf(cur, v);
        if (pruned.merged_leaf) {
            // The sibling's label moves to the new leaf.
            const Word sib = v.sibling();
            *std::find(leaf_of_label.begin(), leaf_of_label.end(), sib) = *pruned.merged_leaf;
        }
        cur = std::move(pruned.tree);
        trees.push_back(cur);
        labels.push_back(leaf_of_label);
    }
    std::reverse(trees.begin(), trees.end());
    std::reverse(labels.begin(), labels.end());
    return ChainPath(std::move(trees), false, std::move(labels));
}

ChainPath sample_killed_chain(const SourceMeasure& nu, std::uint64_t seed, std::size_t max_n,
                              std::uint64_t replica) {
    Rng rng(seed, replica);
    GrowingTrie trie(kSimulationProbeDepth);
    std::vector<RadixTree> trees;
    while (trees.size() < max_n) {
        if (trie.insert(draw_input(nu, rng), rng) == GrowingTrie::Outcome::Duplicate) {
            return ChainPath(std::move(trees), true);
        }
        trees.push_back(trie.snapshot());
    }
    return ChainPath(std::move(trees), false);
}

double estimate_cylinder(std::span<const RadixTree> trees, const Word& y) {
    if (trees.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& t : trees) {
        sum += static_cast<double>(t.count_leaves_below(y)) / static_cast<double>(t.leaf_count());
    }
    return sum / static_cast<double>(trees.size());
}

std::vector<ConvergenceRow> kernel_convergence(const SourceMeasure& nu, const RadixTree& s, std::size_t n,
                                               std::size_t replicas, std::uint64_t seed, std::size_t threads) {
    require_diffuse(nu);
    const std::size_t m = s.leaf_count();
    if (n < m) throw Error(ErrorKind::PreconditionViolated, "n must be at least the leaf count of s");
    if (replicas == 0) throw Error(ErrorKind::PreconditionViolated, "replicas must be positive");
    const std::size_t rows = n - m + 1;
    std::vector<std::vector<double>> values(replicas, std::vector<double>(rows));
    for_each_replica(replicas, threads, [&](std::size_t r) {
        Rng rng(seed, r);
        GrowingTrie trie(kSimulationProbeDepth);
        for (std::size_t k = 1; k <= n; ++k) {
            require_insert(trie, draw_input(nu, rng), rng);
            if (k < m) continue;
            // Same product as dm_kernel, from live subtree counts.
            mpz_class num = 1;
            mpz_class den = 1;
            for (const auto& y : s.leaves()) {
                mpz_class factor = static_cast<unsigned long>(trie.count_below(y));
                mpz_mul_2exp(factor.get_mpz_t(), factor.get_mpz_t(), y.size());
                num *= factor;
            }
            for (std::size_t i = 0; i < m; ++i) den *= static_cast<unsigned long>(k - i);
            values[r][k - m] = Rational(num, den).get_d();
        }
    });
    std::vector<ConvergenceRow> out;
    out.reserve(rows);
    for (std::size_t row = 0; row < rows; ++row) {
        double sum = 0.0;
        for (std::size_t r = 0; r < replicas; ++r) sum += values[r][row];
        const double mean = sum / static_cast<double>(replicas);
        double sq = 0.0;
        for (std::size_t r = 0; r < replicas; ++r) sq += (values[r][row] - mean) * (values[r][row] - mean);
        const double sd = replicas > 1 ? std::sqrt(sq / static_cast<double>(replicas - 1)) : 0.0;
        out.push_back({row + m, mean, sd});
    }
    return out;
}

}  // namespace radixlab
