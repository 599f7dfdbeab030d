#include "radixlab/radix_tree.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "radixlab/error.hpp"

namespace radixlab {
namespace {

std::string join_words(std::span<const Word> words) {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += ',';
        out += w.to_string();
    }
    return out;
}

// Leaves with prefix y form a contiguous run starting at lower_bound(y).
auto leaves_below(const std::vector<Word>& leaves, const Word& y) {
    auto first = std::lower_bound(leaves.begin(), leaves.end(), y);
    auto last = std::partition_point(first, leaves.end(),
                                     [&](const Word& w) { return y.is_prefix_of(w); });
    return std::pair{first, last};
}

}  // namespace

bool is_valid_shape(std::span<const Word> leaves) {
    if (leaves.empty()) return false;
    std::vector<Word> sorted(leaves.begin(), leaves.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.size() == 1) return sorted.front().empty();
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
        // In sorted order a prefix is immediately followed by one of its extensions.
        if (sorted[i].is_prefix_of(sorted[i + 1])) return false;
    }
    for (const auto& leaf : sorted) {
        auto [first, last] = leaves_below(sorted, leaf.sibling());
        if (first == last) return false;
    }
    return true;
}

RadixTree::RadixTree() : leaves_{Word{}} {}

RadixTree::RadixTree(std::vector<Word> leaves) : leaves_(std::move(leaves)) {
    std::sort(leaves_.begin(), leaves_.end());
    if (!is_valid_shape(leaves_)) {
        throw Error(ErrorKind::InvalidTree, "not a radix sort tree: {" + join_words(leaves_) + "}");
    }
}

RadixTree RadixTree::parse(std::string_view text) {
    std::vector<Word> leaves;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        auto token = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
        while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        if (token.empty()) throw Error(ErrorKind::ParseError, "empty leaf in tree text '" + std::string(text) + "'");
        leaves.push_back(Word::parse(token));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return RadixTree{std::move(leaves)};
}

RadixTree RadixTree::from_json(std::string_view json) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
    if (!doc.is_object() || !doc.contains("leaves") || !doc["leaves"].is_array()) {
        throw Error(ErrorKind::ParseError, "expected {\"leaves\":[...]}");
    }
    std::vector<Word> leaves;
    for (const auto& item : doc["leaves"]) {
        if (!item.is_string()) throw Error(ErrorKind::ParseError, "leaf must be a string");
        leaves.push_back(Word::parse(item.get<std::string>()));
    }
    return RadixTree{std::move(leaves)};
}

std::size_t RadixTree::max_depth() const noexcept {
    std::size_t d = 0;
    for (const auto& w : leaves_) d = std::max(d, w.size());
    return d;
}

bool RadixTree::is_leaf(const Word& w) const { return std::binary_search(leaves_.begin(), leaves_.end(), w); }

bool RadixTree::has_vertex(const Word& w) const {
    auto [first, last] = leaves_below(leaves_, w);
    return first != last;
}

std::size_t RadixTree::count_leaves_below(const Word& y) const {
    auto [first, last] = leaves_below(leaves_, y);
    return static_cast<std::size_t>(last - first);
}

std::vector<Word> RadixTree::vertices() const {
    std::set<Word> all;
    for (const auto& leaf : leaves_) {
        for (std::size_t k = 0; k <= leaf.size(); ++k) all.insert(leaf.prefix(k));
    }
    return {all.begin(), all.end()};
}

bool RadixTree::is_subtree_of(const RadixTree& other) const {
    return std::all_of(leaves_.begin(), leaves_.end(), [&](const Word& w) { return other.has_vertex(w); });
}

std::string RadixTree::to_string() const { return join_words(leaves_); }

std::string RadixTree::to_json() const {
    nlohmann::json doc;
    doc["leaves"] = nlohmann::json::array();
    for (const auto& w : leaves_) doc["leaves"].push_back(w.bits());
    return doc.dump();
}

LabeledRadixTree::LabeledRadixTree(RadixTree tree, std::vector<Word> leaf_of_label)
    : tree_(std::move(tree)), leaf_of_label_(std::move(leaf_of_label)) {
    std::vector<Word> sorted = leaf_of_label_;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != tree_.leaves()) {
        throw Error(ErrorKind::InvalidTree, "labels are not a bijection onto the leaves of " + tree_.to_string());
    }
}

std::vector<Word> separating_prefixes(std::span<const InfiniteString> strings, std::size_t probe_depth) {
    const std::size_t n = strings.size();
    if (n == 0) throw Error(ErrorKind::PreconditionViolated, "separating_prefixes needs at least one string");
    std::vector<std::size_t> length(n, 0);
    if (n == 1) return {Word{}};
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
            auto diff = first_difference(strings[j], strings[k], probe_depth);
            if (!diff) {
                const bool exact = strings[j].is_periodic() && strings[k].is_periodic();
                throw Error(ErrorKind::DuplicateInput,
                            "inputs " + std::to_string(j + 1) + " and " + std::to_string(k + 1) +
                                (exact ? " are identical (compared exactly to depth "
                                       : " agree to probe depth ") +
                                std::to_string(exact ? exact_comparison_bound(strings[j], strings[k]) : probe_depth) +
                                (exact ? ")" : ""));
            }
            length[j] = std::max(length[j], *diff + 1);
            length[k] = std::max(length[k], *diff + 1);
        }
    }
    std::vector<Word> out;
    out.reserve(n);
    for (std::size_t j = 0; j < n; ++j) out.push_back(strings[j].prefix(length[j]));
    return out;
}

RadixTree build_radix_tree(std::span<const InfiniteString> strings, std::size_t probe_depth) {
    return RadixTree{separating_prefixes(strings, probe_depth)};
}

PruneResult prune_leaf(const RadixTree& t, const Word& v) {
    if (!t.is_leaf(v)) throw Error(ErrorKind::NotALeaf, v.to_string() + " is not a leaf of " + t.to_string());
    if (t.leaf_count() < 2) throw Error(ErrorKind::Underflow, "cannot prune the one-leaf tree");
    std::vector<Word> leaves;
    leaves.reserve(t.leaf_count());
    const Word sib = v.sibling();
    if (!t.is_leaf(sib)) {
        for (const auto& w : t.leaves()) {
            if (w != v) leaves.push_back(w);
        }
        return {RadixTree{std::move(leaves)}, std::nullopt};
    }
    Word cur = v.parent();
    while (!cur.empty() && !t.has_vertex(cur.sibling())) cur = cur.parent();
    for (const auto& w : t.leaves()) {
        if (w != v && w != sib) leaves.push_back(w);
    }
    leaves.push_back(cur);
    return {RadixTree{std::move(leaves)}, cur};
}

std::optional<MoveDescriptor> classify_move(const RadixTree& s, const RadixTree& t) {
    if (t.leaf_count() != s.leaf_count() + 1) return std::nullopt;
    std::vector<Word> removed;
    std::vector<Word> added;
    std::set_difference(s.leaves().begin(), s.leaves().end(), t.leaves().begin(), t.leaves().end(),
                        std::back_inserter(removed));
    std::set_difference(t.leaves().begin(), t.leaves().end(), s.leaves().begin(), s.leaves().end(),
                        std::back_inserter(added));
    if (removed.empty() && added.size() == 1) {
        const Word& w = added.front();
        if (w.empty() || !s.is_internal(w.sibling()) || s.has_vertex(w)) return std::nullopt;
        MoveDescriptor m;
        m.kind = MoveDescriptor::Kind::AttachToInternal;
        m.attached = w;
        return m;
    }
    if (removed.size() == 1 && added.size() == 2) {
        const Word& y = removed.front();
        const Word& a = added[0];
        const Word& b = added[1];
        if (!y.is_proper_prefix_of(a) || a.sibling() != b) return std::nullopt;
        MoveDescriptor m;
        m.kind = MoveDescriptor::Kind::SplitLeaf;
        m.split = y;
        m.first = a;
        m.second = b;
        return m;
    }
    return std::nullopt;
}

std::vector<Successor> forward_successors(const RadixTree& s, std::size_t depth_cap) {
    if (depth_cap < s.max_depth()) {
        throw Error(ErrorKind::CapTooSmall, "depth cap " + std::to_string(depth_cap) + " below tree depth " +
                                                std::to_string(s.max_depth()));
    }
    std::vector<Successor> out;
    for (const auto& x : s.vertices()) {
        if (x.empty() || s.is_leaf(x)) continue;
        const Word w = x.sibling();
        if (s.has_vertex(w)) continue;
        std::vector<Word> leaves = s.leaves();
        leaves.push_back(w);
        MoveDescriptor m;
        m.kind = MoveDescriptor::Kind::AttachToInternal;
        m.attached = w;
        out.push_back({RadixTree{std::move(leaves)}, std::move(m)});
    }
    for (const auto& y : s.leaves()) {
        for (std::size_t p = 1; y.size() + p <= depth_cap; ++p) {
            // 2^(p-1) choices of v_1..v_{p-1}; the last bit splits.
            for (std::size_t code = 0; code < (std::size_t{1} << (p - 1)); ++code) {
                Word stem = y;
                for (std::size_t i = p - 1; i-- > 0;) stem = stem.child(static_cast<int>((code >> i) & 1));
                std::vector<Word> leaves;
                leaves.reserve(s.leaf_count() + 1);
                for (const auto& w : s.leaves()) {
                    if (w != y) leaves.push_back(w);
                }
                MoveDescriptor m;
                m.kind = MoveDescriptor::Kind::SplitLeaf;
                m.split = y;
                m.first = stem.child(0);
                m.second = stem.child(1);
                leaves.push_back(m.first);
                leaves.push_back(m.second);
                out.push_back({RadixTree{std::move(leaves)}, std::move(m)});
            }
        }
    }
    return out;
}

std::vector<Word> new_leaves(const MoveDescriptor& move) {
    if (move.kind == MoveDescriptor::Kind::AttachToInternal) return {move.attached};
    return {move.first, move.second};
}

}  // namespace radixlab
