#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radixlab/infinite_string.hpp"
#include "radixlab/word.hpp"

namespace radixlab {

/// A tree of the radix sort chain, identified by its sorted leaf list.
///
/// Internal vertices are never stored; they are the proper prefixes of
/// leaves. Construction validates the antichain and sibling shape rules, so
/// every RadixTree value is a legal state.
class RadixTree {
public:
    /// The one-leaf tree {∅}.
    RadixTree();

    /// Throws Error(InvalidTree) unless `leaves` passes is_valid_shape.
    explicit RadixTree(std::vector<Word> leaves);

    /// Parses "e", "0,1", "00,01,1". Order of words is irrelevant.
    static RadixTree parse(std::string_view text);
    /// Parses {"leaves":[...]}; the empty word may be "" or "e".
    static RadixTree from_json(std::string_view json);

    [[nodiscard]] const std::vector<Word>& leaves() const noexcept { return leaves_; }
    [[nodiscard]] std::size_t leaf_count() const noexcept { return leaves_.size(); }
    [[nodiscard]] std::size_t max_depth() const noexcept;

    [[nodiscard]] bool is_leaf(const Word& w) const;
    [[nodiscard]] bool has_vertex(const Word& w) const;
    [[nodiscard]] bool is_internal(const Word& w) const { return has_vertex(w) && !is_leaf(w); }
    /// All vertices, sorted.
    [[nodiscard]] std::vector<Word> vertices() const;
    /// #{leaves v : y <= v}.
    [[nodiscard]] std::size_t count_leaves_below(const Word& y) const;
    /// Every vertex of *this is a vertex of `other`.
    [[nodiscard]] bool is_subtree_of(const RadixTree& other) const;

    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] std::string to_json() const;

    auto operator<=>(const RadixTree&) const = default;
    bool operator==(const RadixTree&) const = default;

private:
    std::vector<Word> leaves_;
};

/// A RadixTree whose leaves carry the labels 1..n.
class LabeledRadixTree {
public:
    /// `leaf_of_label[i]` is the leaf labeled i+1. Throws Error(InvalidTree)
    /// unless this is a bijection onto the leaf set of `tree`.
    LabeledRadixTree(RadixTree tree, std::vector<Word> leaf_of_label);

    [[nodiscard]] const RadixTree& tree() const noexcept { return tree_; }
    [[nodiscard]] const Word& leaf_of(std::size_t label) const { return leaf_of_label_.at(label - 1); }
    [[nodiscard]] const std::vector<Word>& labeling() const noexcept { return leaf_of_label_; }

    bool operator==(const LabeledRadixTree&) const = default;

private:
    RadixTree tree_;
    std::vector<Word> leaf_of_label_;
};

/// Antichain plus sibling rule, or exactly {∅}.
bool is_valid_shape(std::span<const Word> leaves);

/// Minimal distinguishing prefixes ζ of pairwise distinct infinite strings.
/// Throws Error(DuplicateInput) naming the first offending pair.
std::vector<Word> separating_prefixes(std::span<const InfiniteString> strings,
                                      std::size_t probe_depth = kDefaultProbeDepth);

/// The radix sort tree of the inputs.
RadixTree build_radix_tree(std::span<const InfiniteString> strings,
                           std::size_t probe_depth = kDefaultProbeDepth);

/// Result of removing one leaf under the backward dynamics.
struct PruneResult {
    RadixTree tree;
    /// Set when the removed leaf's sibling was also a leaf: the new leaf that
    /// replaced the collapsed pair.
    std::optional<Word> merged_leaf;
};

/// Backward pruning of leaf `v`. If the sibling of `v` is a leaf, both are
/// removed and the new leaf is the first vertex on the way to the root whose
/// sibling is present (or the root).
PruneResult prune_leaf(const RadixTree& t, const Word& v);

inline RadixTree kappa(const RadixTree& t, const Word& v) { return prune_leaf(t, v).tree; }

/// One forward step of the chain.
struct MoveDescriptor {
    enum class Kind { AttachToInternal, SplitLeaf };
    Kind kind{};
    /// AttachToInternal: the new leaf w.
    Word attached;
    /// SplitLeaf: the split leaf y and the new sibling leaves y' < y''.
    Word split;
    Word first;
    Word second;

    bool operator==(const MoveDescriptor&) const = default;
};

/// Identifies the forward move s -> t, or nullopt if t is not a one-step successor.
std::optional<MoveDescriptor> classify_move(const RadixTree& s, const RadixTree& t);

struct Successor {
    RadixTree tree;
    MoveDescriptor move;
};

/// All one-step successors whose new leaves have depth <= depth_cap.
/// Throws Error(CapTooSmall) if depth_cap < s.max_depth().
std::vector<Successor> forward_successors(const RadixTree& s, std::size_t depth_cap);

/// Leaves the tree at which the move is undone by pruning.
std::vector<Word> new_leaves(const MoveDescriptor& move);

}  // namespace radixlab
