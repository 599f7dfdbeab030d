#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "radixlab/radix_tree.hpp"
#include "radixlab/source_measure.hpp"

namespace radixlab {

/// A realized path R_1, ..., R_n, possibly ending in the cemetery.
///
/// Construction checks that R_1 = {∅} and that consecutive trees differ by a
/// legal forward move; violations throw Error(IdentityViolation).
class ChainPath {
public:
    /// `labels`, when nonempty, holds one labeling per tree: labels[k][i] is
    /// the leaf of trees[k] carrying label i+1.
    explicit ChainPath(std::vector<RadixTree> trees, bool killed = false,
                       std::vector<std::vector<Word>> labels = {});

    [[nodiscard]] const std::vector<RadixTree>& trees() const noexcept { return trees_; }
    [[nodiscard]] const std::vector<std::vector<Word>>& labels() const noexcept { return labels_; }
    [[nodiscard]] bool has_labels() const noexcept { return !labels_.empty(); }
    [[nodiscard]] bool killed() const noexcept { return killed_; }
    /// Time index of the cemetery state, i.e. trees().size() + 1; nullopt if alive.
    [[nodiscard]] std::optional<std::size_t> kill_time() const {
        return killed_ ? std::optional<std::size_t>(trees_.size() + 1) : std::nullopt;
    }

    bool operator==(const ChainPath&) const = default;

private:
    std::vector<RadixTree> trees_;
    bool killed_ = false;
    std::vector<std::vector<Word>> labels_;
};

/// ⟨i⟩_m for m = i..n: the leaf housing input i at time m.
class LabelTrace {
public:
    explicit LabelTrace(std::vector<std::vector<Word>> per_label) : per_label_(std::move(per_label)) {}

    [[nodiscard]] std::size_t size() const noexcept { return per_label_.size(); }
    /// ⟨label⟩_time, 1-based; requires label <= time <= n.
    [[nodiscard]] const Word& at(std::size_t label, std::size_t time) const {
        return per_label_.at(label - 1).at(time - label);
    }
    /// ⟨i⟩_m is a prefix of ⟨i⟩_{m+1} for every i and m.
    [[nodiscard]] bool is_monotone() const;
    /// ⟨i⟩_m ∧ ⟨j⟩_m does not depend on m >= max(i, j).
    [[nodiscard]] bool meets_are_stable() const;

private:
    std::vector<std::vector<Word>> per_label_;
};

struct LabeledChain {
    ChainPath path;
    LabelTrace trace;
};

/// Probe cap used when separating sampled strings.
inline constexpr std::size_t kSimulationProbeDepth = kDefaultProbeDepth;

/// R_1..R_n for i.i.d. inputs from a diffuse ν, drawn from stream (seed, replica).
ChainPath sample_chain(const SourceMeasure& nu, std::size_t n, std::uint64_t seed, std::uint64_t replica = 0);

/// Only R_n; same stream as sample_chain, so the result equals its last tree.
RadixTree sample_tree(const SourceMeasure& nu, std::size_t n, std::uint64_t seed, std::uint64_t replica = 0);

/// Bridge to t: uniform labeling of the leaves, then backward pruning of the
/// highest label. Returned in forward order, with labels.
ChainPath sample_bridge(const RadixTree& t, std::uint64_t seed, std::uint64_t replica = 0);

/// Forward chain whose leaf housing input i carries label i.
LabeledChain sample_labeled_chain(const SourceMeasure& nu, std::size_t n, std::uint64_t seed,
                                  std::uint64_t replica = 0);

/// Chain killed at the first repeated input; stops after max_n trees otherwise.
ChainPath sample_killed_chain(const SourceMeasure& nu, std::uint64_t seed, std::size_t max_n,
                              std::uint64_t replica = 0);

/// Average over trees of (1/n) #{leaves ζ : y <= ζ}.
double estimate_cylinder(std::span<const RadixTree> trees, const Word& y);

struct ConvergenceRow {
    std::size_t k;
    double mean;
    double sd;
};

/// Mean and standard deviation over replicas of K(s, ν R_k) for k = M(s)..n.
std::vector<ConvergenceRow> kernel_convergence(const SourceMeasure& nu, const RadixTree& s, std::size_t n,
                                               std::size_t replicas, std::uint64_t seed, std::size_t threads = 1);

/// Runs fn(replica) for replica = 0..count-1 on up to `threads` workers.
/// fn must only write to per-replica state.
template <class Fn>
void for_each_replica(std::size_t count, std::size_t threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t r = 0; r < count; ++r) fn(r);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> workers;
    const std::size_t n_workers = std::min(threads, count);
    for (std::size_t w = 0; w < n_workers; ++w) {
        workers.emplace_back([&, w] {
            for (std::size_t r = w; r < count; r += n_workers) {
                try {
                    fn(r);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace radixlab
