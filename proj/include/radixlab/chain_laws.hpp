#pragma once

#include <cstddef>
#include <vector>

#include "radixlab/radix_tree.hpp"
#include "radixlab/rational.hpp"
#include "radixlab/source_measure.hpp"

namespace radixlab {

/// P{ν R_n = t} = n! ∏ ν(τ(y)) over the leaves of t.
Prob marginal_law(const SourceMeasure& nu, const RadixTree& t);

/// One-step forward transition probability P{ν R_{n+1} = t | ν R_n = s};
/// zero when t is not a successor of s.
Prob forward_prob(const SourceMeasure& nu, const RadixTree& s, const RadixTree& t);

/// P{R_n = s | R_{n+1} = t}; the same for every source measure.
Prob backward_prob(const RadixTree& s, const RadixTree& t);

/// Doob-Martin kernel K(s, t). Zero unless every leaf of s has a leaf of t below it.
Rational dm_kernel(const RadixTree& s, const RadixTree& t);

/// ∏ 2^{|a|} ν(τ(a)) over the leaves of s.
Rational h_nu(const SourceMeasure& nu, const RadixTree& s);

/// h(s)^{-1} p_γ(s, t) h(t). For diffuse ν this must equal forward_prob(ν, s, t)
/// and Error(IdentityViolation) is thrown otherwise; for ν with atoms it is the
/// transition of the killed chain. Error(ZeroMassPrefix) if h(s) = 0.
Prob h_transform_check(const SourceMeasure& nu, const RadixTree& s, const RadixTree& t);

/// Green kernel P{R_k = t | R_m = s} by dynamic programming over intermediate
/// trees, cross-checked against the kernel closed form. Throws
/// Error(CapTooSmall) if a leaf of s or t is deeper than depth_cap.
Prob green_kernel(const RadixTree& s, const RadixTree& t, std::size_t depth_cap);

/// Density of the Riesz decomposition of h_nu: h(s) Σ_y ν(τ(y)) collision(y).
Rational riesz_eta(const SourceMeasure& nu, const RadixTree& s);

/// Choquet weight of the tree s: M(s)! ∏ ν(τ(a)) Σ_y ν(τ(y)) collision(y).
Prob theta(const SourceMeasure& nu, const RadixTree& s);

/// The finitely many trees a purely atomic ν can produce: one per distinct
/// radix tree of a nonempty set of atoms. Error(NonAtomic) otherwise.
std::vector<RadixTree> atomic_support_trees(const SourceMeasure& nu);

/// Σ θ(s) over all trees; must be 1 for purely atomic ν. Error(NonAtomic) otherwise.
Prob theta_total_mass(const SourceMeasure& nu);

/// Σ_s G(r, s) η(s) for purely atomic ν; the potential part of h_nu at r.
Rational riesz_potential(const SourceMeasure& nu, const RadixTree& r);

/// Truncated forward step: Case I moves plus Case II splits at most `split_depth`
/// levels below the split leaf. Enumerates about 2^split_depth splits per leaf.
struct TruncatedRow {
    /// Σ forward_prob(ν, s, t) over the retained successors.
    Rational mass;
    /// Σ forward_prob(γ, s, t) h(t) over the retained successors.
    Rational h_weighted;
    /// Exact mass of the dropped Case II moves, Σ_y agreement_tail(ν, y, P).
    /// mass + residual = 1.
    Rational residual;
};

TruncatedRow truncated_row(const SourceMeasure& nu, const RadixTree& s, std::size_t split_depth);

/// h(s) − Σ_t p_γ(s,t) h(t) over Case II splits of depth <= split_depth.
/// Equals h(s) Σ_y agreement_tail(ν, y, split_depth) exactly.
Rational harmonic_deficit(const SourceMeasure& nu, const RadixTree& s, std::size_t split_depth);

}  // namespace radixlab
