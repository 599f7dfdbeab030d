#include "radixlab/chain_laws.hpp"

#include <map>
#include <set>

#include "radixlab/error.hpp"

namespace radixlab {
namespace {

bool is_fair_coin(const SourceMeasure& nu) {
    const auto* b = std::get_if<Bernoulli>(&nu.kind());
    return b != nullptr && b->p1 == Rational(1, 2);
}

Rational factorial(std::size_t n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
}

Rational mass(const SourceMeasure& nu, const Word& y) { return cylinder_mass(nu, y).value(); }

// Σ_y ν(τ(y)) collision(y), the common factor of η and θ.
Rational collision_sum(const SourceMeasure& nu, const RadixTree& s) {
    Rational sum = 0;
    for (const auto& y : s.leaves()) {
        const Rational m = mass(nu, y);
        if (m != 0) sum += m * collision_mass(nu, y).value();
    }
    return sum;
}

// Σ over leaves y of s and every split of y at relative depth <= split_depth.
template <class Visit>
void for_each_truncated_split(const RadixTree& s, std::size_t split_depth, Visit&& visit) {
    for (const auto& y : s.leaves()) {
        for (std::size_t p = 1; p <= split_depth; ++p) {
            for (std::size_t code = 0; code < (std::size_t{1} << (p - 1)); ++code) {
                Word stem = y;
                for (std::size_t i = p - 1; i-- > 0;) stem = stem.child(static_cast<int>((code >> i) & 1));
                std::vector<Word> leaves;
                leaves.reserve(s.leaf_count() + 1);
                for (const auto& w : s.leaves()) {
                    if (w != y) leaves.push_back(w);
                }
                leaves.push_back(stem.child(0));
                leaves.push_back(stem.child(1));
                visit(RadixTree{std::move(leaves)});
            }
        }
    }
}

}  // namespace

Prob marginal_law(const SourceMeasure& nu, const RadixTree& t) {
    Rational p = factorial(t.leaf_count());
    for (const auto& y : t.leaves()) {
        p *= mass(nu, y);
        if (p == 0) break;
    }
    return Prob{p};
}

Prob forward_prob(const SourceMeasure& nu, const RadixTree& s, const RadixTree& t) {
    const auto move = classify_move(s, t);
    if (!move) return Prob{};
    if (move->kind == MoveDescriptor::Kind::AttachToInternal) return cylinder_mass(nu, move->attached);

    const Rational parent = mass(nu, move->split);
    const Rational a = mass(nu, move->first);
    const Rational b = mass(nu, move->second);
    if (parent == 0) {
        if (a != 0 && b != 0) {
            throw Error(ErrorKind::ZeroMassPrefix,
                        "leaf " + move->split.to_string() + " has zero mass but its extensions do not");
        }
        return Prob{};
    }
    Rational p = 2 * a * b / parent;
    if (is_fair_coin(nu)) {
        // Cherry form: 2^{-|y|} P{R_2 = d}, d the split pattern below y.
        const std::size_t cut = move->split.size();
        const RadixTree cherry({Word{move->first.bits().substr(cut)}, Word{move->second.bits().substr(cut)}});
        const Rational alt = pow2(-static_cast<long>(cut)) * marginal_law(nu, cherry).value();
        if (alt != p) {
            throw Error(ErrorKind::IdentityViolation, "cherry form disagrees for " + s.to_string() + " -> " + t.to_string());
        }
    }
    return Prob{p};
}

Prob backward_prob(const RadixTree& s, const RadixTree& t) {
    if (t.leaf_count() != s.leaf_count() + 1) return Prob{};
    std::size_t hits = 0;
    for (const auto& v : t.leaves()) {
        if (kappa(t, v) == s) ++hits;
    }
    return Prob{Rational(static_cast<long>(hits), static_cast<long>(t.leaf_count()))};
}

Rational dm_kernel(const RadixTree& s, const RadixTree& t) {
    const std::size_t m = s.leaf_count();
    const std::size_t total = t.leaf_count();
    if (total < m) return 0;
    Rational k = 1;
    for (const auto& y : s.leaves()) {
        const std::size_t below = t.count_leaves_below(y);
        if (below == 0) return 0;
        k *= pow2(static_cast<long>(y.size())) * Rational(static_cast<long>(below));
    }
    for (std::size_t i = 0; i < m; ++i) k /= Rational(static_cast<long>(total - i));
    return k;
}

Rational h_nu(const SourceMeasure& nu, const RadixTree& s) {
    Rational h = 1;
    for (const auto& a : s.leaves()) {
        h *= pow2(static_cast<long>(a.size())) * mass(nu, a);
        if (h == 0) break;
    }
    return h;
}

Prob h_transform_check(const SourceMeasure& nu, const RadixTree& s, const RadixTree& t) {
    const Rational hs = h_nu(nu, s);
    if (hs == 0) throw Error(ErrorKind::ZeroMassPrefix, "h vanishes at " + s.to_string());
    const Rational value = forward_prob(SourceMeasure::fair_coin(), s, t).value() * h_nu(nu, t) / hs;
    if (is_diffuse(nu) && value != forward_prob(nu, s, t).value()) {
        throw Error(ErrorKind::IdentityViolation, "h-transform disagrees with the direct law for " + s.to_string() +
                                                      " -> " + t.to_string());
    }
    return Prob{value};
}

Prob green_kernel(const RadixTree& s, const RadixTree& t, std::size_t depth_cap) {
    if (s.max_depth() > depth_cap || t.max_depth() > depth_cap) {
        throw Error(ErrorKind::CapTooSmall, "depth cap " + std::to_string(depth_cap) + " below tree depth");
    }
    if (t.leaf_count() < s.leaf_count()) return Prob{};
    const auto gamma = SourceMeasure::fair_coin();
    std::map<RadixTree, Rational> layer{{s, Rational(1)}};
    if (!s.is_subtree_of(t)) layer.clear();
    for (std::size_t n = s.leaf_count(); n < t.leaf_count() && !layer.empty(); ++n) {
        std::map<RadixTree, Rational> next;
        for (const auto& [tree, weight] : layer) {
            for (const auto& succ : forward_successors(tree, t.max_depth())) {
                if (!succ.tree.is_subtree_of(t)) continue;
                next[succ.tree] += weight * forward_prob(gamma, tree, succ.tree).value();
            }
        }
        layer = std::move(next);
    }
    const auto it = layer.find(t);
    const Rational dp = it == layer.end() ? Rational(0) : it->second;
    const Rational closed = marginal_law(gamma, t).value() * dm_kernel(s, t);
    if (dp != closed) {
        throw Error(ErrorKind::IdentityViolation, "Green kernel DP " + to_fraction_string(dp) +
                                                      " disagrees with kernel form " + to_fraction_string(closed));
    }
    return Prob{dp};
}

Rational riesz_eta(const SourceMeasure& nu, const RadixTree& s) {
    const Rational h = h_nu(nu, s);
    if (h == 0) return 0;
    return h * collision_sum(nu, s);
}

Prob theta(const SourceMeasure& nu, const RadixTree& s) {
    Rational value = factorial(s.leaf_count());
    for (const auto& a : s.leaves()) value *= mass(nu, a);
    if (value != 0) value *= collision_sum(nu, s);
    const Rational via_green = marginal_law(SourceMeasure::fair_coin(), s).value() * riesz_eta(nu, s);
    if (value != via_green) {
        throw Error(ErrorKind::IdentityViolation, "theta disagrees with G(root, s) eta(s) at " + s.to_string());
    }
    return Prob{value};
}

std::vector<RadixTree> atomic_support_trees(const SourceMeasure& nu) {
    if (!is_purely_atomic(nu)) throw Error(ErrorKind::NonAtomic, "measure has a diffuse component");
    const auto atoms = atoms_of(nu);
    if (atoms.size() > 20) throw Error(ErrorKind::ExplosionGuard, "more than 20 atoms");
    std::set<RadixTree> trees;
    for (std::size_t subset = 1; subset < (std::size_t{1} << atoms.size()); ++subset) {
        std::vector<InfiniteString> chosen;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if ((subset >> i) & 1) chosen.push_back(atoms[i].string);
        }
        trees.insert(build_radix_tree(chosen));
    }
    return {trees.begin(), trees.end()};
}

Prob theta_total_mass(const SourceMeasure& nu) {
    Rational total = 0;
    for (const auto& s : atomic_support_trees(nu)) total += theta(nu, s).value();
    return Prob{total};
}

Rational riesz_potential(const SourceMeasure& nu, const RadixTree& r) {
    Rational total = 0;
    for (const auto& s : atomic_support_trees(nu)) {
        if (s.leaf_count() < r.leaf_count()) continue;
        const Rational eta = riesz_eta(nu, s);
        if (eta == 0) continue;
        total += green_kernel(r, s, std::max(r.max_depth(), s.max_depth())).value() * eta;
    }
    return total;
}

TruncatedRow truncated_row(const SourceMeasure& nu, const RadixTree& s, std::size_t split_depth) {
    const auto gamma = SourceMeasure::fair_coin();
    TruncatedRow row{Rational(0), Rational(0), Rational(0)};
    auto add = [&](const RadixTree& t) {
        row.mass += forward_prob(nu, s, t).value();
        row.h_weighted += forward_prob(gamma, s, t).value() * h_nu(nu, t);
    };
    for (const auto& succ : forward_successors(s, s.max_depth())) {
        if (succ.move.kind == MoveDescriptor::Kind::AttachToInternal) add(succ.tree);
    }
    for_each_truncated_split(s, split_depth, add);
    for (const auto& y : s.leaves()) row.residual += agreement_tail(nu, y, split_depth);
    return row;
}

Rational harmonic_deficit(const SourceMeasure& nu, const RadixTree& s, std::size_t split_depth) {
    return h_nu(nu, s) - truncated_row(nu, s, split_depth).h_weighted;
}

}  // namespace radixlab
