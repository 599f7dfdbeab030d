#include "radixlab/oracle.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>

#include <json.hpp>

#include "radixlab/chain_laws.hpp"
#include "radixlab/error.hpp"

namespace radixlab::oracle {
namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) { return a > kSaturated - b ? kSaturated : a + b; }
std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    return a > kSaturated / b ? kSaturated : a * b;
}

// Subtrees hanging at a vertex with `leaves` leaves and `room` levels left below it.
std::uint64_t count_subtrees(std::size_t leaves, std::size_t room,
                             std::map<std::pair<std::size_t, std::size_t>, std::uint64_t>& memo) {
    if (leaves == 1) return 1;
    if (room == 0) return 0;
    auto key = std::pair{leaves, room};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::uint64_t total = sat_mul(2, count_subtrees(leaves, room - 1, memo));
    for (std::size_t left = 1; left < leaves; ++left) {
        total = sat_add(total, sat_mul(count_subtrees(left, room - 1, memo),
                                       count_subtrees(leaves - left, room - 1, memo)));
    }
    memo[key] = total;
    return total;
}

// A subtree with one leaf is that leaf; with more it descends through a unary
// vertex or splits between both children.
void generate_subtrees(const Word& at, std::size_t leaves, std::size_t room, std::vector<std::vector<Word>>& out) {
    if (leaves == 1) {
        out.push_back({at});
        return;
    }
    if (room == 0) return;
    for (int b = 0; b < 2; ++b) generate_subtrees(at.child(b), leaves, room - 1, out);
    for (std::size_t left = 1; left < leaves; ++left) {
        std::vector<std::vector<Word>> lhs;
        std::vector<std::vector<Word>> rhs;
        generate_subtrees(at.child(0), left, room - 1, lhs);
        generate_subtrees(at.child(1), leaves - left, room - 1, rhs);
        for (const auto& l : lhs) {
            for (const auto& r : rhs) {
                std::vector<Word> both = l;
                both.insert(both.end(), r.begin(), r.end());
                out.push_back(std::move(both));
            }
        }
    }
}

// Minimal distinguishing prefixes of pairwise distinct equal-length words.
std::vector<Word> minimal_prefixes(const std::vector<Word>& words) {
    if (words.size() == 1) return {Word{}};
    std::vector<Word> out;
    out.reserve(words.size());
    for (std::size_t j = 0; j < words.size(); ++j) {
        std::size_t need = 0;
        for (std::size_t k = 0; k < words.size(); ++k) {
            if (k != j) need = std::max(need, common_prefix(words[j], words[k]).size() + 1);
        }
        out.push_back(words[j].prefix(need));
    }
    return out;
}

std::string path_to_string(const Path& path, bool cemetery = false) {
    std::string out;
    for (const auto& t : path) {
        if (!out.empty()) out += " | ";
        out += "{" + t.to_string() + "}";
    }
    if (cemetery) out += " | CEMETERY";
    return out;
}

std::string frac(const Rational& q) { return to_fraction_string(q); }

class Recorder {
public:
    explicit Recorder(Report& report) : report_(report) {}
    void check(std::string identity, std::string instance, const Rational& expected, const Rational& actual) {
        report_.records.push_back(
            {std::move(identity), std::move(instance), frac(expected), frac(actual), expected == actual});
    }
    void check_throws(std::string identity, std::string instance, const std::string& what) {
        report_.records.push_back({std::move(identity), std::move(instance), "value", "error: " + what, false});
    }

private:
    Report& report_;
};

// Level-n input enumeration summaries.
struct Level {
    PathLaw paths;
    std::map<RadixTree, Rational> marginal;
    std::map<std::pair<RadixTree, RadixTree>, Rational> last_step;
};

Level summarize(PathLaw paths) {
    Level level;
    for (const auto& [path, mass] : paths) {
        level.marginal[path.back()] += mass;
        if (path.size() >= 2) level.last_step[{path[path.size() - 2], path.back()}] += mass;
    }
    level.paths = std::move(paths);
    return level;
}

Rational lookup(const std::map<RadixTree, Rational>& m, const RadixTree& t) {
    auto it = m.find(t);
    return it == m.end() ? Rational(0) : it->second;
}

bool is_fair(const SourceMeasure& nu) {
    const auto* b = std::get_if<Bernoulli>(&nu.kind());
    return b != nullptr && b->p1 == Rational(1, 2);
}

}  // namespace

std::uint64_t count_shapes(std::size_t n, std::size_t depth_cap) {
    if (n == 0) return 0;
    std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> memo;
    return count_subtrees(n, depth_cap, memo);
}

std::vector<RadixTree> enumerate_shapes(std::size_t n, std::size_t depth_cap, std::uint64_t limit) {
    if (n == 0) throw Error(ErrorKind::PreconditionViolated, "n must be at least 1");
    const std::uint64_t projected = count_shapes(n, depth_cap);
    if (projected > limit) {
        throw Error(ErrorKind::ExplosionGuard, "enumeration of " + std::to_string(projected) +
                                                   " shapes exceeds limit " + std::to_string(limit));
    }
    std::vector<std::vector<Word>> leaf_sets;
    generate_subtrees(Word{}, n, depth_cap, leaf_sets);
    std::vector<RadixTree> out;
    out.reserve(leaf_sets.size());
    for (auto& leaves : leaf_sets) out.emplace_back(std::move(leaves));
    std::sort(out.begin(), out.end());
    return out;
}

BridgeLaw exact_path_laws(const RadixTree& t) {
    if (t.leaf_count() > 6 || t.max_depth() > 5) {
        throw Error(ErrorKind::ExplosionGuard, "path enumeration limited to 6 leaves and depth 5");
    }
    const auto gamma = SourceMeasure::fair_coin();
    BridgeLaw law;
    law.total = 0;
    PathLaw masses;
    Path path{RadixTree{}};
    std::function<void(const Rational&)> extend = [&](const Rational& mass) {
        const RadixTree cur = path.back();
        if (cur.leaf_count() == t.leaf_count()) {
            if (cur == t) masses[path] += mass;
            return;
        }
        for (const auto& succ : forward_successors(cur, t.max_depth())) {
            if (!succ.tree.is_subtree_of(t)) continue;
            const Rational step = forward_prob(gamma, cur, succ.tree).value();
            if (step == 0) continue;
            path.push_back(succ.tree);
            extend(mass * step);
            path.pop_back();
        }
    };
    extend(Rational(1));
    for (const auto& [p, m] : masses) law.total += m;
    if (law.total != marginal_law(gamma, t).value()) {
        throw Error(ErrorKind::IdentityViolation, "path masses to " + t.to_string() + " sum to " + frac(law.total));
    }
    for (const auto& [p, m] : masses) law.conditional[p] = m / law.total;
    return law;
}

PathLaw killed_path_law(const SourceMeasure& nu) {
    if (!is_purely_atomic(nu)) throw Error(ErrorKind::NonAtomic, "killed path law needs a purely atomic measure");
    const auto atoms = atoms_of(nu);
    if (atoms.size() > 8) throw Error(ErrorKind::ExplosionGuard, "killed path enumeration limited to 8 atoms");
    // Any two distinct atoms already differ within this many bits.
    std::size_t length = 1;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        for (std::size_t k = i + 1; k < atoms.size(); ++k) {
            length = std::max(length, exact_comparison_bound(atoms[i].string, atoms[k].string));
        }
    }
    std::vector<Word> prefixes;
    for (const auto& a : atoms) prefixes.push_back(a.string.prefix(length));

    PathLaw law;
    std::vector<std::size_t> chosen;
    Path path;
    std::function<void(const Rational&)> draw = [&](const Rational& mass) {
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            const Rational next = mass * atoms[i].mass;
            if (std::find(chosen.begin(), chosen.end(), i) != chosen.end()) {
                law[path] += next;
                continue;
            }
            chosen.push_back(i);
            std::vector<Word> words;
            for (auto c : chosen) words.push_back(prefixes[c]);
            path.emplace_back(minimal_prefixes(words));
            draw(next);
            path.pop_back();
            chosen.pop_back();
        }
    };
    draw(Rational(1));
    return law;
}

PathLaw input_path_law(const SourceMeasure& nu, std::size_t n, std::size_t depth) {
    if (depth > 8 || n * depth > 24) throw Error(ErrorKind::ExplosionGuard, "input enumeration too large");
    std::vector<std::pair<Word, Rational>> cells;
    for (std::size_t code = 0; code < (std::size_t{1} << depth); ++code) {
        std::string bits(depth, '0');
        for (std::size_t i = 0; i < depth; ++i) bits[i] = ((code >> (depth - 1 - i)) & 1) ? '1' : '0';
        Word w{bits};
        Rational m = cylinder_mass(nu, w).value();
        if (m != 0) cells.emplace_back(std::move(w), std::move(m));
    }
    PathLaw law;
    std::vector<Word> words;
    Path path;
    std::function<void(const Rational&)> extend = [&](const Rational& mass) {
        if (words.size() == n) {
            law[path] += mass;
            return;
        }
        for (const auto& [w, m] : cells) {
            if (std::find(words.begin(), words.end(), w) != words.end()) continue;
            words.push_back(w);
            path.emplace_back(minimal_prefixes(words));
            extend(mass * m);
            path.pop_back();
            words.pop_back();
        }
    };
    extend(Rational(1));
    return law;
}

std::size_t Report::failures() const {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.pass; }));
}

std::string Report::to_json(bool only_failures) const {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : records) {
        if (only_failures && r.pass) continue;
        out.push_back({{"identity", r.identity},
                       {"instance", r.instance},
                       {"expected", r.expected},
                       {"actual", r.actual},
                       {"status", r.pass ? "match" : "mismatch"}});
    }
    return out.dump();
}

std::map<std::string, std::pair<std::size_t, std::size_t>> Report::summary() const {
    std::map<std::string, std::pair<std::size_t, std::size_t>> out;
    for (const auto& r : records) {
        auto& slot = out[r.identity];
        (r.pass ? slot.first : slot.second)++;
    }
    return out;
}

Report definitional_recheck(const SourceMeasure& nu, Scope scope) {
    const auto gamma = SourceMeasure::fair_coin();
    const bool fair = is_fair(nu);
    const std::size_t N = scope.max_leaves;
    const std::size_t D = scope.max_depth;

    Report report;
    report.measure = nu.to_json();
    Recorder rec(report);

    std::vector<Level> levels(N + 1);
    std::vector<Level> gamma_levels(N + 1);
    std::vector<std::vector<RadixTree>> shapes(N + 1);
    for (std::size_t n = 1; n <= N; ++n) {
        levels[n] = summarize(input_path_law(nu, n, D));
        gamma_levels[n] = fair ? levels[n] : summarize(input_path_law(gamma, n, D));
        shapes[n] = enumerate_shapes(n, D);
    }

    auto guarded = [&](const std::string& identity, const std::string& instance, const Rational& expected,
                       auto&& closed_form) {
        try {
            rec.check(identity, instance, expected, closed_form());
        } catch (const Error& e) {
            rec.check_throws(identity, instance, e.what());
        }
    };

    // Marginal law.
    for (std::size_t n = 1; n <= N; ++n) {
        for (const auto& t : shapes[n]) {
            guarded("margindist", "{" + t.to_string() + "}", lookup(levels[n].marginal, t),
                    [&] { return marginal_law(nu, t).value(); });
        }
    }

    // Forward, backward and cherry forms for every one-step pair.
    for (std::size_t n = 2; n <= N; ++n) {
        for (const auto& s : shapes[n - 1]) {
            const Rational ps = lookup(levels[n - 1].marginal, s);
            for (const auto& t : shapes[n]) {
                const std::string inst = "{" + s.to_string() + "} -> {" + t.to_string() + "}";
                auto joint_it = levels[n].last_step.find({s, t});
                const Rational joint = joint_it == levels[n].last_step.end() ? Rational(0) : joint_it->second;
                const auto move = classify_move(s, t);
                if (ps != 0) {
                    const std::string identity =
                        !move ? "forward-zero"
                              : (move->kind == MoveDescriptor::Kind::AttachToInternal ? "attachtox" : "attachtoy");
                    guarded(identity, inst, joint / ps, [&] { return forward_prob(nu, s, t).value(); });
                    if (fair && move && move->kind == MoveDescriptor::Kind::SplitLeaf) {
                        const std::size_t cut = move->split.size();
                        const RadixTree cherry({Word{move->first.bits().substr(cut)}, Word{move->second.bits().substr(cut)}});
                        const Rational via_cherry = pow2(-static_cast<long>(cut)) * lookup(levels[2].marginal, cherry);
                        rec.check("cherry", inst, joint / ps, via_cherry);
                    }
                }
                const Rational pt = lookup(levels[n].marginal, t);
                if (pt != 0) {
                    guarded("backward", inst, joint / pt, [&] { return backward_prob(s, t).value(); });
                }
            }
        }
    }

    // Doob-Martin and Green kernels from conditioning quotients (fair coin only).
    if (fair) {
        for (std::size_t big = 2; big <= N; ++big) {
            std::map<std::pair<RadixTree, RadixTree>, std::vector<Rational>> joints;
            for (std::size_t small = 1; small < big; ++small) {
                std::map<std::pair<RadixTree, RadixTree>, Rational> joint;
                for (const auto& [path, mass] : levels[big].paths) joint[{path[small - 1], path.back()}] += mass;
                for (const auto& s : shapes[small]) {
                    const Rational ps = lookup(levels[small].marginal, s);
                    for (const auto& t : shapes[big]) {
                        const Rational pt = lookup(levels[big].marginal, t);
                        auto it = joint.find({s, t});
                        const Rational cond = it == joint.end() ? Rational(0) : it->second / ps;
                        const std::string inst = "{" + s.to_string() + "} => {" + t.to_string() + "}";
                        guarded("kernel", inst, cond / pt, [&] { return dm_kernel(s, t); });
                        guarded("green", inst, cond, [&] { return green_kernel(s, t, D).value(); });
                    }
                }
            }
        }
    }

    // h-function as a ratio of marginals, and the h-transform identity.
    if (!fair) {
        for (std::size_t n = 1; n <= N; ++n) {
            for (const auto& t : shapes[n]) {
                const Rational h_def = lookup(levels[n].marginal, t) / lookup(gamma_levels[n].marginal, t);
                guarded("h-function", "{" + t.to_string() + "}", h_def, [&] { return h_nu(nu, t); });
            }
        }
        for (std::size_t n = 2; n <= N; ++n) {
            for (const auto& [pair, joint] : gamma_levels[n].last_step) {
                const auto& [s, t] = pair;
                const Rational gs = lookup(gamma_levels[n - 1].marginal, s);
                const Rational hs = lookup(levels[n - 1].marginal, s) / gs;
                if (hs == 0) continue;
                const Rational ht = lookup(levels[n].marginal, t) / lookup(gamma_levels[n].marginal, t);
                auto it = levels[n].last_step.find(pair);
                const Rational nu_forward =
                    (it == levels[n].last_step.end() ? Rational(0) : it->second) / lookup(levels[n - 1].marginal, s);
                const std::string inst = "{" + s.to_string() + "} -> {" + t.to_string() + "}";
                rec.check("h-transform", inst, nu_forward, (joint / gs) * ht / hs);
                guarded("h-transform-closed", inst, nu_forward, [&] { return h_transform_check(nu, s, t).value(); });
            }
        }
    }

    // Killed chain, Choquet weights and the Riesz potential for atomic measures.
    if (is_purely_atomic(nu)) {
        const PathLaw killed = killed_path_law(nu);
        std::map<RadixTree, Rational> last_before_death;
        Rational total = 0;
        for (const auto& [path, mass] : killed) {
            last_before_death[path.back()] += mass;
            total += mass;
        }
        rec.check("killed-total", "all paths", Rational(1), total);
        Rational theta_sum = 0;
        for (const auto& s : atomic_support_trees(nu)) {
            const Rational expected = lookup(last_before_death, s);
            guarded("theta", "{" + s.to_string() + "}", expected, [&] { return theta(nu, s).value(); });
            theta_sum += expected;
        }
        guarded("theta-total", "support", theta_sum, [&] { return theta_total_mass(nu).value(); });
        // A killed path is θ of its last tree times the backward chance of the earlier steps.
        for (const auto& [path, mass] : killed) {
            Rational via_theta = theta(nu, path.back()).value();
            for (std::size_t k = path.size(); k-- > 1;) via_theta *= backward_prob(path[k - 1], path[k]).value();
            rec.check("killed-path", path_to_string(path, true), mass, via_theta);
        }
        guarded("riesz", "{e}", h_nu(nu, RadixTree{}), [&] { return riesz_potential(nu, RadixTree{}); });
    }
    return report;
}

}  // namespace radixlab::oracle
