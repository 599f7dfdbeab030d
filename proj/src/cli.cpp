#include "radixlab/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "radixlab/chain_laws.hpp"
#include "radixlab/error.hpp"
#include "radixlab/oracle.hpp"
#include "radixlab/simulator.hpp"

namespace radixlab::cli {
namespace {

using nlohmann::json;

struct Options {
    std::string measure = "gamma";
    std::string tree;
    std::string target;
    std::string strings;
    std::string law;
    std::size_t n = 10;
    std::size_t replicas = 1;
    std::optional<std::uint64_t> seed;
    std::size_t depth_cap = 8;
    std::size_t split_depth = 8;
    std::size_t max_n = 64;
    std::size_t depth = 2;
    std::size_t threads = 1;
    std::string format = "csv";
    std::string out_path;
    bool verbose = false;
};

class VerificationFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::uint64_t resolve_seed(const Options& o) {
    if (o.seed) return *o.seed;
    if (const char* env = std::getenv("RADIXLAB_SEED")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw Error(ErrorKind::ParseError, std::string("RADIXLAB_SEED is not an unsigned integer: ") + env);
    }
    return 1;
}

RadixTree need_tree(const std::string& text, const char* flag) {
    if (text.empty()) throw CLI::ValidationError(std::string(flag), "is required for this command");
    const auto first = text.find_first_not_of(' ');
    if (first != std::string::npos && text[first] == '{') return RadixTree::from_json(text);
    return RadixTree::parse(text);
}

std::vector<InfiniteString> parse_strings(const std::string& text) {
    std::vector<InfiniteString> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(InfiniteString::parse(item));
    if (out.empty()) throw CLI::ValidationError("--strings", "needs at least one string");
    return out;
}

std::string csv_quote(const std::string& field) {
    std::string q = "\"";
    for (char c : field) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + '"';
}

bool json_out(const Options& o) { return o.format == "json"; }

void cmd_build(const Options& o, std::ostream& out) {
    if (o.strings.empty()) throw CLI::ValidationError("--strings", "is required for build");
    const auto strings = parse_strings(o.strings);
    const auto tree = build_radix_tree(strings);
    if (json_out(o)) {
        out << json{{"command", "build"}, {"leaves", json::parse(tree.to_json())["leaves"]}}.dump() << '\n';
    } else {
        out << tree.to_string() << '\n';
    }
}

void cmd_laws(const Options& o, std::ostream& out) {
    const auto nu = SourceMeasure::from_argument(o.measure);
    const auto s = need_tree(o.tree, "--tree");
    Rational value;
    if (o.law == "marginal") {
        value = marginal_law(nu, s).value();
    } else {
        const auto t = need_tree(o.target, "--target");
        if (o.law == "forward") {
            value = forward_prob(nu, s, t).value();
        } else if (o.law == "backward") {
            value = backward_prob(s, t).value();
        } else if (o.law == "kernel") {
            value = dm_kernel(s, t);
        } else {
            value = green_kernel(s, t, std::max({o.depth_cap, s.max_depth(), t.max_depth()})).value();
        }
    }
    if (json_out(o)) {
        json doc{{"command", "laws"}, {"law", o.law}, {"tree", s.to_string()}, {"value", to_fraction_string(value)}};
        if (!o.target.empty() && o.law != "marginal") doc["target"] = need_tree(o.target, "--target").to_string();
        out << doc.dump() << '\n';
    } else {
        out << to_fraction_string(value) << '\n';
    }
}

void cmd_harmonic(const Options& o, std::ostream& out) {
    const auto nu = SourceMeasure::from_argument(o.measure);
    const auto s = need_tree(o.tree.empty() ? std::string("e") : o.tree, "--tree");
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("h", to_fraction_string(h_nu(nu, s)));
    rows.emplace_back("deficit", to_fraction_string(harmonic_deficit(nu, s, o.split_depth)));
    rows.emplace_back("eta", to_fraction_string(riesz_eta(nu, s)));
    rows.emplace_back("theta", theta(nu, s).to_string());
    if (is_purely_atomic(nu)) {
        rows.emplace_back("theta_total", theta_total_mass(nu).to_string());
        rows.emplace_back("riesz_potential", to_fraction_string(riesz_potential(nu, s)));
    }
    if (json_out(o)) {
        json doc{{"command", "harmonic"}, {"tree", s.to_string()}, {"split_depth", o.split_depth}};
        for (const auto& [k, v] : rows) doc[k] = v;
        out << doc.dump() << '\n';
    } else {
        out << "quantity,value\n";
        for (const auto& [k, v] : rows) out << k << ',' << v << '\n';
    }
}

void emit_paths(const Options& o, const char* command, const std::vector<ChainPath>& paths, std::ostream& out) {
    if (json_out(o)) {
        json reps = json::array();
        for (std::size_t r = 0; r < paths.size(); ++r) {
            json trees = json::array();
            for (const auto& t : paths[r].trees()) trees.push_back(t.to_string());
            json rep{{"replica", r}, {"trees", trees}, {"killed", paths[r].killed()}};
            if (paths[r].has_labels()) {
                json labels = json::array();
                for (const auto& step : paths[r].labels()) {
                    json row = json::array();
                    for (const auto& w : step) row.push_back(w.to_string());
                    labels.push_back(row);
                }
                rep["labels"] = labels;
            }
            reps.push_back(rep);
        }
        out << json{{"command", command}, {"seed", resolve_seed(o)}, {"replicas", reps}}.dump() << '\n';
        return;
    }
    const bool labeled = !paths.empty() && paths.front().has_labels();
    out << "replica,step,tree" << (labeled ? ",labels" : "") << '\n';
    for (std::size_t r = 0; r < paths.size(); ++r) {
        const auto& p = paths[r];
        for (std::size_t k = 0; k < p.trees().size(); ++k) {
            out << r << ',' << (k + 1) << ",\"" << p.trees()[k].to_string() << '"';
            if (labeled) {
                std::string joined;
                for (const auto& w : p.labels()[k]) joined += (joined.empty() ? "" : ";") + w.to_string();
                out << ',' << joined;
            }
            out << '\n';
        }
        if (p.killed()) out << r << ',' << *p.kill_time() << ",CEMETERY" << (labeled ? "," : "") << '\n';
    }
}

template <class Sample>
std::vector<ChainPath> replicate(const Options& o, Sample&& sample) {
    std::vector<std::optional<ChainPath>> slots(o.replicas);
    for_each_replica(o.replicas, o.threads, [&](std::size_t r) { slots[r].emplace(sample(r)); });
    std::vector<ChainPath> paths;
    paths.reserve(slots.size());
    for (auto& s : slots) paths.push_back(std::move(*s));
    return paths;
}

void cmd_simulate(const Options& o, std::ostream& out) {
    const auto nu = SourceMeasure::from_argument(o.measure);
    const auto seed = resolve_seed(o);
    auto paths = replicate(o, [&](std::size_t r) { return sample_labeled_chain(nu, o.n, seed, r).path; });
    emit_paths(o, "simulate", paths, out);
}

void cmd_bridge(const Options& o, std::ostream& out) {
    const auto t = need_tree(o.tree, "--tree");
    const auto seed = resolve_seed(o);
    auto paths = replicate(o, [&](std::size_t r) { return sample_bridge(t, seed, r); });
    emit_paths(o, "bridge", paths, out);
}

void cmd_killed(const Options& o, std::ostream& out) {
    const auto nu = SourceMeasure::from_argument(o.measure);
    const auto seed = resolve_seed(o);
    auto paths = replicate(o, [&](std::size_t r) { return sample_killed_chain(nu, seed, o.max_n, r); });
    emit_paths(o, "killed", paths, out);
}

void cmd_convergence(const Options& o, std::ostream& out) {
    const auto nu = SourceMeasure::from_argument(o.measure);
    const auto s = need_tree(o.tree.empty() ? std::string("0,1") : o.tree, "--tree");
    const auto rows = kernel_convergence(nu, s, o.n, o.replicas, resolve_seed(o), o.threads);
    const std::string h = to_fraction_string(h_nu(nu, s));
    if (json_out(o)) {
        json table = json::array();
        for (const auto& r : rows) table.push_back({{"k", r.k}, {"mean", r.mean}, {"sd", r.sd}});
        out << json{{"command", "convergence"}, {"tree", s.to_string()}, {"h", h}, {"rows", table}}.dump() << '\n';
    } else {
        out << "k,mean,sd\n";
        for (const auto& r : rows) out << r.k << ',' << fmt_double(r.mean) << ',' << fmt_double(r.sd) << '\n';
    }
}

void cmd_recover(const Options& o, std::ostream& out) {
    const auto nu = SourceMeasure::from_argument(o.measure);
    const auto seed = resolve_seed(o);
    std::vector<std::optional<RadixTree>> slots(o.replicas);
    for_each_replica(o.replicas, o.threads, [&](std::size_t r) { slots[r].emplace(sample_tree(nu, o.n, seed, r)); });
    std::vector<RadixTree> trees;
    for (auto& s : slots) trees.push_back(std::move(*s));
    std::vector<Word> words{Word{}};
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (words[i].size() < o.depth) {
            words.push_back(words[i].child(0));
            words.push_back(words[i].child(1));
        }
    }
    json table = json::array();
    if (!json_out(o)) out << "word,estimate,exact\n";
    for (const auto& y : words) {
        const double est = estimate_cylinder(trees, y);
        const auto exact = cylinder_mass(nu, y);
        if (json_out(o)) {
            table.push_back({{"word", y.to_string()}, {"estimate", est}, {"exact", exact.to_string()}});
        } else {
            out << y.to_string() << ',' << fmt_double(est) << ',' << exact.to_string() << '\n';
        }
    }
    if (json_out(o)) out << json{{"command", "recover"}, {"n", o.n}, {"rows", table}}.dump() << '\n';
}

void cmd_enumerate(const Options& o, std::ostream& out) {
    const auto trees = oracle::enumerate_shapes(o.n, o.depth_cap);
    if (json_out(o)) {
        json list = json::array();
        for (const auto& t : trees) list.push_back(t.to_string());
        out << json{{"command", "enumerate"}, {"n", o.n}, {"depth_cap", o.depth_cap}, {"trees", list}}.dump() << '\n';
    } else {
        out << "tree\n";
        for (const auto& t : trees) out << '"' << t.to_string() << "\"\n";
    }
}

void cmd_verify(const Options& o, bool measure_given, std::ostream& out) {
    std::vector<std::pair<std::string, SourceMeasure>> measures;
    if (measure_given) {
        measures.emplace_back(o.measure, SourceMeasure::from_argument(o.measure));
    } else {
        measures = {{"gamma", SourceMeasure::fair_coin()},
                    {"bernoulli(1/3)", SourceMeasure::bernoulli(Rational(1, 3))},
                    {"nu1", counterexample_measure(1)}};
    }
    const oracle::Scope scope{std::min<std::size_t>(o.n, 4), std::min<std::size_t>(o.depth_cap, 4)};
    bool ok = true;
    json reports = json::array();
    if (!json_out(o)) out << "measure,identity,matches,mismatches\n";
    for (const auto& [name, nu] : measures) {
        const auto report = oracle::definitional_recheck(nu, scope);
        ok = ok && report.ok();
        if (json_out(o)) {
            reports.push_back({{"name", name},
                               {"measure", json::parse(report.measure)},
                               {"records", json::parse(report.to_json(!o.verbose))},
                               {"mismatches", report.failures()}});
        } else {
            for (const auto& [identity, counts] : report.summary()) {
                out << csv_quote(name) << ',' << identity << ',' << counts.first << ',' << counts.second << '\n';
            }
        }
    }
    if (json_out(o)) out << json{{"command", "verify"}, {"ok", ok}, {"reports", reports}}.dump() << '\n';
    if (!ok) throw VerificationFailed("definitional recheck found mismatches");
}

void cmd_counterexample(const Options& o, std::ostream& out) {
    const auto seed = resolve_seed(o);
    const RadixTree root;
    const RadixTree pair = RadixTree::parse("0,1");
    json rows = json::array();
    if (!json_out(o)) out << "measure,path,exact,empirical,h_root,h_pair\n";
    for (int j = 1; j <= 4; ++j) {
        const auto nu = counterexample_measure(j);
        const auto law = oracle::killed_path_law(nu);
        std::map<oracle::Path, std::size_t> hits;
        for (std::size_t r = 0; r < o.replicas; ++r) hits[sample_killed_chain(nu, seed, 16, r).trees()]++;
        for (const auto& [path, mass] : law) {
            std::string text;
            for (const auto& t : path) text += "{" + t.to_string() + "} ";
            text += "CEMETERY";
            const double emp = o.replicas ? static_cast<double>(hits[path]) / static_cast<double>(o.replicas) : 0.0;
            const std::string name = "nu" + std::to_string(j);
            if (json_out(o)) {
                rows.push_back({{"measure", name},
                                {"path", text},
                                {"exact", to_fraction_string(mass)},
                                {"empirical", emp},
                                {"h_root", to_fraction_string(h_nu(nu, root))},
                                {"h_pair", to_fraction_string(h_nu(nu, pair))}});
            } else {
                out << name << ",\"" << text << "\"," << to_fraction_string(mass) << ',' << fmt_double(emp) << ','
                    << to_fraction_string(h_nu(nu, root)) << ',' << to_fraction_string(h_nu(nu, pair)) << '\n';
            }
        }
    }
    if (json_out(o)) out << json{{"command", "counterexample"}, {"replicas", o.replicas}, {"rows", rows}}.dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Radix sort tree chains: exact laws, simulation and verification", "radixlab"};
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--measure", o.measure, "Source measure: JSON file, inline JSON, or preset (gamma, nu1..nu4, abcd)");
    app.add_option("--tree", o.tree, "Tree as comma-separated leaves, e.g. \"00,01,1\" (\"e\" for the root)");
    app.add_option("--target", o.target, "Second tree for two-argument laws");
    app.add_option("--strings", o.strings, "Eventually periodic inputs, e.g. \"0(0),01(1),1(1)\"");
    app.add_option("--n", o.n, "Number of inputs / leaves")->check(CLI::PositiveNumber);
    app.add_option("--replicas", o.replicas, "Number of independent replicas");
    app.add_option("--seed", o.seed, "Base seed (falls back to RADIXLAB_SEED, then 1)");
    app.add_option("--depth-cap", o.depth_cap, "Maximum leaf depth for enumeration and Green kernels");
    app.add_option("--split-depth", o.split_depth, "Truncation depth for Case II splits");
    app.add_option("--max-n", o.max_n, "Maximum length of killed chains");
    app.add_option("--depth", o.depth, "Maximum cylinder depth for recover");
    app.add_option("--threads", o.threads, "Replica worker threads; output does not depend on it")
        ->check(CLI::PositiveNumber);
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", o.out_path, "Write output to this file instead of standard output");
    app.add_flag("--verbose", o.verbose, "Include passing records in verify output");

    auto* build = app.add_subcommand("build", "Radix sort tree of eventually periodic strings");
    auto* laws = app.add_subcommand("laws", "Exact marginal, forward, backward, kernel or Green values");
    laws->add_option("law", o.law, "Which law")->required()->check(
        CLI::IsMember({"marginal", "forward", "backward", "kernel", "green"}));
    auto* harmonic = app.add_subcommand("harmonic", "h, harmonic deficit, eta and theta for a measure");
    auto* simulate = app.add_subcommand("simulate", "Sample labeled forward chains");
    auto* bridge = app.add_subcommand("bridge", "Sample bridges to --tree");
    auto* killed = app.add_subcommand("killed", "Sample chains killed at the first repeated input");
    auto* convergence = app.add_subcommand("convergence", "Kernel K(s, R_k) along sampled chains");
    auto* recover = app.add_subcommand("recover", "Estimate cylinder masses from sampled trees");
    auto* enumerate = app.add_subcommand("enumerate", "List all trees with --n leaves within --depth-cap");
    auto* verify = app.add_subcommand("verify", "Brute-force recheck of every closed form");
    auto* counter = app.add_subcommand("counterexample", "Four atomic measures with identical killed chains");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }

    std::ofstream file;
    if (!o.out_path.empty()) {
        file.open(o.out_path);
        if (!file) {
            err << "error: cannot open " << o.out_path << " for writing\n";
            return kUsageError;
        }
    }
    std::ostream& sink = o.out_path.empty() ? out : file;
    std::ostringstream buffer;

    try {
        if (*build) cmd_build(o, buffer);
        else if (*laws) cmd_laws(o, buffer);
        else if (*harmonic) cmd_harmonic(o, buffer);
        else if (*simulate) cmd_simulate(o, buffer);
        else if (*bridge) cmd_bridge(o, buffer);
        else if (*killed) cmd_killed(o, buffer);
        else if (*convergence) cmd_convergence(o, buffer);
        else if (*recover) cmd_recover(o, buffer);
        else if (*enumerate) cmd_enumerate(o, buffer);
        else if (*verify) cmd_verify(o, app.get_option("--measure")->count() > 0, buffer);
        else if (*counter) cmd_counterexample(o, buffer);
    } catch (const VerificationFailed& e) {
        sink << buffer.str();
        err << "verification failure: " << e.what() << '\n';
        return kVerificationFailure;
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::IdentityViolation ? kVerificationFailure : kDomainError;
    }
    sink << buffer.str();
    return kSuccess;
}

}  // namespace radixlab::cli
