#include "h4free/cli.hpp"

#include "h4free/acceptance.hpp"
#include "h4free/amalgam.hpp"
#include "h4free/h3t_io.hpp"
#include "h4free/indep.hpp"
#include "h4free/solver.hpp"
#include "h4free/witness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>

namespace h4free {

namespace {

// Bad input or arguments found after parsing; exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<PointId> parse_set(const std::string& text) {
    std::vector<PointId> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            const unsigned long v = std::stoul(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(static_cast<PointId>(v));
        } catch (const std::exception&) {
            throw InputError("not a point list: '" + text + "'");
        }
    }
    return out;
}

std::string set_str(const std::vector<PointId>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "}";
}

Hypertournament load_total(const std::string& path) {
    try {
        return read_total_h3t_file(path);
    } catch (const ParseError& e) {
        throw InputError(path + ": " + e.what());
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
}

H3tDocument load_doc(const std::string& path) {
    try {
        return read_h3t_file(path);
    } catch (const ParseError& e) {
        throw InputError(path + ": " + e.what());
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }
}

void check_points(const Hypertournament& h, const std::vector<PointId>& v, const char* flag) {
    for (PointId p : v)
        if (p >= h.size()) throw InputError(std::string(flag) + ": point " + std::to_string(p) + " out of range");
}

void save(const std::string& path, const Hypertournament& h, const std::string& comment, std::ostream& out) {
    if (path.empty()) return;
    write_h3t_file(path, h, comment);
    out << "wrote " << path << "\n";
}

int report(const WitnessReport& r, const std::string& out_path, std::ostream& out) {
    out << r.text();
    if (!out_path.empty()) {
        std::ofstream f(out_path);
        if (!f) throw InputError("cannot write " + out_path);
        f << r.text();
    }
    return r.pass ? 0 : 1;
}

int cmd_check(const std::string& in, const std::string& cls, std::ostream& out) {
    const Hypertournament h = load_total(in);
    const ClassSet allowed = ClassSet::parse(cls);
    if (const auto bad = first_violation(h, allowed)) {
        const FourClass c = classify_4set(h, *bad);
        out << to_string(c) << " at " << set_str({(*bad)[0], (*bad)[1], (*bad)[2], (*bad)[3]}) << "\n";
        return 1;
    }
    out << h.size() << " points, every 4-subset in " << allowed.name() << "\n";
    return 0;
}

int cmd_classify(const std::string& in, std::ostream& out) {
    const Hypertournament h = load_total(in);
    const ClassTally t = tally_classes(h);
    out << "C4: " << t.c4 << ", O4: " << t.o4 << ", H4: " << t.h4 << "\n";
    for (const char* name : {"c4o4h4", "c4h4", "c4", "c4o4"})
        out << name << ": " << (in_constrained_class(h, ClassSet::parse(name)) ? "yes" : "no") << "\n";
    return 0;
}

int cmd_generate(std::size_t n, const std::string& cls, std::size_t depth, std::uint64_t seed, const std::string& path,
                 std::ostream& out) {
    const ClassSet allowed = ClassSet::parse(cls);
    if (!is_amalgamation_class(allowed)) throw InputError("class " + cls + " has no amalgamation");
    const GenericResult g = build_generic(n, allowed, depth, seed);
    out << g.report << "\n";
    save(path, g.structure, g.report, out);
    return g.complete() ? 0 : 1;
}

int cmd_amalgamate(const std::string& pa, const std::string& pb1, const std::string& pb2, const std::string& path,
                   std::ostream& out) {
    const Hypertournament a = load_total(pa), b1 = load_total(pb1), b2 = load_total(pb2);
    const Embedding f1 = Embedding::identity(a.size()), f2 = Embedding::identity(a.size());
    if (b1.size() < a.size() || !is_embedding(a, b1, f1)) throw InputError(pb1 + " does not extend " + pa + " on its ids");
    if (b2.size() < a.size() || !is_embedding(a, b2, f2)) throw InputError(pb2 + " does not extend " + pa + " on its ids");
    const Amalgam m = strong_amalgamate(a, b1, b2, f1, f2);
    out << "amalgam: " << m.c.size() << " points (A " << a.size() << ", B1 new " << b1.size() - a.size() << ", B2 new "
        << b2.size() - a.size() << "), H4-free: " << (is_h4_free(m.c) ? "yes" : "no") << "\n";
    std::vector<PointId> g2(m.g2.map.begin() + static_cast<std::ptrdiff_t>(a.size()), m.g2.map.end());
    out << "B2 new points at " << set_str(g2) << "\n";
    save(path, m.c, "strong amalgam", out);
    return 0;
}

int cmd_solve(const std::string& in, std::optional<std::uint64_t> seed, std::uint64_t max_nodes, const std::string& cls,
              const std::string& expect, const std::string& path, std::ostream& out) {
    const H3tDocument doc = load_doc(in);
    SolveOptions opts;
    opts.value_seed = seed;
    opts.max_nodes = max_nodes;
    opts.allowed = ClassSet::parse(cls);
    SolveResult r;
    try {
        r = solve(doc.structure, doc.constraints, opts);
    } catch (const std::domain_error& e) {
        throw InputError(e.what());
    }
    if (r.sat()) {
        out << "SAT\n";
        for (const auto& [name, id] : r.solution->assignment) out << "# " << name << " = " << id << "\n";
        if (path.empty()) out << format_h3t(r.solution->model);
        else save(path, r.solution->model, "model", out);
    } else {
        out << "UNSAT";
        if (r.conflict) out << ": " << *r.conflict;
        out << "\n";
    }
    return r.sat() == (expect == "sat") ? 0 : 1;
}

struct WitnessArgs {
    std::string kind;
    std::size_t size = 0;
    std::size_t rows = 3, cols = 4;
    std::uint64_t seed = 1;
    std::size_t trials = 100;
    std::string out, save;
};

int cmd_witness(const WitnessArgs& w, std::ostream& out) {
    std::mt19937_64 rng(w.seed);
    if (w.kind == "ip2") {
        const auto [ip, r] = ip2_build(w.size ? w.size : 2);
        save(w.save, ip.h, "ip2", out);
        return report(r, w.out, out);
    }
    if (w.kind == "sop3") {
        const auto [s, chain] = sop3_build(w.size ? w.size : 6);
        save(w.save, s.h, "sop3 chain", out);
        return report(combine("sop3", {chain, sop3_cycle_check()}), w.out, out);
    }
    if (w.kind == "tp2") {
        const auto [t, r] = tp2_build(w.rows, w.cols);
        save(w.save, t.h, "tp2 array", out);
        return report(r, w.out, out);
    }
    if (w.kind == "nsop4") {
        const std::size_t n = w.size ? w.size : 2;
        std::vector<WitnessReport> parts;
        for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << (n * n)) && pat < 4096; ++pat) {
            std::vector<bool> eps(n * n);
            for (std::size_t t = 0; t < n * n; ++t) eps[t] = (pat >> t) & 1u;
            auto [in, made] = nsop4_make_input(1, n, eps, w.seed);
            if (!in) {
                parts.push_back(made);
                continue;
            }
            WitnessReport r = nsop4_build_cycle(*in);
            r.claim = "nsop4.eps" + std::to_string(pat);
            parts.push_back(std::move(r));
        }
        const WitnessReport all = combine("nsop4", parts);
        if (all.artifact) save(w.save, *all.artifact, "nsop4 failure", out);
        return report(all, w.out, out);
    }
    if (w.kind == "claim1") {
        std::vector<WitnessReport> parts;
        std::size_t done = 0;
        while (done < w.trials) {
            const std::size_t n = 4 + rng() % 5;
            SolveOptions opts;
            opts.value_seed = rng();
            const Hypertournament h = solve(PartialHypertournament(n), ConstraintSet{}, opts).solution->model;
            std::vector<PointId> perm(n);
            std::iota(perm.begin(), perm.end(), PointId{0});
            std::shuffle(perm.begin(), perm.end(), rng);
            const std::size_t cs = rng() % std::min<std::size_t>(5, n - 2);
            std::vector<PointId> c(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(cs));
            std::sort(c.begin(), c.end());
            const PointId a = perm[cs], b = perm[cs + 1];
            const PointId bp = cs + 2 < n && rng() % 4 ? perm[cs + 2] : a;
            if (qf_type(h, {b}, c) != qf_type(h, {bp}, c)) continue;
            ++done;
            WitnessReport r = claim1_witness(h, c, a, b, bp).report;
            r.claim = "claim1.trial" + std::to_string(done);
            if (!r.pass) parts.push_back(std::move(r));
        }
        WitnessReport trials;
        trials.claim = "claim1.random";
        trials.pass = parts.empty();
        trials.details.push_back(std::to_string(w.trials) + " random instances, " + std::to_string(parts.size()) + " failed");
        parts.insert(parts.begin(), trials);
        parts.push_back(claim1_pair_obstruction());
        return report(combine("claim1", parts), w.out, out);
    }
    if (w.kind == "empty") return report(empty_base_obstruction(), w.out, out);
    throw InputError("unknown witness " + w.kind);
}

struct IndepArgs {
    std::string kind, in, a, b, c;
    std::size_t len = 3, trials = 50;
    std::uint64_t seed = 1;
    std::string save;
};

int cmd_indep(const IndepArgs& q, std::ostream& out) {
    if (q.kind == "asym") {
        const auto [h, r] = asymmetry_witness();
        save(q.save, h, "asymmetry witness", out);
        return report(r, "", out);
    }
    if (q.kind == "conant") return report(conant_triviality_report({}, q.trials, q.seed), "", out);
    if (q.in.empty()) throw InputError("indep " + q.kind + " needs --in");
    const Hypertournament h = load_total(q.in);
    const auto a = parse_set(q.a), b = parse_set(q.b), c = parse_set(q.c);
    check_points(h, a, "--A");
    check_points(h, b, "--B");
    check_points(h, c, "--C");
    if (q.kind == "ht") {
        const bool fwd = ind_ht(h, a, b, c), back = ind_ht(h, b, a, c);
        out << set_str(a) << " ind_ht over " << set_str(c) << " " << set_str(b) << ": " << (fwd ? "yes" : "no") << "\n";
        out << set_str(b) << " ind_ht over " << set_str(c) << " " << set_str(a) << ": " << (back ? "yes" : "no") << "\n";
        return fwd ? 0 : 1;
    }
    try {
        if (q.kind == "morley") {
            const MorleyResult m = build_ht_morley({h, c, b, q.len, {}});
            for (std::size_t i = 0; i < m.seq.size(); ++i) out << "b" << i << " = " << set_str(m.seq[i]) << "\n";
            save(q.save, m.h, "ht-Morley sequence", out);
            return report(m.report, "", out);
        }
        if (q.kind == "kim") {
            std::vector<PointId> base = c;
            base.insert(base.end(), b.begin(), b.end());
            std::sort(base.begin(), base.end());
            base.erase(std::unique(base.begin(), base.end()), base.end());
            return report(kim_survival(h, c, b, qf_type(h, a, base), q.len), "", out);
        }
    } catch (const std::domain_error& e) {
        throw InputError(e.what());
    }
    throw InputError("unknown query " + q.kind);
}

int cmd_accept(const std::string& only, std::uint64_t seed, std::ostream& out) {
    std::vector<std::string> ids;
    std::stringstream ss(only);
    for (std::string id; std::getline(ss, id, ',');)
        if (!id.empty()) ids.push_back(id);
    bool all = true;
    try {
        run_acceptance(ids, seed, [&](const CriterionResult& r) {
            out << r.line() << "\n" << std::flush;
            all = all && r.pass;
        });
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    return all ? 0 : 1;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite H4-free 3-hypertournaments: checking, generation, solving and proof witnesses", "h4free"};
    app.require_subcommand(1, 1);

    std::function<int()> action;

    std::string in, cls = "c4o4";
    auto* check = app.add_subcommand("check", "Check that every 4-subset of a structure lies in a class set");
    check->add_option("--in", in, "Structure file (.h3t)")->required();
    check->add_option("--class", cls, "Class set, e.g. c4o4");
    check->callback([&] { action = [&] { return cmd_check(in, cls, out); }; });

    auto* classify = app.add_subcommand("classify", "Tally the classes of all 4-subsets");
    classify->add_option("--in", in, "Structure file (.h3t)")->required();
    classify->callback([&] { action = [&] { return cmd_classify(in, out); }; });

    std::size_t n = 12, depth = 2;
    std::uint64_t seed = 1;
    std::string path;
    auto* generate = app.add_subcommand("generate", "Grow a structure with the extension property");
    generate->add_option("--n", n, "Number of points")->check(CLI::Range(1, 4096));
    generate->add_option("--class", cls, "c4o4h4 | c4h4 | c4 | c4o4")
        ->check(CLI::IsMember({"c4o4h4", "c4h4", "c4", "c4o4"}));
    generate->add_option("--depth", depth, "Subset size for the extension property")->check(CLI::Range(1, 6));
    generate->add_option("--seed", seed, "Random seed");
    generate->add_option("--out", path, "Output file (.h3t)");
    generate->callback([&] { action = [&] { return cmd_generate(n, cls, depth, seed, path, out); }; });

    std::string pa, pb1, pb2;
    auto* amalgamate = app.add_subcommand("amalgamate", "Strong amalgam of B1 and B2 over A (A is ids 0..|A|-1 of both)");
    amalgamate->add_option("--a", pa, "Base structure")->required();
    amalgamate->add_option("--b1", pb1, "First extension")->required();
    amalgamate->add_option("--b2", pb2, "Second extension")->required();
    amalgamate->add_option("--out", path, "Output file (.h3t)");
    amalgamate->callback([&] { action = [&] { return cmd_amalgamate(pa, pb1, pb2, path, out); }; });

    std::optional<std::uint64_t> solve_seed;
    std::string expect = "sat";
    std::uint64_t max_nodes = 5'000'000;
    auto* solve_cmd = app.add_subcommand("solve", "Complete a partial structure subject to literals");
    solve_cmd->add_option("--in", in, "Constraint file (.h3t with var/lit lines)")->required();
    solve_cmd->add_option("--seed", solve_seed, "Seeded value order");
    solve_cmd->add_option("--expect", expect, "Outcome that counts as success")->check(CLI::IsMember({"sat", "unsat"}));
    solve_cmd->add_option("--class", cls, "Class set the model must lie in");
    solve_cmd->add_option("--max-nodes", max_nodes, "Decision budget, 0 for none");
    solve_cmd->add_option("--out", path, "Write the model here instead of stdout");
    solve_cmd->callback([&] { action = [&] { return cmd_solve(in, solve_seed, max_nodes, cls, expect, path, out); }; });

    WitnessArgs wa;
    auto* witness = app.add_subcommand("witness", "Build and verify a proof construction");
    witness->add_option("kind", wa.kind, "ip2 | sop3 | tp2 | nsop4 | claim1 | empty")
        ->required()
        ->check(CLI::IsMember({"ip2", "sop3", "tp2", "nsop4", "claim1", "empty"}));
    witness->add_option("--size", wa.size, "ip2 grid, sop3 chain length or nsop4 tuple length");
    witness->add_option("--rows", wa.rows, "tp2 rows");
    witness->add_option("--cols", wa.cols, "tp2 columns");
    witness->add_option("--seed", wa.seed, "Random seed");
    witness->add_option("--trials", wa.trials, "claim1 random instances");
    witness->add_option("--out", wa.out, "Write the report here as well");
    witness->add_option("--save", wa.save, "Save the constructed structure (.h3t)");
    witness->callback([&] { action = [&] { return cmd_witness(wa, out); }; });

    IndepArgs ia;
    auto* indep = app.add_subcommand("indep", "Independence queries");
    indep->add_option("kind", ia.kind, "ht | asym | morley | kim | conant")
        ->required()
        ->check(CLI::IsMember({"ht", "asym", "morley", "kim", "conant"}));
    indep->add_option("--in", ia.in, "Structure file (.h3t)");
    indep->add_option("--A", ia.a, "Point list, e.g. 0,1");
    indep->add_option("--B", ia.b, "Point list (the tuple for morley and kim)");
    indep->add_option("--C", ia.c, "Point list (the base for morley and kim)");
    indep->add_option("--len", ia.len, "Sequence length")->check(CLI::Range(1, 64));
    indep->add_option("--trials", ia.trials, "conant sweep size");
    indep->add_option("--seed", ia.seed, "Random seed");
    indep->add_option("--save", ia.save, "Save the constructed structure (.h3t)");
    indep->callback([&] { action = [&] { return cmd_indep(ia, out); }; });

    std::string only;
    std::uint64_t accept_seed = 20240601;
    auto* accept = app.add_subcommand("accept", "Run the acceptance suite");
    accept->add_option("--only", only, "Comma-separated criteria, e.g. A5,A6");
    accept->add_option("--seed", accept_seed, "Random seed");
    accept->callback([&] { action = [&] { return cmd_accept(only, accept_seed, out); }; });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        return action();
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetExceeded& e) {
        err << "refused: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace h4free
