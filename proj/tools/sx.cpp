#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "sx/bisim.hpp"
#include "sx/coind.hpp"
#include "sx/corpus.hpp"
#include "sx/figures.hpp"
#include "sx/interpret.hpp"
#include "sx/llee.hpp"
#include "sx/solve.hpp"

using namespace sx;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

enum Exit { Positive = 0, Negative = 1, Failure = 2 };

struct Opts {
    bool one = false;
    bool json = false;
    std::string dot;
    std::string system = "Mil-";
    std::string mode = "cert";
    int depth = 12;
    std::uint64_t seed = 1;
    int size = 12;
    std::string out;
    std::vector<std::string> assume;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw UsageError(path + ": " + e.what());
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

bool is_file(const std::string& s) { return fs::is_regular_file(s); }

// an expression, or a chart JSON file
OneChart load_chart(const std::string& arg, bool one) {
    if (is_file(arg)) return chart_from_json(read_json(arg));
    Exp e = parse(arg);
    return one ? onechart_of(e) : chart_of(e);
}

System load_system(const std::string& name) {
    auto s = system_from_name(name);
    if (!s) throw UsageError("unknown system " + name);
    return *s;
}

SystemId system_with(const Opts& o) {
    SystemId s{load_system(o.system), {}};
    for (const auto& a : o.assume) s.assumptions.push_back(parse_eq(a));
    return s;
}

Mode load_mode(const std::string& name) {
    auto m = mode_from_name(name);
    if (!m) throw UsageError("unknown mode " + name);
    return *m;
}

void emit(const Opts& o, const json& j) {
    if (!o.out.empty()) write_file(o.out, j.dump(1) + "\n");
    if (o.json) std::cout << j.dump(1) << "\n";
}

void print_chart(const OneChart& c) {
    for (int v = 0; v < c.size(); ++v) {
        std::cout << (v == c.start ? "> " : "  ") << v << (c.term[v] ? " [term] " : " ") << c.vertex_label(v) << "\n";
    }
    for (const auto& t : c.trans) {
        std::cout << "    " << t.src << " -" << t.label << "-> " << t.tgt;
        if (c.marked && t.mark > 0) std::cout << " [entry " << t.mark << "]";
        std::cout << "\n";
    }
}

void show_chart(const Opts& o, const OneChart& c, const std::string& name) {
    if (!o.dot.empty()) write_file(o.dot, to_dot(c, name));
    if (o.json || !o.out.empty())
        emit(o, to_json(c));
    if (!o.json) print_chart(c);
}

int cmd_parse(const Opts& o, const std::string& text) {
    Exp e = parse(text);
    if (o.json) {
        std::cout << json{{"expr", print(e)},
                          {"size", exp_size(e)},
                          {"star_height", star_height(e)},
                          {"terminates", terminates(e)},
                          {"strongly_normed", strongly_normed(e)}}
                         .dump(1)
                  << "\n";
        return Positive;
    }
    std::cout << print(e) << "\n"
              << "size " << exp_size(e) << ", star height " << star_height(e) << ", terminates "
              << (terminates(e) ? "yes" : "no") << ", strongly normed " << (strongly_normed(e) ? "yes" : "no") << "\n";
    return Positive;
}

int cmd_chart(const Opts& o, const std::string& arg) {
    OneChart c = load_chart(arg, o.one);
    show_chart(o, c, o.one ? "onechart" : "chart");
    return Positive;
}

int cmd_bisim(const Opts& o, const std::string& a, const std::string& b) {
    OneChart c1 = load_chart(a, o.one), c2 = load_chart(b, o.one);
    auto r = one_bisimilar(c1, c2);
    if (o.json) {
        json j{{"bisimilar", r.has_value()}};
        if (r) j["relation"] = *r;
        std::cout << j.dump(1) << "\n";
    } else if (r) {
        std::cout << "bisimilar (" << r->size() << " related pairs)\n";
    } else {
        std::cout << "not bisimilar: " << distinguish(c1, c2) << "\n";
    }
    return r ? Positive : Negative;
}

int cmd_llee(const Opts& o, const std::string& arg) {
    OneChart c = load_chart(arg, o.one);
    LleeResult r = decide_llee(c);
    if (!o.json) {
        std::cout << "LEE " << (r.lee ? "yes" : "no") << "\n";
        std::cout << "LLEE " << (r.witness ? "yes" : "no") << "\n";
    }
    if (r.witness) show_chart(o, *r.witness, "witness");
    else if (o.json) std::cout << json{{"lee", r.lee}, {"llee", false}}.dump(1) << "\n";
    return r.witness ? Positive : Negative;
}

int cmd_check_witness(const Opts& o, const std::string& arg, bool lenient) {
    OneChart w = load_chart(arg, true);
    if (!w.marked) throw UsageError("chart carries no marks");
    WitnessCheck r = lenient ? check_witness_lenient(w) : check_witness(w);
    if (o.json) {
        std::cout << json{{"validLLEE", r.valid_llee}, {"guarded", r.guarded}, {"reason", r.reason}}.dump(1) << "\n";
    } else {
        std::cout << (lenient ? "valid LEE recording " : "valid LLEE witness ") << (r.valid_llee ? "yes" : "no")
                  << "\nguarded " << (r.guarded ? "yes" : "no") << "\n";
        if (!r.reason.empty()) std::cout << r.reason << "\n";
    }
    return r.valid_llee && r.guarded ? Positive : Negative;
}

EntryBodyLabeling witness_of(const std::string& arg) {
    OneChart c = load_chart(arg, true);
    if (c.marked) return c;
    LleeResult r = decide_llee(c);
    if (!r.witness) throw UsageError("chart has no LLEE-witness");
    return *r.witness;
}

int cmd_extract(const Opts& o, const std::string& arg, bool simp) {
    EntryBodyLabeling w = witness_of(arg);
    Extraction x = extract(w);
    Solution s = check_solution(x.solution, Mode::Certificate);
    if (o.json || !o.out.empty()) emit(o, solution_to_json(s));
    if (o.json) return Positive;
    for (int v = 0; v < w.size(); ++v) std::cout << v << ": " << print(s.values[v]) << "\n";
    std::cout << "principal " << print(s.principal()) << "\n";
    if (simp) {
        Normal n = simplify(s.principal());
        bool ok = static_cast<bool>(check_derivation(n.proof, {System::MilMinus, {}}));
        std::cout << "simplified " << print(n.nf) << (ok ? "" : " (certificate rejected)") << "\n";
        if (!ok) return Negative;
    }
    std::cout << "certificates checked in Mil- at all " << w.size() << " vertices\n";
    return Positive;
}

int cmd_check_solution(const Opts& o, const std::string& path) {
    Solution s = solution_from_json(read_json(path));
    try {
        Solution r = check_solution(s, load_mode(o.mode), o.depth);
        for (int v = 0; v < r.chart.size(); ++v)
            std::cout << v << ": " << evidence_name(r.evidence[v].kind) << "  " << print(correctness_condition(r, v))
                      << "\n";
        std::cout << "solution ok, weakest evidence " << evidence_name(weakest(r)) << "\n";
        return Positive;
    } catch (const SolutionError& e) {
        std::cout << "solution fails at vertex " << e.vertex << ": " << e.what() << "\n";
        return Negative;
    }
}

int cmd_ft(const Opts& o, const std::string& text) {
    SExp E = parse_stacked(text);
    D d = ft_certificate(E);
    CheckResult r = check_derivation(d, {System::MilMinus, {}});
    if (o.json || !o.out.empty()) emit(o, derivation_to_json(d));
    if (!o.json) std::cout << print(d->concl) << "\n" << (r ? "checks in Mil-" : "rejected: " + r.error) << "\n";
    return r ? Positive : Negative;
}

int cmd_split(const Opts& o, const std::string& text) {
    Exp e = parse(text);
    if (!terminates(e)) throw UsageError(print(e) + " does not terminate");
    Split s = split_termination(e);
    CheckResult r = check_derivation(s.cert, {System::MilMinus, {}});
    if (o.json || !o.out.empty()) emit(o, json{{"f", print(s.f)}, {"certificate", derivation_to_json(s.cert)}});
    if (!o.json) std::cout << "f = " << print(s.f) << "\n" << print(s.cert->concl) << (r ? " checks" : " rejected") << "\n";
    return r ? Positive : Negative;
}

int report_coind(const CoindCheck& r) {
    if (r) {
        std::cout << "coinductive proof ok, weakest evidence " << evidence_name(r.weakest) << "\n";
        return Positive;
    }
    std::cout << "coinductive proof fails";
    if (r.vertex >= 0) std::cout << " at vertex " << r.vertex;
    if (!r.side.empty()) std::cout << " (" << r.side << ")";
    std::cout << ": " << r.reason << "\n";
    return Negative;
}

int cmd_mimic(const Opts& o, const std::string& e, const std::string& f, const std::string& g) {
    CoinductiveProof p;
    try {
        p = mimic_rspstar(parse(e), parse(f), parse(g));
    } catch (const NotGuarded& ex) {
        std::cout << "not guarded: " << ex.what() << "\n";
        return Negative;
    }
    emit(o, coind_to_json(p));
    if (!o.json) {
        std::cout << print(coind_conclusion(p)) << " over Mil- + {" << print(p.base.assumptions.at(0)) << "}\n";
        for (int v = 0; v < p.chart.size(); ++v) std::cout << "  " << v << ": " << print(p.label(v)) << "\n";
    }
    return report_coind(check_coind_proof(p, Mode::Certificate));
}

CoinductiveProof load_proof(const std::string& path) { return *coind_from_json(read_json(path)); }

int cmd_coind_check(const Opts& o, const std::string& path) {
    CoinductiveProof p = load_proof(path);
    std::cout << print(coind_conclusion(p)) << (p.llee() ? " (LLEE-witnessed)" : "") << "\n";
    return report_coind(check_coind_proof(p, load_mode(o.mode)));
}

int report_derivation(const Opts& o, const D& d, System sys) {
    emit(o, derivation_to_json(d));
    CheckResult r = check_derivation(d, {sys, {}});
    if (!o.json)
        std::cout << print(d->concl) << "\n"
                  << (r ? "checks in " + system_name(sys) : "rejected in " + system_name(sys) + ": " + r.error) << "\n"
                  << derivation_size(d) << " nodes, " << count_rule(d, Rule::RSPstar) << " RSP*, "
                  << count_rule(d, Rule::LCoind) + count_rule(d, Rule::Coind) << " coinductive\n";
    return r ? Positive : Negative;
}

int cmd_coind_to_mil(const Opts& o, const std::string& path, const std::vector<std::string>& premises) {
    CoinductiveProof p = load_proof(path);
    std::vector<std::pair<FormalEq, D>> subs;
    for (const auto& f : premises) {
        D d = derivation_from_json(read_json(f));
        subs.emplace_back(d->concl, d);
    }
    return report_derivation(o, coind_to_mil(p, subs), System::Mil);
}

int cmd_transform(const Opts& o, const std::string& path, const std::string& from, const std::string& to) {
    D d = derivation_from_json(read_json(path));
    System t = load_system(to);
    return report_derivation(o, transform(d, load_system(from), t), t);
}

int cmd_check_proof(const Opts& o, const std::string& path) {
    D d = derivation_from_json(read_json(path));
    SystemId s = system_with(o);
    CheckResult r = check_derivation(d, s);
    std::cout << print(d->concl) << "\n";
    if (r) {
        std::cout << "valid in " << system_name(s.sys) << "\n";
        return Positive;
    }
    std::cout << "invalid in " << system_name(s.sys) << " at /" << r.where << ": " << r.error << "\n";
    return Negative;
}

int cmd_prove(const Opts& o, const std::string& a, const std::string& b) {
    SystemId s = system_with(o);
    auto d = bounded_prove(parse(a), parse(b), s, o.depth);
    if (!d) {
        std::cout << "no proof found within depth " << o.depth << " (inconclusive)\n";
        return Negative;
    }
    emit(o, derivation_to_json(*d));
    if (!o.json) std::cout << print((*d)->concl) << "\nproof with " << derivation_size(*d) << " nodes\n";
    return Positive;
}

int cmd_complete(const Opts& o, const std::string& a, const std::string& b) {
    auto d = product_cc_proof(parse(a), parse(b));
    if (!d) {
        std::cout << "not bisimilar, no proof\n";
        return Negative;
    }
    return report_derivation(o, *d, System::CC);
}

int cmd_joint(const Opts& o, const std::string& a, const std::string& b, const std::string& kind,
              const std::string& chart) {
    Exp e1 = parse(a), e2 = parse(b);
    JointMode mode = kind == "minimization" ? JointMode::Minimization : JointMode::Expansion;
    if (kind != "expansion" && kind != "minimization") throw UsageError("unknown joint mode " + kind);
    EntryBodyLabeling c = chart.empty() ? onechart_of(e1) : witness_of(chart);
    OneChart c1 = onechart_of(e1), c2 = onechart_of(e2);
    auto find = [&](const OneChart& x) {
        return mode == JointMode::Expansion ? find_functional(c, x) : find_functional(x, c);
    };
    auto phi1 = find(c1), phi2 = find(c2);
    if (!phi1 || !phi2) {
        std::cout << "no functional 1-bisimulation in the " << kind << " direction\n";
        return Negative;
    }
    return report_derivation(o, joint_llee_completeness(e1, e2, c, mode, *phi1, *phi2), System::Mil);
}

int cmd_figures(const std::string& dir, const std::string& golden) {
    if (!dir.empty()) fs::create_directories(dir);
    int bad = 0;
    for (const auto& f : example_figures()) {
        if (!dir.empty()) {
            write_file((fs::path(dir) / (f.name + ".dot")).string(), to_dot(f.chart, f.caption));
            write_file((fs::path(dir) / (f.name + ".json")).string(), to_json(f.chart).dump(1) + "\n");
        }
        std::string verdict;
        if (!golden.empty()) {
            fs::path g = fs::path(golden) / (f.name + ".json");
            bool same = fs::exists(g) && isomorphism(f.chart, chart_from_json(read_json(g.string()))).has_value();
            verdict = same ? "  matches golden" : "  DIFFERS from golden";
            if (!same) ++bad;
        }
        std::cout << f.name << ": " << f.chart.size() << " vertices, " << f.chart.trans.size() << " transitions"
                  << verdict << "\n";
    }
    return bad ? Negative : Positive;
}

// corpus-wide property run, fanned out over worker threads
int cmd_corpus(const Opts& o, int count, int threads) {
    auto corpus = expression_corpus(o.seed, count, o.size);
    std::atomic<std::size_t> next{0};
    std::atomic<int> failures{0};
    std::mutex out_mu;
    auto worker = [&] {
        for (std::size_t i = next++; i < corpus.size(); i = next++) {
            Exp e = corpus[i];
            std::string err;
            try {
                EntryBodyLabeling w = onechart_of(e);
                WitnessCheck wc = check_witness(w);
                Projection pr = projection_map(w);
                if (!wc.valid_llee || !wc.guarded) err = "witness: " + wc.reason;
                else if (!check_functional(pr.phi, w, pr.target))
                    err = "projection is not a functional 1-bisimulation";
                else
                    check_solution(extract(w).solution, Mode::Certificate);
            } catch (const std::exception& ex) {
                err = ex.what();
            }
            if (!err.empty()) {
                ++failures;
                std::lock_guard<std::mutex> lock(out_mu);
                std::cout << "FAIL " << print(e) << ": " << err << "\n";
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::max(1, threads); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    std::cout << corpus.size() - failures << "/" << corpus.size() << " expressions pass\n";
    return failures ? Negative : Positive;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"star expressions as processes: charts, LLEE, proofs and coinductive proofs"};
    app.require_subcommand(1);
    app.fallthrough();
    Opts o;
    app.add_flag("--one", o.one, "use the 1-chart interpretation");
    app.add_flag("--json", o.json, "print JSON");
    app.add_option("--dot", o.dot, "write DOT to PATH");
    app.add_option("--system", o.system, "proof system (Mil-, Mil, Mil', cMil, cMil1, CLC, CC, ...)");
    app.add_option("--mode", o.mode, "discharge ladder bound: cert, prove or semantic");
    app.add_option("--depth", o.depth, "bounded prover depth");
    app.add_option("--seed", o.seed, "corpus seed");
    app.add_option("--size", o.size, "maximal corpus expression size");
    app.add_option("--out", o.out, "write the JSON result to PATH");
    app.add_option("--assume", o.assume, "assumption equation 'e = f' (repeatable)");

    std::function<int()> run;
    std::string a, b, c;

    auto one_arg = [&](const std::string& name, const std::string& help, const std::string& what,
                       std::function<int()> f) {
        auto* s = app.add_subcommand(name, help);
        s->add_option(what, a)->required();
        s->callback([&run, f] { run = f; });
        return s;
    };
    auto two_args = [&](const std::string& name, const std::string& help, std::function<int()> f) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("left", a)->required();
        s->add_option("right", b)->required();
        s->callback([&run, f] { run = f; });
        return s;
    };

    one_arg("parse", "parse and describe an expression", "expr", [&] { return cmd_parse(o, a); });
    one_arg("chart", "chart interpretation (or 1-chart with --one)", "expr|file", [&] { return cmd_chart(o, a); });
    one_arg("onechart", "1-chart interpretation with its entry/body labeling", "expr|file", [&] {
        o.one = true;
        return cmd_chart(o, a);
    });
    two_args("bisim", "decide (1-)bisimilarity", [&] { return cmd_bisim(o, a, b); });
    one_arg("llee", "decide LEE and LLEE, print a witness", "expr|file", [&] { return cmd_llee(o, a); });
    bool lenient = false;
    one_arg("check-witness", "validate an LLEE-witness", "expr|file", [&] { return cmd_check_witness(o, a, lenient); })
        ->add_flag("--lenient", lenient, "accept non-layered LEE recordings");
    bool simp = false;
    one_arg("extract", "extract a provable solution from an LLEE-witness", "expr|file", [&] {
        return cmd_extract(o, a, simp);
    })->add_flag("--simplify", simp, "simplify the principal value with a certificate");
    one_arg("check-solution", "check a solution file", "file", [&] { return cmd_check_solution(o, a); });
    one_arg("ft", "fundamental theorem certificate for a stacked expression", "stacked", [&] {
        return cmd_ft(o, a);
    });
    one_arg("split", "termination splitting e = 1 + f", "expr", [&] { return cmd_split(o, a); });

    std::string me, mf, mg;
    auto* mimic = app.add_subcommand("mimic-rsp", "coinductive proof mimicking an RSP* instance");
    mimic->add_option("--e", me)->required();
    mimic->add_option("--f", mf)->required();
    mimic->add_option("--g", mg)->required();
    mimic->callback([&] { run = [&] { return cmd_mimic(o, me, mf, mg); }; });

    one_arg("coind-check", "check a coinductive proof file", "file", [&] { return cmd_coind_check(o, a); });
    std::vector<std::string> premises;
    one_arg("coind-to-mil", "turn an LLEE-witnessed coinductive proof into a Mil derivation", "file", [&] {
        return cmd_coind_to_mil(o, a, premises);
    })->add_option("--premise", premises, "Mil derivation of an assumption (repeatable)");
    std::string from, to;
    auto* tr = one_arg("transform", "transform a derivation between systems", "file", [&] {
        return cmd_transform(o, a, from, to);
    });
    tr->add_option("--from", from)->required();
    tr->add_option("--to", to)->required();
    one_arg("check-proof", "check a derivation file in --system", "file", [&] { return cmd_check_proof(o, a); });
    two_args("prove", "bounded proof search in --system", [&] { return cmd_prove(o, a, b); });
    two_args("complete", "CC proof through the product chart", [&] { return cmd_complete(o, a, b); });
    std::string kind = "expansion", jchart;
    auto* joint = two_args("joint", "Mil derivation through a joint LLEE expansion or minimization", [&] {
        return cmd_joint(o, a, b, kind, jchart);
    });
    joint->add_option("--kind", kind, "expansion or minimization");
    joint->add_option("--chart", jchart, "LLEE chart file or expression (default: 1-chart of left)");

    std::string fig_dir, golden;
    auto* figs = app.add_subcommand("figures", "regenerate the example figures");
    figs->add_option("--dir", fig_dir, "write DOT and JSON files here");
    figs->add_option("--golden", golden, "compare with golden JSON charts in this directory");
    figs->callback([&] { run = [&] { return cmd_figures(fig_dir, golden); }; });

    int count = 100, threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    auto* corp = app.add_subcommand("corpus", "witness, projection and extraction checks over a random corpus");
    corp->add_option("--count", count);
    corp->add_option("--threads", threads);
    corp->callback([&] { run = [&] { return cmd_corpus(o, count, threads); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? Positive : Failure;
    }
    try {
        return run();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const SyntaxError& e) {
        std::cerr << "syntax error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    return Failure;
}
