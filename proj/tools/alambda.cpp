#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "alambda/serialize.hpp"

using namespace alambda;

namespace {

// Exit codes are a stable contract: 0 success / Valid, 1 negative verdict,
// 2 input error, 3 early normal form, 4 Unknown (budget exhausted).
constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;
constexpr int kEarlyNormal = 3;
constexpr int kUnknown = 4;

struct Session {
    std::string semiring = "nat";
    long fuel = 10000;
    std::string split = "full";
    std::string format = "text";

    Semiring ring() const {
        auto r = semiring_from_name(semiring);
        if (!r) throw UsageError("unknown semiring '" + semiring + "'");
        return *r;
    }

    SplitPolicy policy() const {
        auto n = split_policy_from_name(split);
        if (!n) throw UsageError("unknown split policy '" + split + "'");
        if (!split_policy_valid(*n, ring()))
            throw UsageError("split policy '" + split + "' is not valid over " +
                             semiring);
        return SplitPolicy{*n};
    }

    bool json() const { return format == "json-lines"; }

    // Unknown verdicts are meaningless without the budget that produced them,
    // so every report starts with the session configuration.
    void emit_header(std::ostream& os) const {
        if (json()) {
            Json j{{"v", 1},
                   {"kind", "config"},
                   {"semiring", semiring},
                   {"fuel", fuel},
                   {"split", split}};
            os << j.dump() << "\n";
        } else {
            os << "# semiring=" << semiring << " fuel=" << fuel << " split=" << split
               << "\n";
        }
    }
};

void add_session_flags(CLI::App* cmd, Session& s) {
    cmd->add_option("--semiring", s.semiring, "coefficient semiring")
        ->check(CLI::IsMember({"nat", "rat+", "bool", "int"}));
    cmd->add_option("--fuel", s.fuel, "search budget (expanded nodes)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--split", s.split, "coefficient split policy")
        ->check(CLI::IsMember({"full", "unit", "half"}));
    cmd->add_option("--format", s.format, "output format")
        ->check(CLI::IsMember({"text", "json-lines"}));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Terms are given inline or, with a leading '@', read from a file.
std::string term_arg(const std::string& s) {
    if (!s.empty() && s[0] == '@') return read_file(s.substr(1));
    return s;
}

Json first_record_of_kind(const std::string& text, std::string_view kind) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Json j = Json::parse(line);
        if (j.is_object() && j.value("kind", "") == kind) return j;
    }
    throw UsageError("no '" + std::string(kind) + "' record in input");
}

int cmd_canon(const Session& s, const std::string& term) {
    auto c = canonicalize(parse(term, s.ring()), s.ring());
    if (s.json())
        std::cout << Json{{"v", 1}, {"kind", "canonical"}, {"term", to_json(c)},
                          {"rendering", print(c)}}
                         .dump()
                  << "\n";
    else
        std::cout << print(c) << "\n";
    return kOk;
}

int cmd_support(const Session& s, const std::string& term, bool lambda) {
    auto c = canonicalize(parse(term, s.ring()), s.ring());
    if (lambda) {
        auto ls = lambda_support(c);
        if (s.json()) {
            Json arr = Json::array();
            for (auto& m : ls) arr.push_back(print(m));
            std::cout << Json{{"v", 1}, {"kind", "lambda-support"}, {"elements", arr}}
                             .dump()
                      << "\n";
        } else {
            for (auto& m : ls) std::cout << print(m) << "\n";
        }
    } else {
        auto sup = support(c);
        if (s.json()) {
            Json arr = Json::array();
            for (auto& u : sup) arr.push_back(print(u));
            std::cout << Json{{"v", 1}, {"kind", "support"}, {"elements", arr}}.dump()
                      << "\n";
        } else {
            for (auto& u : sup) std::cout << print(u) << "\n";
        }
    }
    return kOk;
}

int cmd_reduce(const Session& s, const std::string& term, long steps) {
    AlgebraicTerm cur = canonicalize(parse(term, s.ring()), s.ring());
    AlgTrace trace{cur, {}};
    bool early = false;
    for (long i = 0; i < steps; ++i) {
        auto reducts = alg_reducts(cur, s.policy());
        if (reducts.empty()) {
            early = true;
            break;
        }
        const auto& [step, result] = reducts.front(); // leftmost strategy
        auto reduct = apply_step(step.selected, *step.inner, cur.ring());
        trace.steps.push_back({step, *reduct, result});
        cur = result;
    }
    s.emit_header(std::cout);
    if (s.json()) {
        std::cout << to_json(trace, s.split).dump() << "\n";
        if (early)
            std::cout << Json{{"v", 1}, {"kind", "note"}, {"note", "normal form"}}.dump()
                      << "\n";
    } else {
        std::cout << print(trace.start) << "\n";
        for (const auto& st : trace.steps)
            std::cout << "  ~> " << print(st.result) << "   [selected "
                      << print(st.step.selected) << ", split " << st.step.split.str()
                      << "]\n";
        if (early) std::cout << "normal form reached\n";
    }
    return early ? kEarlyNormal : kOk;
}

int cmd_beta(const Session& s, const std::string& term, const std::string& target) {
    PurePtr m = parse_pure(term, s.ring());
    if (target.empty()) {
        for (auto& [pos, r] : beta_reducts(m)) std::cout << print(r) << "\n";
        return kOk;
    }
    PurePtr n = parse_pure(target, s.ring());
    s.emit_header(std::cout);
    auto tr = beta_reaches(m, n, s.fuel);
    if (!tr) {
        std::cout << (s.json() ? Json{{"v", 1}, {"kind", "verdict"},
                                      {"verdict", "unknown"}}
                                     .dump()
                               : std::string("unknown (budget exhausted)"))
                  << "\n";
        return kUnknown;
    }
    if (s.json()) {
        std::cout << Json{{"v", 1}, {"kind", "beta-trace"}, {"trace", to_json(*tr)}}
                         .dump()
                  << "\n";
    } else {
        std::cout << print(tr->start) << "\n";
        for (const auto& st : tr->steps) std::cout << "  -> " << print(st.result) << "\n";
    }
    return kOk;
}

int cmd_prove(const Session& s, const std::string& term, const std::string& goal) {
    PurePtr m = parse_pure(term, s.ring());
    AlgebraicTerm g = canonicalize(parse(goal, s.ring()), s.ring());
    s.emit_header(std::cout);
    auto d = prove(m, g, s.fuel);
    if (!d) {
        std::cout << (s.json() ? Json{{"v", 1}, {"kind", "verdict"},
                                      {"verdict", "unknown"}}
                                     .dump()
                               : std::string("unknown (budget exhausted)"))
                  << "\n";
        return kUnknown;
    }
    auto res = check(*d);
    if (!res.valid) {
        std::cerr << "internal error: the search returned a derivation that does "
                     "not check: " << res.reason << "\n";
        return kNegative;
    }
    if (s.json()) {
        Json rec = to_json(*d);
        rec["v"] = 1;
        rec["kind"] = "derivation";
        std::cout << rec.dump() << "\n";
    } else {
        std::cout << "proved: " << res.conclusion->str() << "\n";
    }
    return kOk;
}

int cmd_check(const Session& s, const std::string& path) {
    std::string text = read_file(path);
    Json j;
    // accept both a bare derivation object and json-lines with a derivation
    try {
        j = Json::parse(text);
        if (!j.is_object() || !j.contains("rule"))
            j = first_record_of_kind(text, "derivation");
    } catch (const Json::parse_error&) {
        j = first_record_of_kind(text, "derivation");
    }
    DerivPtr d = deriv_from_json(j);
    auto res = check(d);
    if (s.json()) {
        Json out{{"v", 1},
                 {"kind", "check"},
                 {"valid", res.valid}};
        if (res.valid)
            out["conclusion"] = res.conclusion->str();
        else {
            out["path"] = res.path;
            out["reason"] = res.reason;
        }
        std::cout << out.dump() << "\n";
    } else if (res.valid) {
        std::cout << "valid: " << res.conclusion->str() << "\n";
    } else {
        std::cout << "invalid at [";
        for (std::size_t i = 0; i < res.path.size(); ++i)
            std::cout << (i ? "." : "") << res.path[i];
        std::cout << "]: " << res.reason << "\n";
    }
    return res.valid ? kOk : kNegative;
}

int cmd_conserve(const Session& s, const std::string& path) {
    Json j = first_record_of_kind(read_file(path), "alg-trace");
    AlgTrace trace = alg_trace_from_json(j);
    auto cert = conserve(trace);
    s.emit_header(std::cout);
    if (s.json()) {
        std::cout << to_json(cert).dump() << "\n";
    } else {
        std::cout << "source: " << print(cert.source) << "\n";
        std::cout << "target: " << print(cert.target) << "\n";
        std::cout << "algebraic steps: " << cert.alg.steps.size() << "\n";
        std::cout << "beta trace (" << cert.beta.steps.size() << " steps):\n";
        std::cout << "  " << print(cert.beta.start) << "\n";
        for (const auto& st : cert.beta.steps)
            std::cout << "  -> " << print(st.result) << "\n";
        std::cout << "replay: " << (validate(cert.beta) ? "ok" : "FAILED") << "\n";
    }
    return kOk;
}

int cmd_equiv(const Session& s, const std::string& a, const std::string& b) {
    PurePtr m = parse_pure(a, s.ring());
    PurePtr n = parse_pure(b, s.ring());
    s.emit_header(std::cout);
    auto ev = equiv_check(m, n, s.ring(), s.fuel, s.policy());
    if (!ev) {
        std::cout << (s.json() ? Json{{"v", 1}, {"kind", "verdict"},
                                      {"verdict", "unknown"}}
                                     .dump()
                               : std::string("unknown (budget exhausted)"))
                  << "\n";
        return kUnknown;
    }
    if (s.json()) {
        std::cout << to_json(*ev).dump() << "\n";
    } else {
        std::cout << "equivalent (join in " << ev->k << " steps on the left)\n";
        std::cout << "meet: " << print(ev->join.meet) << "\n";
        std::cout << "parallel target: " << print(ev->parallel_target_pure) << "\n";
    }
    return kOk;
}

int cmd_demo(const Session& s, const std::string& name) {
    Report r;
    if (name == "claim21")
        r = claim21_counterexample();
    else if (name == "subars")
        r = non_sub_ars_witness();
    else if (name == "inconsistency")
        r = inconsistency_demo(embed(parse_pure("y"), Semiring::Nat));
    else
        throw UsageError("unknown demo '" + name + "'");
    if (s.json())
        std::cout << to_json(r).dump() << "\n";
    else
        std::cout << r.to_text();
    return r.ok ? kOk : kNegative;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"algebraic λ-calculus workbench"};
    app.require_subcommand(1);
    Session s;

    std::string term, goal, target, file, demo_name;
    long steps = 1;

    auto* canon = app.add_subcommand("canon", "canonical form of a term");
    canon->add_option("term", term)->required();
    add_session_flags(canon, s);

    auto* support_cmd = app.add_subcommand("support", "support of the canonical form");
    support_cmd->add_option("term", term)->required();
    add_session_flags(support_cmd, s);

    auto* lsupport = app.add_subcommand("lambda-support",
                                        "pure terms extracted from the combination");
    lsupport->add_option("term", term)->required();
    add_session_flags(lsupport, s);

    auto* reduce = app.add_subcommand("reduce", "leftmost algebraic reduction trace");
    reduce->add_option("term", term)->required();
    reduce->add_option("--steps", steps, "how many steps to take")
        ->check(CLI::NonNegativeNumber);
    add_session_flags(reduce, s);

    auto* beta = app.add_subcommand("beta", "one-step β-reducts, or reachability "
                                            "with --to");
    beta->add_option("term", term)->required();
    beta->add_option("--to", target, "search a reduction to this term");
    add_session_flags(beta, s);

    auto* prove_cmd = app.add_subcommand("prove",
                                        "search a derivation pasting reductions "
                                        "of the term into the goal");
    prove_cmd->add_option("term", term)->required();
    prove_cmd->add_option("goal", goal)->required();
    add_session_flags(prove_cmd, s);

    auto* check_cmd = app.add_subcommand("check", "validate a serialized derivation");
    check_cmd->add_option("file", file)->required();
    add_session_flags(check_cmd, s);

    auto* conserve_cmd = app.add_subcommand("conserve",
                                            "β-trace certificate from an algebraic "
                                            "trace with pure endpoints");
    conserve_cmd->add_option("file", file)->required();
    add_session_flags(conserve_cmd, s);

    auto* equiv = app.add_subcommand("equiv", "equivalence of two pure terms");
    equiv->add_option("term", term)->required();
    equiv->add_option("other", goal)->required();
    add_session_flags(equiv, s);

    auto* demo = app.add_subcommand("demo", "built-in demonstrations");
    demo->add_option("name", demo_name)
        ->required()
        ->check(CLI::IsMember({"claim21", "subars", "inconsistency"}));
    add_session_flags(demo, s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (canon->parsed()) return cmd_canon(s, term_arg(term));
        if (support_cmd->parsed()) return cmd_support(s, term_arg(term), false);
        if (lsupport->parsed()) return cmd_support(s, term_arg(term), true);
        if (reduce->parsed()) return cmd_reduce(s, term_arg(term), steps);
        if (beta->parsed())
            return cmd_beta(s, term_arg(term), target.empty() ? target : term_arg(target));
        if (prove_cmd->parsed()) return cmd_prove(s, term_arg(term), term_arg(goal));
        if (check_cmd->parsed()) return cmd_check(s, file);
        if (conserve_cmd->parsed()) return cmd_conserve(s, file);
        if (equiv->parsed()) return cmd_equiv(s, term_arg(term), term_arg(goal));
        if (demo->parsed()) return cmd_demo(s, demo_name);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kInputError;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const Json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
