#include "alambda/serialize.hpp"

namespace alambda {

namespace {

[[noreturn]] void bad(const std::string& what) {
    throw UsageError("malformed record: " + what);
}

Semiring ring_from_json(const Json& j) {
    auto r = semiring_from_name(j.get<std::string>());
    if (!r) bad("unknown semiring '" + j.get<std::string>() + "'");
    return *r;
}

Pos pos_from_json(const Json& j) {
    Pos out;
    for (const auto& e : j) out.push_back(e.get<int>());
    return out;
}

} // namespace

Json to_json(const PurePtr& t) {
    switch (t->kind) {
    case PureTerm::Kind::FreeVar: return Json{{"k", "v"}, {"n", t->name}};
    case PureTerm::Kind::BoundVar: return Json{{"k", "b"}, {"i", t->index}};
    case PureTerm::Kind::Lam: return Json{{"k", "l"}, {"b", to_json(t->left)}};
    case PureTerm::Kind::App:
        return Json{{"k", "a"}, {"f", to_json(t->left)}, {"a", to_json(t->right)}};
    }
    bad("pure term kind");
}

PurePtr pure_from_json(const Json& j) {
    std::string k = j.at("k").get<std::string>();
    if (k == "v") return pvar(j.at("n").get<std::string>());
    if (k == "b") return pbound(j.at("i").get<int>());
    if (k == "l") return plam(pure_from_json(j.at("b")));
    if (k == "a") return papp(pure_from_json(j.at("f")), pure_from_json(j.at("a")));
    bad("pure term kind '" + k + "'");
}

namespace {

Json entries_to_json(const AlgebraicTerm& s) {
    Json out = Json::array();
    for (const auto& [u, c] : s.entries()) out.push_back(Json{c.str(), to_json(u)});
    return out;
}

AlgebraicTerm entries_from_json(const Json& j, Semiring ring) {
    std::vector<AlgebraicTerm::Entry> entries;
    for (const auto& e : j) {
        Coeff c = Coeff::parse(e.at(0).get<std::string>(), ring);
        entries.emplace_back(simple_from_json(e.at(1), ring), std::move(c));
    }
    return AlgebraicTerm::build(ring, std::move(entries));
}

} // namespace

Json to_json(const SimplePtr& u) {
    switch (u->kind) {
    case SimpleTerm::Kind::FreeVar: return Json{{"k", "v"}, {"n", u->name}};
    case SimpleTerm::Kind::BoundVar: return Json{{"k", "b"}, {"i", u->index}};
    case SimpleTerm::Kind::Lam: return Json{{"k", "l"}, {"b", to_json(u->sub)}};
    case SimpleTerm::Kind::App:
        return Json{{"k", "a"}, {"f", to_json(u->sub)}, {"a", entries_to_json(*u->arg)}};
    }
    bad("simple term kind");
}

SimplePtr simple_from_json(const Json& j, Semiring ring) {
    std::string k = j.at("k").get<std::string>();
    if (k == "v") return svar(j.at("n").get<std::string>());
    if (k == "b") return sbound(j.at("i").get<int>());
    if (k == "l") return slam(simple_from_json(j.at("b"), ring));
    if (k == "a")
        return sapp(simple_from_json(j.at("f"), ring),
                    share(entries_from_json(j.at("a"), ring)));
    bad("simple term kind '" + k + "'");
}

Json to_json(const AlgebraicTerm& s) {
    return Json{{"ring", std::string(semiring_name(s.ring()))},
                {"terms", entries_to_json(s)}};
}

AlgebraicTerm alg_from_json(const Json& j) {
    Semiring ring = ring_from_json(j.at("ring"));
    return entries_from_json(j.at("terms"), ring);
}

Json to_json(const BetaTrace& t) {
    Json steps = Json::array();
    for (const auto& s : t.steps)
        steps.push_back(Json{{"pos", s.pos}, {"to", to_json(s.result)}});
    return Json{{"start", to_json(t.start)}, {"steps", steps}};
}

BetaTrace beta_trace_from_json(const Json& j) {
    BetaTrace out{pure_from_json(j.at("start")), {}};
    for (const auto& s : j.at("steps"))
        out.steps.push_back({pos_from_json(s.at("pos")), pure_from_json(s.at("to"))});
    return out;
}

Json to_json(const SimpleStepPtr& s) {
    switch (s->kind) {
    case SimpleStep::Kind::HeadBeta: return Json{{"k", "beta"}};
    case SimpleStep::Kind::InLamBody: return Json{{"k", "lam"}, {"s", to_json(s->inner)}};
    case SimpleStep::Kind::InAppFun: return Json{{"k", "fun"}, {"s", to_json(s->inner)}};
    case SimpleStep::Kind::InAppArg:
        return Json{{"k", "arg"}, {"s", to_json(*s->inner_alg)}};
    }
    bad("step kind");
}

SimpleStepPtr simple_step_from_json(const Json& j, Semiring ring) {
    std::string k = j.at("k").get<std::string>();
    if (k == "beta") return step_head_beta();
    if (k == "lam") return step_in_lam(simple_step_from_json(j.at("s"), ring));
    if (k == "fun") return step_in_fun(simple_step_from_json(j.at("s"), ring));
    if (k == "arg")
        return step_in_arg(
            std::make_shared<AlgStep>(alg_step_from_json(j.at("s"), ring)));
    bad("step kind '" + k + "'");
}

Json to_json(const AlgStep& s) {
    return Json{{"selected", to_json(s.selected)},
                {"split", s.split.str()},
                {"residual", s.residual.str()},
                {"inner", to_json(s.inner)}};
}

AlgStep alg_step_from_json(const Json& j, Semiring ring) {
    return AlgStep{simple_from_json(j.at("selected"), ring),
                   Coeff::parse(j.at("split").get<std::string>(), ring),
                   Coeff::parse(j.at("residual").get<std::string>(), ring),
                   simple_step_from_json(j.at("inner"), ring)};
}

Json to_json(const AlgTrace& t, std::string_view policy) {
    Json steps = Json::array();
    for (const auto& s : t.steps) {
        steps.push_back(Json{{"step", to_json(s.step)},
                             {"selected", print(s.step.selected)},
                             {"split", s.step.split.str()},
                             {"residual", s.step.residual.str()},
                             {"reduct", entries_to_json(s.reduct)},
                             {"result", entries_to_json(s.result)},
                             {"rendering", print(s.result)}});
    }
    return Json{{"v", 1},
                {"kind", "alg-trace"},
                {"ring", std::string(semiring_name(t.start.ring()))},
                {"policy", std::string(policy)},
                {"start", entries_to_json(t.start)},
                {"steps", steps}};
}

AlgTrace alg_trace_from_json(const Json& j) {
    if (j.value("kind", "") != "alg-trace") bad("expected an alg-trace record");
    Semiring ring = ring_from_json(j.at("ring"));
    AlgTrace out{entries_from_json(j.at("start"), ring), {}};
    AlgebraicTerm cur = out.start;
    for (const auto& s : j.at("steps")) {
        AlgStep step = alg_step_from_json(s.at("step"), ring);
        auto reduct = apply_step(step.selected, *step.inner, ring);
        auto next = apply_step(cur, step);
        if (!reduct || !next) bad("trace step does not apply");
        if (s.contains("result") && entries_from_json(s.at("result"), ring) != *next)
            bad("trace step result does not match its recomputation");
        out.steps.push_back({step, *reduct, *next});
        cur = *next;
    }
    return out;
}

Json to_json(const DerivPtr& d) {
    if (!d) bad("null derivation");
    Json base{{"subject", to_json(d->subject)},
              {"ring", std::string(semiring_name(d->ring))}};
    switch (d->rule) {
    case Derivation::Rule::V:
        base["rule"] = "v";
        base["trace"] = to_json(d->trace);
        return base;
    case Derivation::Rule::Lam:
        base["rule"] = "lam";
        base["trace"] = to_json(d->trace);
        base["binder"] = d->binder;
        base["body"] = to_json(d->child1);
        return base;
    case Derivation::Rule::App:
        base["rule"] = "app";
        base["trace"] = to_json(d->trace);
        base["fun"] = to_json(d->child1);
        base["arg"] = to_json(d->child2);
        return base;
    case Derivation::Rule::Zero:
        base["rule"] = "zero";
        return base;
    case Derivation::Rule::Plus:
        base["rule"] = "plus";
        base["coeff"] = d->coeff->str();
        base["strong"] = to_json(d->child1);
        base["weak"] = to_json(d->child2);
        return base;
    }
    bad("derivation rule");
}

DerivPtr deriv_from_json(const Json& j) {
    PurePtr subject = pure_from_json(j.at("subject"));
    Semiring ring = ring_from_json(j.at("ring"));
    std::string rule = j.at("rule").get<std::string>();
    if (rule == "v") return deriv_v(subject, ring, beta_trace_from_json(j.at("trace")));
    if (rule == "lam")
        return deriv_lam(subject, ring, beta_trace_from_json(j.at("trace")),
                         j.at("binder").get<std::string>(),
                         deriv_from_json(j.at("body")));
    if (rule == "app")
        return deriv_app(subject, ring, beta_trace_from_json(j.at("trace")),
                         deriv_from_json(j.at("fun")), deriv_from_json(j.at("arg")));
    if (rule == "zero") return deriv_zero(subject, ring);
    if (rule == "plus")
        return deriv_plus(subject, Coeff::parse(j.at("coeff").get<std::string>(), ring),
                          deriv_from_json(j.at("strong")),
                          deriv_from_json(j.at("weak")));
    bad("derivation rule '" + rule + "'");
}

Json to_json(const Report& r) {
    return Json{{"v", 1},
                {"kind", "report"},
                {"name", r.name},
                {"ok", r.ok},
                {"lines", r.lines}};
}

Json to_json(const ConservativityCertificate& c) {
    Json derivs = Json::array();
    for (const auto& d : c.derivations) derivs.push_back(to_json(d));
    return Json{{"v", 1},
                {"kind", "certificate"},
                {"source", to_json(c.source)},
                {"target", to_json(c.target)},
                {"alg", to_json(c.alg)},
                {"derivations", derivs},
                {"beta", to_json(c.beta)}};
}

Json to_json(const EquivEvidence& e) {
    return Json{{"v", 1},
                {"kind", "equivalence"},
                {"k", e.k},
                {"meet", entries_to_json(e.join.meet)},
                {"left", to_json(e.join.left)},
                {"right", to_json(e.join.right)},
                {"parallel_target", entries_to_json(e.parallel_target)},
                {"meet_to_parallel", to_json(e.meet_to_parallel)},
                {"right_to_parallel", to_json(e.right_to_parallel)}};
}

} // namespace alambda
