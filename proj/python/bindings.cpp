#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "alambda/serialize.hpp"

namespace py = pybind11;
using namespace alambda;

namespace {

Semiring ring_of(const std::string& name) {
    auto r = semiring_from_name(name);
    if (!r) throw UsageError("unknown semiring '" + name + "'");
    return *r;
}

SplitPolicy policy_of(const std::string& name, Semiring ring) {
    auto n = split_policy_from_name(name);
    if (!n) throw UsageError("unknown split policy '" + name + "'");
    if (!split_policy_valid(*n, ring))
        throw UsageError("split policy '" + name + "' is not valid over " +
                         std::string(semiring_name(ring)));
    return SplitPolicy{*n};
}

std::string canon(const std::string& term, const std::string& semiring) {
    Semiring r = ring_of(semiring);
    return print(canonicalize(parse(term, r), r));
}

std::vector<std::string> support_of(const std::string& term, const std::string& semiring) {
    Semiring r = ring_of(semiring);
    std::vector<std::string> out;
    for (auto& u : support(canonicalize(parse(term, r), r))) out.push_back(print(u));
    return out;
}

std::vector<std::string> lambda_support_of(const std::string& term,
                                           const std::string& semiring) {
    Semiring r = ring_of(semiring);
    std::vector<std::string> out;
    for (auto& m : lambda_support(canonicalize(parse(term, r), r)))
        out.push_back(print(m));
    return out;
}

py::object as_pure_str(const std::string& term, const std::string& semiring) {
    Semiring r = ring_of(semiring);
    auto p = as_pure(canonicalize(parse(term, r), r));
    if (!p) return py::none();
    return py::str(print(*p));
}

std::vector<std::string> beta_reducts_of(const std::string& term) {
    std::vector<std::string> out;
    for (auto& [pos, r] : beta_reducts(parse_pure(term))) out.push_back(print(r));
    return out;
}

std::string reduce_trace(const std::string& term, const std::string& semiring,
                         long steps, const std::string& split) {
    Semiring r = ring_of(semiring);
    SplitPolicy policy = policy_of(split, r);
    AlgebraicTerm cur = canonicalize(parse(term, r), r);
    AlgTrace trace{cur, {}};
    for (long i = 0; i < steps; ++i) {
        auto reducts = alg_reducts(cur, policy);
        if (reducts.empty()) break;
        const auto& [step, result] = reducts.front();
        trace.steps.push_back(
            {step, *apply_step(step.selected, *step.inner, r), result});
        cur = result;
    }
    return to_json(trace, split).dump();
}

py::object prove_json(const std::string& term, const std::string& goal,
                      const std::string& semiring, long fuel) {
    Semiring r = ring_of(semiring);
    auto d = prove(parse_pure(term, r), canonicalize(parse(goal, r), r), fuel);
    if (!d) return py::none();
    return py::str(to_json(*d).dump());
}

py::dict check_json(const std::string& derivation) {
    auto res = check(deriv_from_json(Json::parse(derivation)));
    py::dict out;
    out["valid"] = res.valid;
    if (res.valid)
        out["conclusion"] = res.conclusion->str();
    else {
        out["path"] = res.path;
        out["reason"] = res.reason;
    }
    return out;
}

py::dict conserve_json(const std::string& trace) {
    auto cert = conserve(alg_trace_from_json(Json::parse(trace)));
    py::dict out;
    out["source"] = print(cert.source);
    out["target"] = print(cert.target);
    out["beta_steps"] = cert.beta.steps.size();
    out["replays"] = validate(cert.beta);
    out["certificate"] = to_json(cert).dump();
    return out;
}

py::object equiv_json(const std::string& a, const std::string& b,
                      const std::string& semiring, long fuel,
                      const std::string& split) {
    Semiring r = ring_of(semiring);
    auto ev = equiv_check(parse_pure(a, r), parse_pure(b, r), r, fuel,
                          policy_of(split, r));
    if (!ev) return py::none();
    py::dict out;
    out["k"] = ev->k;
    out["meet"] = print(ev->join.meet);
    out["parallel_target"] = print(ev->parallel_target_pure);
    return out;
}

py::dict demo(const std::string& name) {
    Report r;
    if (name == "claim21")
        r = claim21_counterexample();
    else if (name == "subars")
        r = non_sub_ars_witness();
    else if (name == "inconsistency")
        r = inconsistency_demo(embed(parse_pure("y"), Semiring::Nat));
    else
        throw UsageError("unknown demo '" + name + "'");
    py::dict out;
    out["name"] = r.name;
    out["ok"] = r.ok;
    out["text"] = r.to_text();
    return out;
}

} // namespace

PYBIND11_MODULE(_alambda, m) {
    m.doc() = "λ-terms with semiring-weighted sums: canonical forms, reduction, "
              "and proof-carrying reduction traces";

    py::register_exception<UsageError>(m, "AlambdaUsageError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "AlambdaParseError", PyExc_ValueError);

    m.def("canon", &canon, py::arg("term"), py::arg("semiring") = "nat",
          "canonical rendering of a term");
    m.def("support", &support_of, py::arg("term"), py::arg("semiring") = "nat");
    m.def("lambda_support", &lambda_support_of, py::arg("term"),
          py::arg("semiring") = "nat");
    m.def("as_pure", &as_pure_str, py::arg("term"), py::arg("semiring") = "nat",
          "the pure term a combination embeds, or None");
    m.def("beta_reducts", &beta_reducts_of, py::arg("term"),
          "one-step β-reducts of a pure term, leftmost-outermost first");
    m.def("reduce", &reduce_trace, py::arg("term"), py::arg("semiring") = "nat",
          py::arg("steps") = 1, py::arg("split") = "full",
          "leftmost reduction trace as a JSON record");
    m.def("prove", &prove_json, py::arg("term"), py::arg("goal"),
          py::arg("semiring") = "nat", py::arg("fuel") = 10000,
          "derivation as JSON, or None when the budget runs out");
    m.def("check", &check_json, py::arg("derivation"),
          "validate a serialized derivation");
    m.def("conserve", &conserve_json, py::arg("trace"),
          "β-trace certificate for an algebraic trace with pure endpoints");
    m.def("equiv", &equiv_json, py::arg("term"), py::arg("other"),
          py::arg("semiring") = "nat", py::arg("fuel") = 10000,
          py::arg("split") = "full");
    m.def("demo", &demo, py::arg("name"), "claim21 | subars | inconsistency");
}
