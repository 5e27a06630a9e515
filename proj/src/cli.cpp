#include "odlab/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>

#include "odlab/acceptance.hpp"
#include "odlab/brackets.hpp"
#include "odlab/io.hpp"
#include "odlab/multifilt.hpp"

namespace odlab {

namespace {

struct Usage : Error {
    using Error::Error;
};

struct Options {
    std::string config;
    int arity = 0;
    int max_order = -1;
    std::string kind;
    std::string check;
    std::string output;
    std::string format = "json";
    int threads = 0;
};

struct Outcome {
    std::string text; // document to emit
    bool ok = true;
};

nlohmann::json header(const std::string& command)
{
    return {{"schema", kSchemaTag}, {"command", command}};
}

RunConfig need_config(const Options& o)
{
    if (o.config.empty())
        throw Usage("--config is required for this command");
    return parse_run_config(load_json_file(o.config));
}

void json_only(const Options& o)
{
    if (o.format != "json")
        throw Usage("--format " + o.format + " is only available for filt");
}

nlohmann::json cert_json(const OrderCertificate& c, const AlgebraContext& ctx)
{
    if (c.order)
        return *c.order;
    (void)ctx;
    return "exceeds " + std::to_string(c.r_max);
}

nlohmann::json witness_json(const OrderCertificate& c, const AlgebraContext& ctx)
{
    nlohmann::json w = nlohmann::json::array();
    for (auto& m : c.witness)
        w.push_back(ctx.to_string(m));
    return w;
}

/* ---------------- order ---------------- */

Outcome cmd_order(const Options& o)
{
    json_only(o);
    auto rc = need_config(o);
    if (!rc.algebra || !rc.op)
        throw ConfigError("order: the config needs 'algebra' and 'operator'");
    const auto& ctx = *rc.algebra;
    LinearOperator op = [&] {
        try {
            return operator_from_json(*rc.op, ctx);
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError(std::string("operator: ") + e.what());
        }
    }();
    const int r = o.max_order >= 0 ? o.max_order : rc.max_order;
    const std::string kind = o.kind.empty() ? "both" : o.kind;
    if (kind != "both" && kind != "derivation" && kind != "diffop")
        throw Usage("order: --kind must be derivation, diffop or both");
    if (!o.check.empty())
        throw Usage("order: --check is not used by this command");
    auto j = header("order");
    j["max_order"] = r;
    j["certified_up_to_D"] = ctx.truncation();
    if (kind != "diffop") {
        auto c = derivation_order(op, r);
        j["derivation_order"] = cert_json(c, ctx);
        if (c.exceeds())
            j["derivation_witness"] = witness_json(c, ctx);
    }
    if (kind != "derivation") {
        auto c = diffop_order(op, r);
        j["diffop_order"] = cert_json(c, ctx);
        if (c.exceeds())
            j["diffop_witness"] = witness_json(c, ctx);
    }
    return {dump(j), true};
}

/* ---------------- operads ---------------- */

struct LoadedOperad {
    std::shared_ptr<const FreeOperad> free;
    std::vector<OperadElement> relations;
};

LoadedOperad load_operad(const RunConfig& rc, int arity)
{
    if (!rc.operad)
        throw ConfigError("the config needs an 'operad' presentation");
    nlohmann::json pj = *rc.operad;
    if (!pj.contains("max_arity"))
        pj["max_arity"] = std::max(arity, 3);
    if (pj["max_arity"].get<int>() < arity)
        throw ConfigError("operad.max_arity is below the requested arity");
    LoadedOperad L;
    try {
        auto pres = presentation_from_json(pj, &L.free);
        L.relations = std::move(pres.relations);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("operad: ") + e.what());
    } catch (const Error& e) {
        throw ConfigError(std::string("operad: ") + e.what());
    }
    return L;
}

Outcome cmd_filt(const Options& o)
{
    auto rc = need_config(o);
    const int n = o.arity > 0 ? o.arity : rc.arity;
    if (n < 1)
        throw Usage("filt: --arity must be positive");
    const std::string kind = o.kind.empty() ? "standard" : o.kind;
    if (kind != "standard" && kind != "prestandard")
        throw Usage("filt: --kind must be standard or prestandard");
    if (!o.check.empty() && o.check != "axioms" && o.check != "saturation")
        throw Usage("filt: --check must be axioms or saturation");
    if (o.format != "json" && o.format != "csv")
        throw Usage("--format must be json or csv");
    auto L = load_operad(rc, n);
    std::unique_ptr<OperadModel> quotient;
    const OperadModel* P = L.free.get();
    if (!L.relations.empty()) {
        quotient = std::make_unique<QuotientOperad>(L.free, L.relations);
        P = quotient.get();
    }
    auto G = kind == "standard" ? standard(*P, n) : prestandard(*P, n);
    auto lat = lattice(G, n);

    std::vector<std::string> problems;
    if (o.check == "axioms")
        problems = axiom_violations(*P, G, n);
    else if (o.check == "saturation")
        problems = saturation_defects(G);

    if (o.format == "csv") {
        if (!o.check.empty())
            throw Usage("filt: --check reports are JSON only");
        return {to_csv(lat), true};
    }
    auto j = header("filt");
    j["kind"] = kind;
    j.update(to_json(lat));
    j["ambient_dim"] = P->dim(n);
    if (!o.check.empty()) {
        j["check"] = o.check;
        j["violations"] = problems;
    }
    return {dump(j), problems.empty()};
}

Outcome cmd_tight(const Options& o)
{
    json_only(o);
    auto rc = need_config(o);
    if (!o.check.empty() && o.check != "tight")
        throw Usage("tight: --check must be tight");
    int A = 2;
    if (rc.operad && rc.operad->contains("max_arity"))
        A = (*rc.operad)["max_arity"].get<int>();
    auto L = load_operad(rc, A);
    if (L.relations.empty())
        throw ConfigError("tight: the presentation has no relations");
    auto rep = is_tight(*L.free, L.relations);
    auto j = header("tight");
    j.update(to_json(rep));
    return {dump(j), o.check.empty() || rep.tight};
}

/* ---------------- brackets ---------------- */

Outcome cmd_bracket(const Options& o)
{
    json_only(o);
    nlohmann::json bj = nlohmann::json::object();
    if (!o.config.empty()) {
        auto rc = need_config(o);
        if (rc.bracket)
            bj = *rc.bracket;
    }
    const std::string kind = o.kind.empty() ? "superbig" : o.kind;
    if (kind != "big" && kind != "superbig" && kind != "terilla")
        throw Usage("bracket: --kind must be big, superbig or terilla");
    std::string check = o.check;
    if (check.empty())
        check = kind == "terilla" ? "assoc" : "jacobi";
    const bool ok_combo = (kind == "terilla" && (check == "assoc" || check == "order")) ||
                          (kind != "terilla" && (check == "jacobi" || check == "antisymmetry" || check == "order"));
    if (!ok_combo)
        throw Usage("bracket: --check " + check + " is not available for --kind " + kind);

    PairedContext pc = [&] {
        try {
            return PairedContext::from_json(bj, kind == "terilla" ? PairingStyle::terilla : PairingStyle::big);
        } catch (const Error& e) {
            throw ConfigError(std::string("bracket: ") + e.what());
        }
    }();
    const auto& A = pc.algebra();
    const int M = pc.h_truncation();
    auto j = header("bracket");
    j["kind"] = kind;
    j["check"] = check;
    j["D"] = pc.truncation();
    j["degrees"] = pc.degrees();

    HSeriesOperator br = kind == "terilla"   ? terilla_operator(pc)
                         : kind == "superbig" ? superbig_operator(pc)
                                              : HSeriesOperator(2, {big_bracket_operator(pc)}, 2, 1, 2);
    const int top = br.truncation();
    bool ok = true;

    if (check == "order") {
        auto prof = certify_profile(br, pc.truncation());
        nlohmann::json entries = nlohmann::json::array();
        for (auto& e : prof) {
            const bool good = e.cert.order && *e.cert.order <= e.bound;
            ok = ok && good;
            entries.push_back({{"h", e.coefficient},
                               {"slot", e.slot + 1},
                               {"bound", e.bound},
                               {"order", cert_json(e.cert, A)}});
        }
        j["profile"] = entries;
        j["up_to_h"] = top;
        return {dump(j), ok};
    }

    long residual = 0, tuples = 0;
    nlohmann::json first;
    if (check == "jacobi") {
        const auto words = A.basis(std::min(3, pc.truncation()));
        for (auto& a : words)
            for (auto& b : words)
                for (auto& c : words) {
                    ++tuples;
                    for (int n = 1; n <= top + 1; ++n)
                        if (!lie_jacobiator_n(br, n, Polynomial(a), Polynomial(b), Polynomial(c)).is_zero()) {
                            if (residual++ == 0)
                                first = {{"h", n - 1}, {"args", {A.to_string(a), A.to_string(b), A.to_string(c)}}};
                        }
                }
    } else if (check == "antisymmetry") {
        const auto words = A.basis(std::min(3, pc.truncation()));
        for (auto& a : words)
            for (auto& b : words) {
                ++tuples;
                const bool odd = (A.degree(a) & 1) && (A.degree(b) & 1);
                for (int s = 0; s <= top; ++s) {
                    auto u = br.coeffs[s](Polynomial(a), Polynomial(b));
                    auto v = br.coeffs[s](Polynomial(b), Polynomial(a));
                    if (!(u + (odd ? -v : v)).is_zero() && residual++ == 0)
                        first = {{"h", s}, {"args", {A.to_string(a), A.to_string(b)}}};
                }
            }
    } else {
        const auto words = A.basis(std::min(2, pc.truncation()));
        for (auto& a : words)
            for (auto& b : words)
                for (auto& c : words) {
                    ++tuples;
                    const Polynomial f(a), g(b), w(c);
                    for (int n = 0; n <= M; ++n) {
                        Polynomial r;
                        for (int s = 0; s <= n; ++s) {
                            r += br.coeffs[s](br.coeffs[n - s](f, g), w);
                            r -= br.coeffs[s](f, br.coeffs[n - s](g, w));
                        }
                        if (!r.is_zero() && residual++ == 0)
                            first = {{"h", n}, {"args", {A.to_string(a), A.to_string(b), A.to_string(c)}}};
                    }
                }
    }
    j[check == "assoc" ? "assoc_residual" : check + "_residual"] = residual;
    j["up_to_h"] = top;
    j["tuples"] = tuples;
    if (residual)
        j["first_failure"] = first;
    return {dump(j), residual == 0};
}

/* ---------------- selftest ---------------- */

Outcome cmd_selftest(const Options& o, std::ostream& out)
{
    AcceptanceOptions ao;
    if (!o.check.empty()) {
        std::stringstream ss(o.check);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                const int id = std::stoi(tok);
                if (id < 1 || id > 10)
                    throw Usage("selftest: criteria are numbered 1..10");
                ao.only.insert(id);
            } catch (const std::logic_error&) {
                throw Usage("selftest: --check takes a comma separated list of criterion numbers");
            }
        }
    }
    if (o.format != "json" && o.format != "text")
        throw Usage("selftest: --format must be text or json");
    const bool stream = o.format == "text" && o.output.empty();
    if (stream)
        ao.on_result = [&out](const CriterionResult& r) { out << format_line(r) << std::endl; };
    auto rs = run_acceptance(ao);
    bool all = true;
    for (auto& r : rs)
        all = all && r.pass;
    if (o.format == "json")
        return {dump(to_json(rs)), all};
    std::string text;
    if (!stream)
        for (auto& r : rs)
            text += format_line(r) + "\n";
    return {text, all};
}

std::string resolve_output(const std::string& path)
{
    std::filesystem::path p(path);
    if (p.is_relative())
        if (const char* dir = std::getenv("ODLAB_OUTPUT_DIR"); dir && *dir)
            p = std::filesystem::path(dir) / p;
    return p.string();
}

void emit(const Options& o, const std::string& text, std::ostream& out)
{
    if (text.empty())
        return;
    const bool nl = text.back() != '\n';
    if (o.output.empty()) {
        out << text << (nl ? "\n" : "");
        return;
    }
    const auto path = resolve_output(o.output);
    std::ofstream f(path);
    if (!f)
        throw ConfigError(path + ": cannot write output");
    f << text << (nl ? "\n" : "");
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"odlab: operator orders, operad multifiltrations and formal brackets"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--config", o.config, "JSON config (schema odlab/1)");
    app.add_option("--arity", o.arity, "arity for filt");
    app.add_option("--max-order", o.max_order, "largest order tested by order");
    app.add_option("--kind", o.kind, "order: derivation|diffop|both; filt: standard|prestandard; "
                                     "bracket: big|superbig|terilla");
    app.add_option("--check", o.check, "filt: axioms|saturation; tight: tight; "
                                       "bracket: jacobi|antisymmetry|assoc|order; selftest: criterion list");
    app.add_option("--output", o.output, "write the document here instead of stdout");
    app.add_option("--format", o.format, "json|csv (filt), json|text (selftest)");
    app.add_option("--threads", o.threads, "OpenMP threads; results do not depend on it");
    auto* s_order = app.add_subcommand("order", "derivation and differential-operator orders of a linear operator");
    auto* s_filt = app.add_subcommand("filt", "lattice of a standard multifiltration");
    auto* s_tight = app.add_subcommand("tight", "tightness of an operad presentation");
    auto* s_bracket = app.add_subcommand("bracket", "sweeps of the big, superbig and Terilla structures");
    auto* s_self = app.add_subcommand("selftest", "acceptance criteria 1-10");
    for (auto* s : {s_order, s_filt, s_tight, s_bracket, s_self})
        s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << dump({{"schema", kSchemaTag}, {"error", "usage"}, {"message", e.what()}}) << "\n";
        return exit_usage;
    }

    try {
        if (o.threads < 0)
            throw Usage("--threads must be >= 0");
        if (o.threads > 0)
            omp_set_num_threads(o.threads);
        if (s_self->parsed() && o.format == "json" && app.count("--format") == 0)
            o.format = "text";
        Outcome r;
        if (s_order->parsed())
            r = cmd_order(o);
        else if (s_filt->parsed())
            r = cmd_filt(o);
        else if (s_tight->parsed())
            r = cmd_tight(o);
        else if (s_bracket->parsed())
            r = cmd_bracket(o);
        else
            r = cmd_selftest(o, out);
        emit(o, r.text, out);
        return r.ok ? exit_ok : exit_check_failed;
    } catch (const Usage& e) {
        err << dump({{"schema", kSchemaTag}, {"error", "usage"}, {"message", e.what()}}) << "\n";
        return exit_usage;
    } catch (const ConfigError& e) {
        err << dump({{"schema", kSchemaTag}, {"error", "config"}, {"message", e.what()}}) << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << dump({{"schema", kSchemaTag}, {"error", "config"}, {"message", e.what()}}) << "\n";
        return exit_usage;
    }
}

} // namespace odlab
