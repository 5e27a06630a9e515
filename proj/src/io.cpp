#include "odlab/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace odlab {

namespace {

std::string line_col(const std::string& text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

void check_keys(const nlohmann::json& j, const std::string& where, const std::set<std::string>& allowed,
                std::vector<std::string>& errs)
{
    for (auto& [k, v] : j.items())
        if (!allowed.count(k))
            errs.push_back(where + ": unknown key '" + k + "'");
}

void check_int(const nlohmann::json& j, const std::string& key, const std::string& where, int lo,
               std::vector<std::string>& errs)
{
    if (!j.contains(key))
        return;
    if (!j[key].is_number_integer())
        errs.push_back(where + "." + key + ": expected an integer");
    else if (j[key].get<long long>() < lo)
        errs.push_back(where + "." + key + ": must be >= " + std::to_string(lo));
}

void validate_algebra(const nlohmann::json& a, std::vector<std::string>& errs)
{
    if (!a.is_object()) {
        errs.push_back("algebra: expected an object");
        return;
    }
    check_keys(a, "algebra", {"generators", "truncation", "kind"}, errs);
    if (!a.contains("generators") || !a["generators"].is_array() || a["generators"].empty())
        errs.push_back("algebra.generators: expected a nonempty array");
    else
        for (auto& g : a["generators"]) {
            if (!g.is_object() || !g.contains("name") || !g["name"].is_string()) {
                errs.push_back("algebra.generators: each entry needs a string 'name'");
                continue;
            }
            check_keys(g, "algebra.generators[" + g["name"].get<std::string>() + "]", {"name", "degree"}, errs);
            if (g.contains("degree") && !g["degree"].is_number_integer())
                errs.push_back("algebra.generators[" + g["name"].get<std::string>() + "].degree: expected an integer");
        }
    check_int(a, "truncation", "algebra", 0, errs);
    if (a.contains("kind") && (!a["kind"].is_string() ||
                               (a["kind"] != "symmetric" && a["kind"] != "exterior")))
        errs.push_back("algebra.kind: expected \"symmetric\" or \"exterior\"");
}

void validate_operator(const nlohmann::json& o, std::vector<std::string>& errs)
{
    if (!o.is_object()) {
        errs.push_back("operator: expected an object");
        return;
    }
    check_keys(o, "operator", {"degree", "terms", "action"}, errs);
    if (o.contains("degree") && !o["degree"].is_number_integer())
        errs.push_back("operator.degree: expected an integer");
    const bool t = o.contains("terms"), a = o.contains("action");
    if (t == a)
        errs.push_back("operator: exactly one of 'terms' or 'action' is required");
    if (t) {
        if (!o["terms"].is_array())
            errs.push_back("operator.terms: expected an array");
        else
            for (auto& term : o["terms"]) {
                if (!term.is_object()) {
                    errs.push_back("operator.terms: each entry must be an object");
                    continue;
                }
                check_keys(term, "operator.terms[]", {"coeff", "mult", "partials"}, errs);
                if (term.contains("coeff") && !term["coeff"].is_string() && !term["coeff"].is_number_integer())
                    errs.push_back("operator.terms[].coeff: expected a rational string or an integer");
                if (term.contains("mult") && !term["mult"].is_string())
                    errs.push_back("operator.terms[].mult: expected a polynomial string");
                if (term.contains("partials") && !term["partials"].is_array())
                    errs.push_back("operator.terms[].partials: expected an array of generator names");
            }
    }
    if (a) {
        if (!o["action"].is_object())
            errs.push_back("operator.action: expected an object mapping monomials to polynomials");
        else
            for (auto& [k, v] : o["action"].items())
                if (!v.is_string())
                    errs.push_back("operator.action[" + k + "]: expected a polynomial string");
    }
}

void validate_operad(const nlohmann::json& p, std::vector<std::string>& errs)
{
    if (!p.is_object()) {
        errs.push_back("operad: expected an object");
        return;
    }
    check_keys(p, "operad", {"generators", "relations", "max_arity", "max_weight"}, errs);
    if (!p.contains("generators") || !p["generators"].is_array() || p["generators"].empty())
        errs.push_back("operad.generators: expected a nonempty array");
    else
        for (auto& g : p["generators"]) {
            if (!g.is_object() || !g.contains("name") || !g["name"].is_string()) {
                errs.push_back("operad.generators: each entry needs a string 'name'");
                continue;
            }
            const std::string w = "operad.generators[" + g["name"].get<std::string>() + "]";
            check_keys(g, w, {"name", "arity", "degree", "symmetry"}, errs);
            check_int(g, "arity", w, 1, errs);
            if (g.contains("degree") && !g["degree"].is_number_integer())
                errs.push_back(w + ".degree: expected an integer");
            if (g.contains("symmetry")) {
                static const std::set<std::string> ok{"symmetric", "trivial", "antisymmetric",
                                                      "sign",      "regular", "none"};
                if (!g["symmetry"].is_string() || !ok.count(g["symmetry"].get<std::string>()))
                    errs.push_back(w + ".symmetry: unknown value");
            }
        }
    check_int(p, "max_arity", "operad", 1, errs);
    if (p.contains("max_weight") && !p["max_weight"].is_number_integer())
        errs.push_back("operad.max_weight: expected an integer");
    if (p.contains("relations")) {
        if (!p["relations"].is_array())
            errs.push_back("operad.relations: expected an array");
        else
            for (auto& r : p["relations"])
                if (!r.is_string() && !(r.is_object() && r.contains("terms") && r["terms"].is_array()))
                    errs.push_back("operad.relations: each entry is a string or an object with 'terms'");
    }
}

void validate_bracket(const nlohmann::json& b, std::vector<std::string>& errs)
{
    if (!b.is_object()) {
        errs.push_back("bracket: expected an object");
        return;
    }
    check_keys(b, "bracket", {"degrees", "D", "M"}, errs);
    if (b.contains("degrees")) {
        if (!b["degrees"].is_array() || b["degrees"].empty())
            errs.push_back("bracket.degrees: expected a nonempty array of integers");
        else
            for (auto& d : b["degrees"])
                if (!d.is_number_integer())
                    errs.push_back("bracket.degrees: expected integers");
    }
    check_int(b, "D", "bracket", 0, errs);
    check_int(b, "M", "bracket", 0, errs);
}

Q coeff_of(const nlohmann::json& c)
{
    if (c.is_number_integer())
        return Q(c.get<long>());
    return q_from_string(c.get<std::string>());
}

} // namespace

nlohmann::json parse_json_text(const std::string& text, const std::string& origin)
{
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(origin + ":" + line_col(text, e.byte) + ": invalid JSON: " + e.what());
    }
}

nlohmann::json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

std::vector<std::string> validate_config(const nlohmann::json& j)
{
    std::vector<std::string> errs;
    if (!j.is_object()) {
        errs.push_back("config: expected a JSON object");
        return errs;
    }
    check_keys(j, "config", {"schema", "algebra", "operator", "operad", "bracket", "max_order", "arity"}, errs);
    if (j.contains("schema") && j["schema"] != kSchemaTag)
        errs.push_back(std::string("config.schema: expected \"") + kSchemaTag + "\"");
    if (j.contains("algebra"))
        validate_algebra(j["algebra"], errs);
    if (j.contains("operator")) {
        validate_operator(j["operator"], errs);
        if (!j.contains("algebra"))
            errs.push_back("config: 'operator' needs an 'algebra'");
    }
    if (j.contains("operad"))
        validate_operad(j["operad"], errs);
    if (j.contains("bracket"))
        validate_bracket(j["bracket"], errs);
    check_int(j, "max_order", "config", 0, errs);
    check_int(j, "arity", "config", 1, errs);
    return errs;
}

LinearOperator operator_from_json(const nlohmann::json& j, const AlgebraContext& ctx)
{
    const int degree = j.value("degree", 0);
    if (j.contains("action")) {
        std::map<Monomial, Polynomial> tab;
        for (auto& [k, v] : j["action"].items())
            tab[parse_monomial(k, ctx)] = parse_polynomial(v.get<std::string>(), ctx);
        return LinearOperator::from_table(ctx, degree, std::move(tab));
    }
    std::optional<LinearOperator> sum;
    for (auto& t : j.at("terms")) {
        const Q c = t.contains("coeff") ? coeff_of(t["coeff"]) : Q(1);
        const Polynomial m = t.contains("mult") ? parse_polynomial(t["mult"].get<std::string>(), ctx)
                                                : Polynomial::constant(1);
        LinearOperator op = left_mult(m, ctx);
        for (auto& p : t.value("partials", nlohmann::json::array())) {
            auto idx = ctx.index_of(p.get<std::string>());
            if (!idx)
                throw ConfigError("operator: unknown generator '" + p.get<std::string>() + "' in partials");
            op = compose(op, partial(*idx, ctx));
        }
        op = op.scaled(c);
        if (op.degree() != degree)
            throw ConfigError("operator: term of degree " + std::to_string(op.degree()) +
                              " in an operator of degree " + std::to_string(degree));
        sum = sum ? *sum + op : op;
    }
    return sum ? *sum : LinearOperator::zero(ctx, degree);
}

RunConfig parse_run_config(const nlohmann::json& j)
{
    auto errs = validate_config(j);
    if (!errs.empty()) {
        std::string msg = "invalid config:";
        for (auto& e : errs)
            msg += "\n  " + e;
        throw ConfigError(msg);
    }
    RunConfig rc;
    try {
        if (j.contains("algebra"))
            rc.algebra = AlgebraContext::from_json(j["algebra"]);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (j.contains("operator"))
        rc.op = j["operator"];
    if (j.contains("operad"))
        rc.operad = j["operad"];
    if (j.contains("bracket"))
        rc.bracket = j["bracket"];
    rc.max_order = j.value("max_order", 3);
    rc.arity = j.value("arity", 3);
    return rc;
}

std::string dump(const nlohmann::json& j) { return j.dump(); }

} // namespace odlab
