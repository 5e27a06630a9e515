#include "odlab/graded_poly.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace odlab {

std::string q_to_string(const Q& q)
{
    return q.get_str();
}

Q q_from_string(std::string_view s)
{
    Q q;
    std::string str(s);
    if (str.empty() || q.set_str(str, 10) != 0)
        throw Error("bad rational: '" + str + "'");
    q.canonicalize();
    if (q.get_den() == 0)
        throw Error("zero denominator: '" + str + "'");
    return q;
}

int Monomial::exponent(std::size_t gen) const
{
    return static_cast<int>(std::count(f_.begin(), f_.end(), gen));
}

/* ---------------- AlgebraContext ---------------- */

AlgebraContext::AlgebraContext() : AlgebraContext(std::vector<Generator>{}, 6) {}

AlgebraContext::AlgebraContext(std::vector<Generator> gens, int truncation, AlgebraKind kind)
{
    if (truncation < 1)
        throw Error("truncation degree must be >= 1");
    if (gens.size() > 60000)
        throw Error("too many generators");
    std::set<std::string> names;
    for (auto& g : gens) {
        if (g.name.empty())
            throw Error("empty generator name");
        if (!names.insert(g.name).second)
            throw Error("duplicate generator name: " + g.name);
    }
    auto d = std::make_shared<Data>();
    d->gens = std::move(gens);
    d->D = truncation;
    d->kind = kind;
    d_ = d;
    d->basis = basis(truncation);
    for (std::size_t i = 0; i < d->basis.size(); ++i)
        d->index.emplace(d->basis[i], i);
}

std::optional<std::size_t> AlgebraContext::index_of(std::string_view name) const
{
    for (std::size_t i = 0; i < size(); ++i)
        if (d_->gens[i].name == name)
            return i;
    return std::nullopt;
}

int AlgebraContext::degree(const Monomial& m) const
{
    int s = 0;
    for (auto g : m.factors())
        s += degree(g);
    return s;
}

std::vector<Monomial> AlgebraContext::basis(int len) const
{
    std::vector<Monomial> out;
    out.emplace_back();
    std::vector<std::vector<std::uint16_t>> layer{{}};
    const auto n = static_cast<std::uint16_t>(size());
    for (int l = 1; l <= len; ++l) {
        std::vector<std::vector<std::uint16_t>> next;
        for (auto& w : layer) {
            std::uint16_t start = w.empty() ? 0 : w.back();
            for (std::uint16_t g = start; g < n; ++g) {
                if (!w.empty() && w.back() == g && square_zero(g))
                    continue;
                auto v = w;
                v.push_back(g);
                next.push_back(std::move(v));
            }
        }
        for (auto& w : next)
            out.emplace_back(w);
        layer = std::move(next);
        if (layer.empty())
            break;
    }
    return out;
}

std::optional<std::size_t> AlgebraContext::basis_index(const Monomial& m) const
{
    auto it = d_->index.find(m);
    if (it == d_->index.end())
        return std::nullopt;
    return it->second;
}

std::string AlgebraContext::to_string(const Monomial& m) const
{
    if (m.is_one())
        return "1";
    std::string s;
    const auto& f = m.factors();
    for (std::size_t i = 0; i < f.size();) {
        std::size_t j = i;
        while (j < f.size() && f[j] == f[i])
            ++j;
        if (!s.empty())
            s += '*';
        s += name(f[i]);
        if (j - i > 1)
            s += "^" + std::to_string(j - i);
        i = j;
    }
    return s;
}

AlgebraContext AlgebraContext::with_truncation(int D) const
{
    return AlgebraContext(d_->gens, D, d_->kind);
}

bool operator==(const AlgebraContext& a, const AlgebraContext& b)
{
    if (a.d_ == b.d_)
        return true;
    if (a.d_->D != b.d_->D || a.d_->kind != b.d_->kind || a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a.d_->gens[i].name != b.d_->gens[i].name || a.d_->gens[i].degree != b.d_->gens[i].degree)
            return false;
    return true;
}

AlgebraContext AlgebraContext::from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw Error("algebra: expected an object");
    if (!j.contains("generators") || !j["generators"].is_array())
        throw Error("algebra: missing 'generators' array");
    std::vector<Generator> gens;
    for (auto& g : j["generators"]) {
        if (!g.is_object() || !g.contains("name") || !g["name"].is_string())
            throw Error("algebra: generator needs a string 'name'");
        Generator gen;
        gen.name = g["name"].get<std::string>();
        if (g.contains("degree")) {
            if (!g["degree"].is_number_integer())
                throw Error("algebra: generator degree must be an integer");
            gen.degree = g["degree"].get<int>();
        }
        gens.push_back(gen);
    }
    int D = 6;
    if (j.contains("truncation")) {
        if (!j["truncation"].is_number_integer())
            throw Error("algebra: 'truncation' must be an integer");
        D = j["truncation"].get<int>();
    }
    AlgebraKind kind = AlgebraKind::symmetric;
    if (j.contains("kind")) {
        auto k = j["kind"].get<std::string>();
        if (k == "exterior")
            kind = AlgebraKind::exterior;
        else if (k != "symmetric")
            throw Error("algebra: unknown kind '" + k + "'");
    }
    return AlgebraContext(std::move(gens), D, kind);
}

nlohmann::json AlgebraContext::to_json() const
{
    nlohmann::json gens = nlohmann::json::array();
    for (auto& g : d_->gens)
        gens.push_back({{"name", g.name}, {"degree", g.degree}});
    nlohmann::json j{{"generators", gens}, {"truncation", d_->D}};
    if (d_->kind == AlgebraKind::exterior)
        j["kind"] = "exterior";
    return j;
}

/* ---------------- signs ---------------- */

SignedMonomial word_to_monomial(const AlgebraContext& ctx, std::span<const std::uint16_t> word)
{
    std::vector<std::uint16_t> w(word.begin(), word.end());
    bool odd = false;
    // insertion sort, tracking Koszul swaps
    for (std::size_t i = 1; i < w.size(); ++i) {
        for (std::size_t j = i; j > 0 && w[j - 1] > w[j]; --j) {
            if (ctx.swap_odd(w[j - 1], w[j]))
                odd = !odd;
            std::swap(w[j - 1], w[j]);
        }
    }
    for (std::size_t i = 1; i < w.size(); ++i)
        if (w[i] == w[i - 1] && ctx.square_zero(w[i]))
            return {0, Monomial()};
    return {sign_of(odd), Monomial(std::move(w))};
}

int koszul_sign(std::span<const int> degrees, std::span<const int> perm)
{
    bool odd = false;
    for (std::size_t k = 0; k < perm.size(); ++k)
        for (std::size_t l = k + 1; l < perm.size(); ++l)
            if (perm[k] > perm[l] && (degrees[perm[k]] & 1) && (degrees[perm[l]] & 1))
                odd = !odd;
    return sign_of(odd);
}

int koszul_sign(const AlgebraContext&, std::span<const int> degrees, std::span<const int> perm)
{
    return koszul_sign(degrees, perm);
}

SignedMonomial multiply(const AlgebraContext& ctx, const Monomial& a, const Monomial& b)
{
    const auto& fa = a.factors();
    const auto& fb = b.factors();
    bool odd = false;
    for (auto y : fb) {
        for (auto it = fa.rbegin(); it != fa.rend() && *it > y; ++it)
            if (ctx.swap_odd(*it, y))
                odd = !odd;
    }
    std::vector<std::uint16_t> m;
    m.reserve(fa.size() + fb.size());
    std::merge(fa.begin(), fa.end(), fb.begin(), fb.end(), std::back_inserter(m));
    for (std::size_t i = 1; i < m.size(); ++i)
        if (m[i] == m[i - 1] && ctx.square_zero(m[i]))
            return {0, Monomial()};
    return {sign_of(odd), Monomial(std::move(m))};
}

/* ---------------- Polynomial ---------------- */

Polynomial::Polynomial(const Monomial& m, Q c)
{
    if (c != 0)
        t_.emplace(m, std::move(c));
}

Polynomial Polynomial::constant(Q c)
{
    return Polynomial(Monomial(), std::move(c));
}

Q Polynomial::coeff(const Monomial& m) const
{
    auto it = t_.find(m);
    return it == t_.end() ? Q(0) : it->second;
}

int Polynomial::max_length() const
{
    return t_.empty() ? -1 : t_.rbegin()->first.length();
}

void Polynomial::add_term(const Monomial& m, const Q& c)
{
    if (c == 0)
        return;
    auto [it, fresh] = t_.try_emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0)
            t_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& o)
{
    for (auto& [m, c] : o.t_)
        add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o)
{
    for (auto& [m, c] : o.t_)
        add_term(m, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Q& c)
{
    if (c == 0) {
        t_.clear();
        return *this;
    }
    for (auto& [m, v] : t_)
        v *= c;
    return *this;
}

bool Polynomial::truncate(int len)
{
    bool hit = false;
    for (auto it = t_.begin(); it != t_.end();) {
        if (it->first.length() > len) {
            it = t_.erase(it);
            hit = true;
        } else {
            ++it;
        }
    }
    return hit;
}

std::optional<int> homogeneous_degree(const AlgebraContext& ctx, const Polynomial& p)
{
    std::optional<int> d;
    for (auto& [m, c] : p.terms()) {
        int k = ctx.degree(m);
        if (d && *d != k)
            return std::nullopt;
        d = k;
    }
    return d;
}

bool parity_homogeneous(const AlgebraContext& ctx, const Polynomial& p, int* parity)
{
    int par = -1;
    for (auto& [m, c] : p.terms()) {
        int k = ctx.degree(m) & 1;
        if (par >= 0 && par != k)
            return false;
        par = k;
    }
    if (parity)
        *parity = par < 0 ? 0 : par;
    return true;
}

Polynomial multiply_exact(const Polynomial& p, const Polynomial& q, const AlgebraContext& ctx)
{
    Polynomial r;
    for (auto& [a, ca] : p.terms())
        for (auto& [b, cb] : q.terms()) {
            auto sm = multiply(ctx, a, b);
            if (sm.sign == 0)
                continue;
            Q c = ca * cb;
            if (sm.sign < 0)
                c = -c;
            r.add_term(sm.mono, c);
        }
    return r;
}

Polynomial multiply(const Polynomial& p, const Polynomial& q, const AlgebraContext& ctx, bool* truncated)
{
    check_member(p, ctx);
    check_member(q, ctx);
    const int D = ctx.truncation();
    Polynomial r;
    bool hit = false;
    for (auto& [a, ca] : p.terms())
        for (auto& [b, cb] : q.terms()) {
            if (a.length() + b.length() > D) {
                hit = true;
                continue;
            }
            auto sm = multiply(ctx, a, b);
            if (sm.sign == 0)
                continue;
            Q c = ca * cb;
            if (sm.sign < 0)
                c = -c;
            r.add_term(sm.mono, c);
        }
    if (truncated && hit)
        *truncated = true;
    return r;
}

namespace {

Polynomial derivative(const Polynomial& p, std::size_t gen, const AlgebraContext& ctx, bool left)
{
    if (ctx.kind() != AlgebraKind::symmetric)
        throw ContextMismatch("partial derivatives need a symmetric-algebra context");
    if (gen >= ctx.size())
        throw ContextMismatch("generator index out of range");
    Polynomial r;
    for (auto& [m, c] : p.terms()) {
        const auto& f = m.factors();
        auto first = std::find(f.begin(), f.end(), gen);
        if (first == f.end())
            continue;
        auto last = std::find_if(first, f.end(), [&](auto g) { return g != gen; });
        const long e = last - first;
        bool odd = false;
        if (left) {
            for (auto it = f.begin(); it != first; ++it)
                if (ctx.swap_odd(*it, gen))
                    odd = !odd;
        } else {
            for (auto it = last; it != f.end(); ++it)
                if (ctx.swap_odd(*it, gen))
                    odd = !odd;
        }
        std::vector<std::uint16_t> rest(f.begin(), first);
        rest.insert(rest.end(), first + 1, f.end());
        Q v = c * e;
        if (odd)
            v = -v;
        r.add_term(Monomial(std::move(rest)), v);
    }
    return r;
}

} // namespace

Polynomial left_derivative(const Polynomial& p, std::size_t gen, const AlgebraContext& ctx)
{
    return derivative(p, gen, ctx, true);
}

Polynomial right_derivative(const Polynomial& p, std::size_t gen, const AlgebraContext& ctx)
{
    return derivative(p, gen, ctx, false);
}

Polynomial set_to_zero(const Polynomial& p, const std::vector<bool>& gens)
{
    Polynomial r;
    for (auto& [m, c] : p.terms()) {
        bool keep = true;
        for (auto g : m.factors())
            if (g < gens.size() && gens[g]) {
                keep = false;
                break;
            }
        if (keep)
            r.add_term(m, c);
    }
    return r;
}

void check_member(const Polynomial& p, const AlgebraContext& ctx)
{
    for (auto& [m, c] : p.terms()) {
        const auto& f = m.factors();
        if (m.length() > ctx.truncation())
            throw ContextMismatch("monomial longer than the truncation");
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (f[i] >= ctx.size())
                throw ContextMismatch("monomial uses a generator outside the context");
            if (i > 0 && (f[i] < f[i - 1] || (f[i] == f[i - 1] && ctx.square_zero(f[i]))))
                throw ContextMismatch("monomial not in canonical form for this context");
        }
    }
}

std::string to_string(const Polynomial& p, const AlgebraContext& ctx)
{
    if (p.is_zero())
        return "0";
    std::string s;
    bool first = true;
    for (auto& [m, c] : p.terms()) {
        Q a = abs(c);
        if (first)
            s += c < 0 ? "-" : "";
        else
            s += c < 0 ? " - " : " + ";
        first = false;
        if (m.is_one())
            s += q_to_string(a);
        else if (a == 1)
            s += ctx.to_string(m);
        else
            s += q_to_string(a) + "*" + ctx.to_string(m);
    }
    return s;
}

namespace {

class PolyParser {
  public:
    PolyParser(std::string_view s, const AlgebraContext& ctx) : s_(s), ctx_(ctx) {}

    Polynomial parse()
    {
        Polynomial r;
        skip();
        if (pos_ >= s_.size())
            fail("empty expression");
        bool first = true;
        while (true) {
            skip();
            Q sign = 1;
            if (peek() == '+' || peek() == '-') {
                if (peek() == '-')
                    sign = -1;
                ++pos_;
            } else if (!first) {
                fail("expected '+' or '-'");
            }
            first = false;
            r += term() * sign;
            skip();
            if (pos_ >= s_.size())
                break;
        }
        return r;
    }

  private:
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw Error("polynomial parse error at column " + std::to_string(pos_ + 1) + ": " + msg + " in '" +
                    std::string(s_) + "'");
    }

    std::string integer()
    {
        std::size_t b = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (b == pos_)
            fail("expected an integer");
        return std::string(s_.substr(b, pos_ - b));
    }

    Polynomial term()
    {
        Q coeff = 1;
        std::vector<std::uint16_t> word;
        bool any = false;
        while (true) {
            skip();
            char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c))) {
                std::string num = integer();
                skip();
                if (peek() == '/') {
                    ++pos_;
                    skip();
                    num += "/" + integer();
                }
                coeff *= q_from_string(num);
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t b = pos_;
                while (pos_ < s_.size() &&
                       (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                    ++pos_;
                std::string name(s_.substr(b, pos_ - b));
                auto idx = ctx_.index_of(name);
                if (!idx)
                    fail("unknown generator '" + name + "'");
                int e = 1;
                skip();
                if (peek() == '^') {
                    ++pos_;
                    skip();
                    e = std::stoi(integer());
                }
                for (int k = 0; k < e; ++k)
                    word.push_back(static_cast<std::uint16_t>(*idx));
            } else if (c == '(' ) {
                fail("parentheses are not supported");
            } else {
                fail("expected a factor");
            }
            any = true;
            skip();
            if (peek() == '*') {
                ++pos_;
                continue;
            }
            break;
        }
        if (!any)
            fail("empty term");
        auto sm = word_to_monomial(ctx_, word);
        if (sm.sign == 0)
            return {};
        return Polynomial(sm.mono, coeff * sm.sign);
    }

    std::string_view s_;
    const AlgebraContext& ctx_;
    std::size_t pos_ = 0;
};

} // namespace

Polynomial parse_polynomial(std::string_view text, const AlgebraContext& ctx)
{
    return PolyParser(text, ctx).parse();
}

Monomial parse_monomial(std::string_view text, const AlgebraContext& ctx)
{
    auto p = parse_polynomial(text, ctx);
    if (p.size() != 1 || p.terms().begin()->second != 1)
        throw Error("not a basis monomial: '" + std::string(text) + "'");
    return p.terms().begin()->first;
}

/* ---------------- suspension isomorphisms ---------------- */

AlgebraContext exterior_context(const std::vector<Generator>& w, int D)
{
    return AlgebraContext(w, D, AlgebraKind::exterior);
}

namespace {
AlgebraContext shifted(const std::vector<Generator>& w, int D, int shift, const char* prefix)
{
    std::vector<Generator> g;
    for (auto& x : w)
        g.push_back({prefix + x.name, x.degree + shift});
    return AlgebraContext(std::move(g), D);
}
} // namespace

AlgebraContext up_context(const std::vector<Generator>& w, int D)
{
    return shifted(w, D, 1, "up_");
}

AlgebraContext down_context(const std::vector<Generator>& w, int D)
{
    return shifted(w, D, -1, "down_");
}

Polynomial suspend_iso(const Polynomial& u, SuspendDirection dir, const AlgebraContext& source,
                       const AlgebraContext& target)
{
    check_member(u, source);
    if (source.size() != target.size())
        throw ContextMismatch("suspension: generator counts differ");
    int shift = 0;
    AlgebraKind src_kind = AlgebraKind::symmetric;
    AlgebraKind dst_kind = AlgebraKind::symmetric;
    switch (dir) {
    case SuspendDirection::f: shift = 1; src_kind = AlgebraKind::exterior; break;
    case SuspendDirection::f_inv: shift = -1; dst_kind = AlgebraKind::exterior; break;
    case SuspendDirection::g: shift = 2; break;
    case SuspendDirection::g_inv: shift = -2; break;
    }
    if (source.kind() != src_kind || target.kind() != dst_kind)
        throw ContextMismatch("suspension: wrong algebra kinds");
    for (std::size_t i = 0; i < source.size(); ++i)
        if (target.degree(i) != source.degree(i) + shift)
            throw ContextMismatch("suspension: degrees are not shifted correctly");

    std::optional<int> len;
    for (auto& [m, c] : u.terms()) {
        if (len && *len != m.length())
            throw Error("suspension: input not homogeneous in word length");
        len = m.length();
    }

    const bool use_sign = dir == SuspendDirection::f || dir == SuspendDirection::f_inv;
    // degrees on the exterior side
    const AlgebraContext& ext = dir == SuspendDirection::f ? source : target;
    Polynomial r;
    for (auto& [m, c] : u.terms()) {
        bool odd = false;
        if (use_sign) {
            const auto& f = m.factors();
            const long n = static_cast<long>(f.size());
            // f_{a+1}(u ∧ w) = (-1)^{|u|} f_a(u) ↑w, unrolled
            for (long j = 0; j < n; ++j)
                if ((ext.degree(f[j]) & 1) && ((n - 1 - j) & 1))
                    odd = !odd;
        }
        r.add_term(m, odd ? Q(-c) : c);
    }
    return r;
}

} // namespace odlab
