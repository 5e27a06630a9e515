#include "odlab/brackets.hpp"
#include "odlab/operad.hpp"

#include <algorithm>
#include <functional>

namespace odlab {

namespace {

Q factorial(int n)
{
    Q r = 1;
    for (int k = 2; k <= n; ++k)
        r *= k;
    return r;
}

std::vector<Generator> paired_generators(const std::vector<int>& degrees, PairingStyle style)
{
    std::vector<Generator> g;
    const std::size_t d = degrees.size();
    for (std::size_t i = 0; i < d; ++i) {
        if (style == PairingStyle::big)
            g.push_back({"psi" + std::to_string(i + 1), degrees[i] + 1});
        else
            g.push_back({"e" + std::to_string(i + 1), degrees[i]});
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (style == PairingStyle::big)
            g.push_back({"eta" + std::to_string(i + 1), 1 - degrees[i]});
        else
            g.push_back({"alpha" + std::to_string(i + 1), -degrees[i]});
    }
    return g;
}

// expand multilinearly over the terms of each argument
Polynomial expand(std::span<const Polynomial> args, const std::function<Polynomial(std::span<const Monomial>)>& fn)
{
    Polynomial out;
    std::vector<Monomial> ms(args.size());
    std::function<void(std::size_t, Q)> rec = [&](std::size_t k, Q c) {
        if (k == args.size()) {
            out += fn(ms) * c;
            return;
        }
        for (auto& [m, x] : args[k].terms()) {
            ms[k] = m;
            rec(k + 1, c * x);
        }
    };
    rec(0, 1);
    return out;
}

int mono_parity(const AlgebraContext& ctx, const Monomial& m, int shift) { return (ctx.degree(m) - shift) & 1; }

} // namespace

/* ---------------- PairedContext ---------------- */

PairedContext::PairedContext(std::vector<int> degrees, int D, int M, PairingStyle style)
    : degrees_(std::move(degrees)), D_(D), M_(M), style_(style),
      ctx_(paired_generators(degrees_, style), D, AlgebraKind::symmetric)
{
    if (degrees_.empty())
        throw Error("paired context: V must be nonzero");
    if (M < 0 || D < 0)
        throw Error("paired context: truncations must be nonnegative");
}

std::vector<std::pair<std::size_t, std::size_t>> PairedContext::pairs() const
{
    std::vector<std::pair<std::size_t, std::size_t>> p;
    for (std::size_t i = 0; i < dim(); ++i)
        p.emplace_back(upper(i), lower(i));
    return p;
}

PairedContext PairedContext::from_json(const nlohmann::json& j, PairingStyle style)
{
    std::vector<int> deg = j.value("degrees", std::vector<int>{0, 0});
    return PairedContext(deg, j.value("D", 6), j.value("M", 3), style);
}

/* ---------------- HSeries ---------------- */

bool HSeries::is_zero() const
{
    return std::all_of(c.begin(), c.end(), [](auto& p) { return p.is_zero(); });
}

HSeries& HSeries::operator+=(const HSeries& o)
{
    if (o.c.size() > c.size())
        c.resize(o.c.size());
    for (std::size_t s = 0; s < o.c.size(); ++s)
        c[s] += o.c[s];
    truncated = truncated || o.truncated;
    return *this;
}

HSeries& HSeries::operator-=(const HSeries& o)
{
    return *this += o.scaled(-1);
}

HSeries HSeries::scaled(const Q& x) const
{
    HSeries r = *this;
    for (auto& p : r.c)
        p *= x;
    return r;
}

/* ---------------- contractions ---------------- */

Polynomial contraction(const Polynomial& f, const Polynomial& g, int n,
                       const std::vector<std::pair<std::size_t, std::size_t>>& pairs, const AlgebraContext& ctx)
{
    Polynomial out;
    std::function<void(const Polynomial&, const Polynomial&, int)> rec = [&](const Polynomial& F,
                                                                           const Polynomial& G, int depth) {
        if (depth == n) {
            out += multiply_exact(F, G, ctx);
            return;
        }
        for (auto& [a, b] : pairs) {
            auto F1 = right_derivative(F, a, ctx);
            if (F1.is_zero())
                continue;
            auto G1 = left_derivative(G, b, ctx);
            if (G1.is_zero())
                continue;
            rec(F1, G1, depth + 1);
        }
    };
    rec(f, g, 0);
    return out;
}

namespace {

// (f ⋆ g) with Ωⁿ/n! placed at h^{n - shift}
HSeries star_poly(const Polynomial& f, const Polynomial& g, const PairedContext& pc)
{
    const int M = pc.h_truncation();
    const int shift = pc.h_shift();
    HSeries r(M);
    const int top = std::min(f.max_length(), g.max_length());
    for (int n = shift; n <= top; ++n) {
        auto t = contraction(f, g, n, pc.pairs(), pc.algebra());
        if (t.is_zero())
            continue;
        if (n - shift > M) {
            r.truncated = true;
            break;
        }
        t *= Q(1) / factorial(n);
        if (t.truncate(pc.truncation()))
            r.truncated = true;
        r.c[n - shift] += t;
    }
    return r;
}

} // namespace

HSeries superbig_star(const Polynomial& f, const Polynomial& g, const PairedContext& ctx)
{
    if (ctx.style() != PairingStyle::big)
        throw ContextMismatch("superbig star needs a ψ/η context");
    return star_poly(f, g, ctx);
}

HSeries terilla_star(const Polynomial& f, const Polynomial& g, const PairedContext& ctx)
{
    if (ctx.style() != PairingStyle::terilla)
        throw ContextMismatch("Terilla star needs an e/α context");
    return star_poly(f, g, ctx);
}

std::pair<Polynomial, Polynomial> split_parity(const Polynomial& p, const AlgebraContext& ctx)
{
    Polynomial e, o;
    for (auto& [m, x] : p.terms())
        ((ctx.degree(m) & 1) ? o : e).add_term(m, x);
    return {e, o};
}

int word_parity(const Polynomial& p, const AlgebraContext& ctx, int shift)
{
    int par = -1;
    for (auto& [m, x] : p.terms()) {
        int q = mono_parity(ctx, m, shift);
        if (par >= 0 && q != par)
            throw Error("polynomial is not parity-homogeneous");
        par = q;
    }
    return par < 0 ? 0 : par;
}

HSeries superbig_bracket(const Polynomial& f, const Polynomial& g, const PairedContext& ctx)
{
    const int M = ctx.h_truncation();
    HSeries r(M);
    auto [f0, f1] = split_parity(f, ctx.algebra());
    auto [g0, g1] = split_parity(g, ctx.algebra());
    const Polynomial* fs[2] = {&f0, &f1};
    const Polynomial* gs[2] = {&g0, &g1};
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
            if (fs[p]->is_zero() || gs[q]->is_zero())
                continue;
            r += superbig_star(*fs[p], *gs[q], ctx);
            r += superbig_star(*gs[q], *fs[p], ctx).scaled(-sign_of(p && q));
        }
    return r;
}

Polynomial big_bracket(const Polynomial& f, const Polynomial& g, const PairedContext& ctx)
{
    if (ctx.style() != PairingStyle::big)
        throw ContextMismatch("big bracket needs a ψ/η context");
    const auto& A = ctx.algebra();
    auto [f0, f1] = split_parity(f, A);
    auto [g0, g1] = split_parity(g, A);
    const Polynomial* fs[2] = {&f0, &f1};
    const Polynomial* gs[2] = {&g0, &g1};
    Polynomial r;
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
            r += contraction(*fs[p], *gs[q], 1, ctx.pairs(), A);
            r -= contraction(*gs[q], *fs[p], 1, ctx.pairs(), A) * Q(sign_of(p && q));
        }
    r.truncate(ctx.truncation());
    return r;
}

HSeries star(const HSeries& F, const HSeries& G, const PairedContext& ctx)
{
    const int M = ctx.h_truncation();
    HSeries r(M);
    r.truncated = F.truncated || G.truncated;
    for (std::size_t a = 0; a < F.c.size(); ++a)
        for (std::size_t b = 0; b < G.c.size(); ++b) {
            if (F.c[a].is_zero() || G.c[b].is_zero())
                continue;
            if (static_cast<int>(a + b) > M) {
                r.truncated = true;
                continue;
            }
            auto t = star_poly(F.c[a], G.c[b], ctx);
            for (int s = 0; s <= M; ++s) {
                if (t.c[s].is_zero())
                    continue;
                if (static_cast<int>(a + b) + s > M) {
                    r.truncated = true;
                    continue;
                }
                r.c[a + b + s] += t.c[s];
            }
            r.truncated = r.truncated || t.truncated;
        }
    return r;
}

HSeries graded_commutator(const HSeries& F, const HSeries& G, const PairedContext& ctx)
{
    const auto& A = ctx.algebra();
    const int M = ctx.h_truncation();
    // split by parity coefficientwise; h has even degree
    HSeries Fp[2] = {HSeries(M), HSeries(M)}, Gp[2] = {HSeries(M), HSeries(M)};
    for (std::size_t s = 0; s < F.c.size() && static_cast<int>(s) <= M; ++s) {
        auto [e, o] = split_parity(F.c[s], A);
        Fp[0].c[s] = e;
        Fp[1].c[s] = o;
    }
    for (std::size_t s = 0; s < G.c.size() && static_cast<int>(s) <= M; ++s) {
        auto [e, o] = split_parity(G.c[s], A);
        Gp[0].c[s] = e;
        Gp[1].c[s] = o;
    }
    HSeries r(M);
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
            r += star(Fp[p], Gp[q], ctx);
            r -= star(Gp[q], Fp[p], ctx).scaled(sign_of(p && q));
        }
    return r;
}

/* ---------------- HSeriesOperator ---------------- */

HSeriesOperator::HSeriesOperator(int arity_, std::vector<MultilinearOperator> coeffs_, int h_degree_, int offset_,
                                 int element_shift_)
    : arity(arity_), coeffs(std::move(coeffs_)), h_degree(h_degree_), offset(offset_), element_shift(element_shift_)
{
    if (coeffs.empty())
        throw Error("h-series operator needs at least one coefficient");
    if (h_degree & 1)
        throw Error("h-series operator: the formal parameter must have even degree");
    for (auto& c : coeffs)
        if (c.arity() != arity || c.ctx() != coeffs.front().ctx())
            throw ContextMismatch("h-series operator: coefficients disagree in arity or context");
}

HSeries HSeriesOperator::apply(std::span<const Polynomial> args) const
{
    HSeries r(truncation());
    for (std::size_t s = 0; s < coeffs.size(); ++s)
        r.c[s] = coeffs[s](args);
    return r;
}

MultilinearOperator big_bracket_operator(const PairedContext& pc)
{
    if (pc.style() != PairingStyle::big)
        throw ContextMismatch("big bracket needs a ψ/η context");
    auto fn = [pc](std::span<const Monomial> ms) {
        const auto& A = pc.algebra();
        const Polynomial f(ms[0]), g(ms[1]);
        auto r = contraction(f, g, 1, pc.pairs(), A);
        r -= contraction(g, f, 1, pc.pairs(), A) *
             Q(sign_of((A.degree(ms[0]) & 1) && (A.degree(ms[1]) & 1)));
        return r;
    };
    return MultilinearOperator(pc.algebra(), 2, -2, fn);
}

namespace {

// the h^s coefficient of the superbig bracket on monomials, exact
Polynomial superbig_coeff(const PairedContext& pc, int s, const Monomial& a, const Monomial& b)
{
    const auto& A = pc.algebra();
    const int n = s + 1;
    const Polynomial f(a), g(b);
    auto r = contraction(f, g, n, pc.pairs(), A);
    r -= contraction(g, f, n, pc.pairs(), A) * Q(sign_of((A.degree(a) & 1) && (A.degree(b) & 1)));
    return r * (Q(1) / factorial(n));
}

} // namespace

HSeriesOperator superbig_operator(const PairedContext& pc)
{
    if (pc.style() != PairingStyle::big)
        throw ContextMismatch("superbig bracket needs a ψ/η context");
    std::vector<MultilinearOperator> cs;
    for (int s = 0; s <= pc.h_truncation(); ++s)
        cs.emplace_back(pc.algebra(), 2, -2 * (s + 1),
                        [pc, s](std::span<const Monomial> ms) { return superbig_coeff(pc, s, ms[0], ms[1]); });
    return HSeriesOperator(2, std::move(cs), 2, 1, 2);
}

HSeriesOperator terilla_operator(const PairedContext& pc)
{
    if (pc.style() != PairingStyle::terilla)
        throw ContextMismatch("Terilla star needs an e/α context");
    std::vector<MultilinearOperator> cs;
    for (int k = 0; k <= pc.h_truncation(); ++k)
        cs.emplace_back(pc.algebra(), 2, 0, [pc, k](std::span<const Monomial> ms) {
            return contraction(Polynomial(ms[0]), Polynomial(ms[1]), k, pc.pairs(), pc.algebra()) *
                   (Q(1) / factorial(k));
        });
    return HSeriesOperator(2, std::move(cs), 2, 0, 0);
}

MultilinearOperator product_operator(const PairedContext& pc) { return product_map(pc.algebra(), 2); }

MultilinearOperator semiclassical(const HSeriesOperator& op) { return op.coeffs.front(); }

std::vector<OrderProfileEntry> certify_profile(const HSeriesOperator& op, int window, Kernel kernel)
{
    std::vector<OrderProfileEntry> out;
    for (std::size_t s = 0; s < op.coeffs.size(); ++s)
        for (int slot = 0; slot < op.arity; ++slot) {
            OrderProfileEntry e;
            e.coefficient = static_cast<int>(s);
            e.slot = slot;
            e.bound = op.offset + static_cast<int>(s);
            e.cert = slot_order(op.coeffs[s], slot, OrderKind::diffop, e.bound + 1, window, false, kernel).cert;
            out.push_back(std::move(e));
        }
    return out;
}

/* ---------------- Jacobiators ---------------- */

Polynomial lie_jacobiator_n(const HSeriesOperator& br, int n, const Polynomial& a, const Polynomial& b,
                            const Polynomial& c)
{
    if (br.arity != 2)
        throw Error("Lie Jacobiator needs a binary bracket");
    if (br.offset != 1)
        throw Error("Lie Jacobiator needs an offset-1 bracket series");
    if (n < 1 || n > br.truncation() + 1)
        throw TruncationError("Lie Jacobiator: n exceeds the series truncation");
    const auto& A = br.ctx();
    const int sh = br.element_shift;
    std::vector<Polynomial> args{a, b, c};
    return expand(args, [&](std::span<const Monomial> ms) {
        const int pa = mono_parity(A, ms[0], sh);
        const int pb = mono_parity(A, ms[1], sh);
        const int pc = mono_parity(A, ms[2], sh);
        const Polynomial x(ms[0]), y(ms[1]), z(ms[2]);
        Polynomial r;
        for (int s = 1; s <= n; ++s) {
            const int t = n + 1 - s;
            const auto& in = br.coeffs[s - 1];
            const auto& out = br.coeffs[t - 1];
            r += out(x, in(y, z)) * Q(sign_of(pa && pc));
            r += out(y, in(z, x)) * Q(sign_of(pb && pa));
            r += out(z, in(x, y)) * Q(sign_of(pc && pb));
        }
        return r;
    });
}

MultilinearOperator lie_jacobiator_operator(const HSeriesOperator& br, int n)
{
    if (n < 1 || n > br.truncation() + 1)
        throw TruncationError("Lie Jacobiator: n exceeds the series truncation");
    const int deg = br.coeffs.front().degree() + br.coeffs[n - 1].degree();
    return MultilinearOperator(br.ctx(), 3, deg, [br, n](std::span<const Monomial> ms) {
        return lie_jacobiator_n(br, n, Polynomial(ms[0]), Polynomial(ms[1]), Polynomial(ms[2]));
    });
}

const MultilinearOperator* LInfFamily::get(int k, int n) const
{
    auto it = l.find({k, n});
    if (it != l.end())
        return &it->second;
    if (missing_is_zero)
        return nullptr;
    throw Error("L-infinity family: missing l_{" + std::to_string(k) + "," + std::to_string(n) + "}");
}

Polynomial linf_jacobiator(const LInfFamily& fam, int k, int n, std::span<const Polynomial> args)
{
    if (static_cast<int>(args.size()) != k)
        throw Error("linf_jacobiator: expected " + std::to_string(k) + " arguments");
    if (k < 1 || n < 1)
        throw Error("linf_jacobiator: k and n must be positive");
    const auto& A = fam.ctx;
    return expand(args, [&](std::span<const Monomial> ms) {
        std::vector<int> par(k);
        for (int q = 0; q < k; ++q)
            par[q] = mono_parity(A, ms[q], fam.element_shift);
        Polynomial r;
        for (int i = 1; i <= k; ++i) {
            const int j = k + 1 - i;
            for (int s = 1; s <= n; ++s) {
                const int t = n + 1 - s;
                const auto* outer = fam.get(j, s);
                const auto* inner = fam.get(i, t);
                if (!outer || !inner)
                    continue;
                // (i, k-i)-shuffles
                std::vector<bool> pick(k, false);
                std::fill(pick.begin(), pick.begin() + i, true);
                do {
                    Perm sg;
                    for (int q = 0; q < k; ++q)
                        if (pick[q])
                            sg.push_back(q);
                    for (int q = 0; q < k; ++q)
                        if (!pick[q])
                            sg.push_back(q);
                    const int chi = perm_sign(sg) * koszul_sign(par, sg);
                    std::vector<Monomial> in(i);
                    for (int q = 0; q < i; ++q)
                        in[q] = ms[sg[q]];
                    auto u = inner->apply(in);
                    if (u.is_zero())
                        continue;
                    std::vector<Polynomial> outer_args{u};
                    for (int q = i; q < k; ++q)
                        outer_args.emplace_back(ms[sg[q]]);
                    r += (*outer)(outer_args) * Q(chi * sign_of((i * (j - 1)) & 1));
                } while (std::prev_permutation(pick.begin(), pick.end()));
            }
        }
        return r;
    });
}

MultilinearOperator linf_jacobiator_operator(const LInfFamily& fam, int k, int n)
{
    return MultilinearOperator(fam.ctx, k, 0, [fam, k, n](std::span<const Monomial> ms) {
        std::vector<Polynomial> ps(ms.begin(), ms.end());
        return linf_jacobiator(fam, k, n, ps);
    });
}

/* ---------------- IBL ---------------- */

IblVerdict ibl_membership(const HSeries& f, const PairedContext& ctx)
{
    if (ctx.style() != PairingStyle::big)
        throw ContextMismatch("IBL membership needs a ψ/η context");
    IblVerdict v;
    v.h0_in_m3 = true;
    if (!f.c.empty())
        for (auto& [m, x] : f.c[0].terms())
            if (m.length() < 3)
                v.h0_in_m3 = false;
    std::vector<bool> psi(ctx.algebra().size(), false), eta(ctx.algebra().size(), false);
    for (std::size_t i = 0; i < ctx.dim(); ++i) {
        psi[ctx.lower(i)] = true;
        eta[ctx.upper(i)] = true;
    }
    v.vanishes_at_psi_zero = v.vanishes_at_eta_zero = true;
    for (auto& p : f.c) {
        if (!set_to_zero(p, psi).is_zero())
            v.vanishes_at_psi_zero = false;
        if (!set_to_zero(p, eta).is_zero())
            v.vanishes_at_eta_zero = false;
    }
    v.member = v.h0_in_m3 && v.vanishes_at_psi_zero && v.vanishes_at_eta_zero;
    return v;
}

nlohmann::json to_json(const HSeries& s, const AlgebraContext& ctx)
{
    nlohmann::json c = nlohmann::json::array();
    for (auto& p : s.c)
        c.push_back(to_string(p, ctx));
    return {{"coefficients", c}, {"truncated", s.truncated}};
}

} // namespace odlab
