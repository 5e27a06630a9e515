#include "odlab/acceptance.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "odlab/brackets.hpp"
#include "odlab/multifilt.hpp"
#include "odlab/operad.hpp"

namespace odlab {

namespace {

using Clock = std::chrono::steady_clock;

struct Checker {
    CriterionResult& r;
    bool check(bool ok, const std::string& what)
    {
        r.details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
        r.pass = r.pass && ok;
        return ok;
    }
};

long binom(int n, int k)
{
    if (k < 0 || k > n)
        return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

std::string mono_list(const std::vector<Monomial>& ms, const AlgebraContext& ctx)
{
    std::string s = "(";
    for (std::size_t k = 0; k < ms.size(); ++k)
        s += (k ? "," : "") + ctx.to_string(ms[k]);
    return s + ")";
}

// ordered k-tuples of basis monomials with total word length <= W; stop when f returns false
bool for_each_tuple(const std::vector<Monomial>& basis, int k, int W,
                    const std::function<bool(const std::vector<Monomial>&)>& f)
{
    std::vector<Monomial> cur;
    std::function<bool(int)> rec = [&](int budget) {
        if (static_cast<int>(cur.size()) == k)
            return f(cur);
        for (auto& m : basis) {
            if (m.length() > budget)
                break;
            cur.push_back(m);
            bool go = rec(budget - m.length());
            cur.pop_back();
            if (!go)
                return false;
        }
        return true;
    };
    return rec(W);
}

// nondecreasing k-tuples (multisets); f also receives the total word length
bool for_each_multiset(const std::vector<Monomial>& basis, int k, int W,
                       const std::function<bool(const std::vector<Monomial>&, int)>& f)
{
    std::vector<Monomial> cur;
    std::function<bool(std::size_t, int)> rec = [&](std::size_t start, int used) {
        if (static_cast<int>(cur.size()) == k)
            return f(cur, used);
        for (std::size_t i = start; i < basis.size(); ++i) {
            if (basis[i].length() > W - used)
                break;
            cur.push_back(basis[i]);
            bool go = rec(i, used + basis[i].length());
            cur.pop_back();
            if (!go)
                return false;
        }
        return true;
    };
    return rec(0, 0);
}

std::shared_ptr<const FreeOperad> free_op(int arity, int degree, Symm s, int max_arity)
{
    return std::make_shared<const FreeOperad>(std::vector<SigmaGenerator>{{"b", arity, degree, s}}, max_arity);
}

int ones(const MultiIndex& p)
{
    int c = 0;
    for (int x : p)
        c += x == 1;
    return c;
}

// standard multifiltrations reused across criteria
struct Shared {
    Kernel kernel;
    std::map<std::tuple<int, int, Symm>, std::pair<std::shared_ptr<const FreeOperad>, Multifiltration>> cache;

    const std::pair<std::shared_ptr<const FreeOperad>, Multifiltration>& free_std(int arity, int degree, Symm s,
                                                                                   int max_arity)
    {
        auto key = std::make_tuple(arity, degree, s);
        auto it = cache.find(key);
        if (it == cache.end()) {
            auto F = free_op(arity, degree, s, max_arity);
            auto G = standard(*F, max_arity, BoundMode::sharp, kernel);
            it = cache.emplace(key, std::make_pair(F, std::move(G))).first;
        }
        return it->second;
    }
};

/* ---------------- 1: golden lattices ---------------- */

void golden(Checker& c, const std::string& name, const OperadModel& P, const Multifiltration& G,
            const std::array<std::size_t, 4>& by_ones)
{
    std::vector<std::string> bad;
    for (auto& p : window(3, 2)) {
        const std::size_t want = by_ones[ones(p)];
        const std::size_t got = G.get(3, p).dim();
        if (got != want)
            bad.push_back(to_string(p) + " got " + std::to_string(got) + " want " + std::to_string(want));
    }
    std::string msg = name + " lattice (dim P(3) = " + std::to_string(P.dim(3)) + ")";
    for (auto& b : bad)
        msg += "; " + b;
    c.check(bad.empty(), msg);
}

void criterion1(Checker& c, Shared& sh)
{
    auto& anti = sh.free_std(2, 0, Symm::antisymmetric, 3);
    auto& sym = sh.free_std(2, 0, Symm::symmetric, 3);
    auto& reg = sh.free_std(2, 0, Symm::regular, 3);
    golden(c, "antisymmetric binary", *anti.first, anti.second, {3, 2, 1, 1});
    golden(c, "symmetric binary", *sym.first, sym.second, {3, 2, 0, 0});
    golden(c, "regular binary", *reg.first, reg.second, {12, 8, 4, 1});

    QuotientOperad lie(anti.first, {jacobiator(*anti.first, 0)});
    golden(c, "Lie quotient", lie, standard(lie, 3, BoundMode::sharp, sh.kernel), {2, 1, 0, 0});
    QuotientOperad com(sym.first, {associator(*sym.first, 0)});
    golden(c, "Com quotient", com, standard(com, 3, BoundMode::sharp, sh.kernel), {1, 1, 1, 1});
}

/* ---------------- 2: dimension formulas ---------------- */

void criterion2(Checker& c, Shared& sh)
{
    for (int n : {2, 3}) {
        const int ar = 2 * n - 1;
        auto& [F, G] = sh.free_std(n, 0, Symm::antisymmetric, ar);
        MultiIndex top(ar, 2), face(ar, 2);
        face[0] = 1;
        const long want_top = binom(2 * n - 1, n);
        // C(2n-2,n) + C(2n-2,n-1)/2
        const long want_face = binom(2 * n - 2, n) + binom(2 * n - 2, n - 1) / 2;
        const auto free_dim = static_cast<long>(F->dim(ar));
        const auto top_dim = static_cast<long>(G.get(ar, top).dim());
        const auto face_dim = static_cast<long>(G.get(ar, face).dim());
        c.check(free_dim == want_top && top_dim == want_top,
                "n=" + std::to_string(n) + ": dim Free(" + std::to_string(ar) + ") = " + std::to_string(free_dim) +
                    ", G" + to_string(top) + " = " + std::to_string(top_dim) + ", formula " +
                    std::to_string(want_top));
        c.check(face_dim == want_face, "n=" + std::to_string(n) + ": G" + to_string(face) + " = " +
                                           std::to_string(face_dim) + ", formula " + std::to_string(want_face));
    }
}

/* ---------------- 3: Jacobiators ---------------- */

void criterion3(Checker& c, Shared& sh)
{
    auto& [F2, G2] = sh.free_std(2, 0, Symm::antisymmetric, 3);
    c.check(G2.get(3, {1, 1, 1}).contains(jacobiator(*F2, 0).v), "oJac2 in G(1,1,1) Free(3)");
    // ternary generator of odd degree
    auto& [F3, G3] = sh.free_std(3, 1, Symm::antisymmetric, 5);
    auto J = jacobiator(*F3, 0);
    c.check(!J.v.is_zero() && G3.get(5, {1, 1, 1, 1, 1}).contains(J.v),
            "oJac3 in G(1,1,1,1,1) Free(5) for a degree-1 generator");
}

/* ---------------- 4: tightness ---------------- */

void criterion4(Checker& c, Shared& sh)
{
    auto& anti = sh.free_std(2, 0, Symm::antisymmetric, 3);
    auto lie = is_tight(*anti.first, {jacobiator(*anti.first, 0)}, sh.kernel);
    c.check(lie.tight, "Lie tight");

    auto& [R, GR] = sh.free_std(2, 0, Symm::regular, 3);
    auto la = lie_admissible(*R, 0);
    const Subspace& g111 = GR.get(3, {1, 1, 1});
    c.check(g111.dim() == 1 && g111.contains(la.v) && !la.v.is_zero(),
            "Lie-admissible relation spans G(1,1,1) of regular Free(3) (dim " + std::to_string(g111.dim()) + ")");
    c.check(is_tight(*R, {la}, sh.kernel).tight, "Lie-admissible tight");

    auto& sym = sh.free_std(2, 0, Symm::symmetric, 3);
    auto com = is_tight(*sym.first, {associator(*sym.first, 0)}, sh.kernel);
    c.check(!com.tight, "associativity of a symmetric operation not tight");
}

/* ---------------- 5: Filipov ---------------- */

void criterion5(Checker& c, Shared& sh)
{
    auto& [F, G] = sh.free_std(3, 0, Symm::antisymmetric, 5);
    auto fi = F->parse_element("b(1,2,b(3,4,5)) - b(b(1,2,3),4,5) - b(3,b(1,2,4),5) - b(3,4,b(1,2,5))");
    c.check(fi.v == fundamental_identity(*F, 0).v, "fundamental identity parses to the built-in form");
    c.check(G.get(5, {2, 2, 1, 1, 1}).contains(fi.v), "fundamental identity in G(2,2,1,1,1) Free(5)");
}

/* ---------------- 6: operator calculus ---------------- */

struct RandomDiffop {
    LinearOperator op;
    int order;
};

RandomDiffop random_diffop(const AlgebraContext& ctx, int m, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> coef(-2, 2);
    // Σ_{i+j<=m} p_ij ∂xⁱ∂yʲ, p_ij of word length <= 1
    std::vector<std::tuple<int, int, Polynomial>> terms;
    for (int i = 0; i <= m; ++i)
        for (int j = 0; i + j <= m; ++j) {
            Polynomial p;
            p.add_term(Monomial(), coef(rng));
            p.add_term(Monomial({0}), coef(rng));
            p.add_term(Monomial({1}), coef(rng));
            if (i + j == m && i == 0 && p.is_zero())
                p.add_term(Monomial(), 1);
            terms.emplace_back(i, j, p);
        }
    auto fn = [terms, ctx](const Monomial& mono) {
        Polynomial r;
        for (auto& [i, j, p] : terms) {
            if (p.is_zero())
                continue;
            Polynomial d(mono);
            for (int k = 0; k < i && !d.is_zero(); ++k)
                d = left_derivative(d, 0, ctx);
            for (int k = 0; k < j && !d.is_zero(); ++k)
                d = left_derivative(d, 1, ctx);
            if (!d.is_zero())
                r += multiply_exact(p, d, ctx);
        }
        return r;
    };
    return {LinearOperator(ctx, 0, fn), m};
}

void criterion6(Checker& c, const AcceptanceOptions& opt)
{
    const AlgebraContext ctx({{"x", 0}, {"y", 0}}, 6);
    const int D = ctx.truncation();
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<int> ord(0, 3);
    int bad_cert = 0, bad_comp = 0, bad_comm = 0, bad_bridge = 0, bad_unit = 0, bad_split = 0;
    std::string first;
    const auto basis = ctx.basis(D);
    const Polynomial one = Polynomial::constant(1);
    long bridge_tuples = 0;

    for (int k = 0; k < opt.random_pairs; ++k) {
        auto A = random_diffop(ctx, ord(rng), rng);
        auto B = random_diffop(ctx, ord(rng), rng);
        auto ca = diffop_order(A.op, 3, D, opt.kernel);
        auto cb = diffop_order(B.op, 3, D, opt.kernel);
        if (!ca.order || !cb.order || *ca.order != A.order || *cb.order != B.order) {
            ++bad_cert;
            continue;
        }
        const int m = *ca.order, n = *cb.order;
        auto cc = diffop_order(compose(A.op, B.op), m + n, D, opt.kernel);
        if (cc.exceeds()) {
            ++bad_comp;
            if (first.empty())
                first = "composition of orders " + std::to_string(m) + "," + std::to_string(n) + ": " + cc.describe();
        }
        auto comm = commutator(A.op, B.op);
        bool comm_ok = true;
        if (m + n == 0) {
            for (auto& mono : basis)
                comm_ok = comm_ok && comm.apply(mono).is_zero();
        } else {
            comm_ok = !diffop_order(comm, m + n - 1, D, opt.kernel).exceeds();
        }
        if (!comm_ok) {
            ++bad_comm;
            if (first.empty())
                first = "commutator of orders " + std::to_string(m) + "," + std::to_string(n);
        }

        // bridge identity for the first operator: argument multisets (both sides are symmetric), every x
        auto T = A.op.materialize(D);
        for (int r = 1; r <= 3; ++r)
            for_each_multiset(basis, r, D, [&](const std::vector<Monomial>& t, int used) {
                std::vector<Polynomial> args(t.begin(), t.end());
                const auto dev = deviation(T, args);
                for (auto& xm : basis) {
                    if (xm.length() > D - used)
                        break;
                    ++bridge_tuples;
                    const Polynomial x(xm);
                    std::vector<Polynomial> longer = args;
                    longer.push_back(x);
                    auto res = psi_apply(T, args, x) - deviation(T, longer) - multiply_exact(x, dev, ctx);
                    if (!res.is_zero()) {
                        ++bad_bridge;
                        if (first.empty())
                            first = "bridge residual at " + mono_list(t, ctx) + ", x = " + ctx.to_string(xm);
                        return false;
                    }
                }
                return true;
            });

        auto split = unital_split(A.op);
        // unit identity needs theta(1) = 0
        auto theta = split.theta.materialize(D);
        for (int r = 1; r <= 3; ++r)
            for_each_multiset(basis, r, D, [&](const std::vector<Monomial>& t, int) {
                std::vector<Polynomial> args(t.begin(), t.end());
                if (psi_apply(theta, args, one) != deviation(theta, args)) {
                    ++bad_unit;
                    if (first.empty())
                        first = "unit identity at " + mono_list(t, ctx);
                    return false;
                }
                return true;
            });

        bool split_ok = split.theta.apply(Monomial()).is_zero() && split.value == A.op.apply(Monomial());
        auto back = split.value.is_zero() ? split.theta : split.theta + left_mult(split.value, ctx);
        split_ok = split_ok && agree_upto(back, A.op, D);
        auto dth = derivation_order(split.theta, 4, D, opt.kernel);
        split_ok = split_ok && dth.order == ca.order;
        if (!split_ok)
            ++bad_split;
    }
    const std::string N = std::to_string(opt.random_pairs);
    c.check(bad_cert == 0, "certified orders of random operators match construction (" + std::to_string(bad_cert) +
                               " mismatches of " + N + " pairs)");
    c.check(bad_comp == 0, "composition order <= m+n on " + N + " pairs, D=6");
    c.check(bad_comm == 0, "commutator order <= m+n-1 on " + N + " pairs, D=6");
    c.check(bad_bridge == 0, "bridge identity residual 0 on " + std::to_string(bridge_tuples) + " (multiset, x) basis tuples");
    c.check(bad_unit == 0, "unit identity Psi(..)(1) = Phi(..) for theta = O - L_O(1)");
    c.check(bad_split == 0, "unital_split round trip and derivation order of theta");
    if (!first.empty())
        c.r.details.push_back("     first failure: " + first);
}

/* ---------------- 7: superbig bracket ---------------- */

void criterion7(Checker& c, const AcceptanceOptions& opt)
{
    PairedContext pc({0, 0}, 6, 3, PairingStyle::big);
    const auto& A = pc.algebra();
    auto sb = superbig_operator(pc);
    auto big = big_bracket_operator(pc);
    const auto words = A.basis(3);
    const int M = pc.h_truncation();

    long anti_bad = 0, semi_bad = 0, series_bad = 0;
    for (auto& a : words)
        for (auto& b : words) {
            const std::vector<Monomial> ab{a, b}, ba{b, a};
            const bool odd = (A.degree(a) & 1) && (A.degree(b) & 1);
            for (int s = 0; s <= M; ++s) {
                auto u = sb.coeffs[s].apply(ab), v = sb.coeffs[s].apply(ba);
                if (!(u + (odd ? -v : v)).is_zero())
                    ++anti_bad;
            }
            if (sb.coeffs[0].apply(ab) != big.apply(ab) ||
                big_bracket(Polynomial(a), Polynomial(b), pc) != big.apply(ab))
                ++semi_bad;
            auto hs = superbig_bracket(Polynomial(a), Polynomial(b), pc);
            for (int s = 0; s <= M; ++s)
                if (hs.c[s] != sb.coeffs[s].apply(ab))
                    ++series_bad;
        }
    c.check(anti_bad == 0, "graded antisymmetry h^0..h^3 on " + std::to_string(words.size() * words.size()) +
                               " pairs of word length <= 3");

    long jac_bad = 0, triples = 0;
    std::string first;
    for (auto& a : words)
        for (auto& b : words)
            for (auto& w : words) {
                ++triples;
                for (int n = 1; n <= M + 1; ++n) {
                    auto j = lie_jacobiator_n(sb, n, Polynomial(a), Polynomial(b), Polynomial(w));
                    if (!j.is_zero()) {
                        ++jac_bad;
                        if (first.empty())
                            first = "Jac_" + std::to_string(n) + mono_list({a, b, w}, A);
                    }
                }
            }
    c.check(jac_bad == 0, "Jacobi residual 0 in h^0..h^3 on " + std::to_string(triples) + " triples" +
                              (first.empty() ? "" : ", first " + first));
    c.check(semi_bad == 0, "h^0 coefficient equals the big bracket");
    c.check(series_bad == 0, "operator coefficients agree with the h-series bracket");

    auto prof = certify_profile(sb, pc.truncation(), opt.kernel);
    bool prof_ok = true;
    std::string worst;
    for (auto& e : prof) {
        const bool ok = e.cert.order && *e.cert.order <= e.bound;
        prof_ok = prof_ok && ok;
        worst += " h^" + std::to_string(e.coefficient) + "/slot" + std::to_string(e.slot + 1) + ":" +
                 (e.cert.order ? std::to_string(*e.cert.order) : "exceeds");
    }
    c.check(prof_ok, "h^(n-1) coefficient slot orders <= n:" + worst);
    auto strict = slot_order(sb.coeffs[1], 1, OrderKind::diffop, 1, pc.truncation(), false, opt.kernel);
    c.check(strict.cert.exceeds() && !strict.cert.witness.empty(),
            "strictness at n=2: h^1 coefficient exceeds order 1, witness " + mono_list(strict.cert.witness, A));
}

/* ---------------- 8: Terilla star ---------------- */

void criterion8(Checker& c, const AcceptanceOptions& opt)
{
    PairedContext pc({0, 0}, 6, 3, PairingStyle::terilla);
    const auto& A = pc.algebra();
    auto T = terilla_operator(pc);
    const int M = pc.h_truncation();
    const int D = pc.truncation();
    const auto basis = A.basis(D);
    auto prod = product_operator(pc);

    long bad = 0, triples = 0;
    std::string first;
    auto star_coeffs = [&](const Polynomial& f, const Polynomial& g) {
        std::vector<Polynomial> r;
        for (int k = 0; k <= M; ++k)
            r.push_back(T.coeffs[k](f, g));
        return r;
    };
    for_each_tuple(basis, 3, D, [&](const std::vector<Monomial>& t) {
        ++triples;
        const Polynomial f(t[0]), g(t[1]), w(t[2]);
        auto fg = star_coeffs(f, g), gw = star_coeffs(g, w);
        for (int n = 0; n <= M; ++n) {
            Polynomial r;
            for (int a = 0; a <= n; ++a) {
                r += T.coeffs[a](fg[n - a], w);
                r -= T.coeffs[a](f, gw[n - a]);
            }
            if (!r.is_zero()) {
                ++bad;
                if (first.empty())
                    first = "h^" + std::to_string(n) + " at " + mono_list(t, A);
            }
        }
        return true;
    });
    c.check(bad == 0, "associator residual 0 in h^0..h^3 on " + std::to_string(triples) + " triples" +
                          (first.empty() ? "" : ", first " + first));

    long semi_bad = 0;
    for_each_tuple(basis, 2, D, [&](const std::vector<Monomial>& t) {
        if (T.coeffs[0].apply(t) != prod.apply(t))
            ++semi_bad;
        return true;
    });
    c.check(semi_bad == 0, "h^0 coefficient equals the plain product");

    // associator coefficients as trilinear operators
    const int W = 4;
    bool ord_ok = true;
    std::string orders;
    for (int n = 0; n <= M; ++n) {
        MultilinearOperator assoc(A, 3, 0, [T, n](std::span<const Monomial> ms) {
            const Polynomial f(ms[0]), g(ms[1]), w(ms[2]);
            Polynomial r;
            for (int a = 0; a <= n; ++a) {
                r += T.coeffs[a](T.coeffs[n - a](f, g), w);
                r -= T.coeffs[a](f, T.coeffs[n - a](g, w));
            }
            return r;
        });
        for (int slot = 0; slot < 3; ++slot) {
            auto so = slot_order(assoc, slot, OrderKind::diffop, n + 1, W, false, opt.kernel);
            ord_ok = ord_ok && so.cert.order && *so.cert.order <= n;
            orders += " h^" + std::to_string(n) + "/slot" + std::to_string(slot + 1) + ":" +
                      (so.cert.order ? std::to_string(*so.cert.order) : "exceeds");
        }
    }
    c.check(ord_ok, "associator h^n coefficient slot orders <= n (window " + std::to_string(W) + "):" + orders);

    auto prof = certify_profile(T, W, opt.kernel);
    bool prof_ok = true;
    for (auto& e : prof)
        prof_ok = prof_ok && e.cert.order && *e.cert.order <= e.bound;
    c.check(prof_ok, "h^k coefficient of the star has slot orders <= k (window " + std::to_string(W) + ")");
}

/* ---------------- 9: Poisson from a Lie algebra ---------------- */

void criterion9(Checker& c)
{
    const AlgebraContext X({{"x", 0}, {"y", 0}}, 12);
    const Monomial x({0}), y({1});
    UpsilonTable tab(X, 1);
    tab.set_antisymmetric(x, y, Polynomial(y));
    auto br = extend_upsilon(tab);
    auto jac = [&](const Monomial& a, const Monomial& b, const Monomial& w) {
        const Polynomial pa(a), pb(b), pw(w);
        return br(pa, br(pb, pw)) + br(pb, br(pw, pa)) + br(pw, br(pa, pb));
    };
    bool gens_ok = true;
    for (auto& a : {x, y})
        for (auto& b : {x, y})
            for (auto& w : {x, y})
                gens_ok = gens_ok && jac(a, b, w).is_zero();
    c.check(gens_ok, "Jacobi on X (x) X (x) X for [x,y] = y");
    long bad = 0, n = 0;
    const auto words = X.basis(4);
    for (auto& a : words)
        for (auto& b : words)
            for (auto& w : words) {
                ++n;
                if (!jac(a, b, w).is_zero())
                    ++bad;
            }
    c.check(bad == 0, "Jacobi of the extended bracket on " + std::to_string(n) + " triples of word length <= 4");
}

/* ---------------- 10: bideviations ---------------- */

MultilinearOperator random_bidiff(const AlgebraContext& ctx, std::mt19937_64& rng)
{
    // Σ c ∂^α f · ∂^β g with 1 <= |α|,|β| <= 2
    const std::vector<std::vector<std::size_t>> ds{{0}, {1}, {0, 0}, {0, 1}, {1, 1}};
    std::uniform_int_distribution<int> coef(-2, 2);
    std::vector<std::tuple<int, int, Q>> terms;
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) {
            int v = coef(rng);
            if (a == 2 && b == 4)
                v = 1;
            if (v)
                terms.emplace_back(a, b, Q(v));
        }
    auto deriv = [ds, ctx](const Monomial& m, int which) {
        Polynomial p(m);
        for (auto g : ds[which])
            p = left_derivative(p, g, ctx);
        return p;
    };
    return MultilinearOperator(ctx, 2, 0, [terms, deriv, ctx](std::span<const Monomial> ms) {
        Polynomial r;
        for (auto& [a, b, v] : terms) {
            auto f = deriv(ms[0], a);
            if (f.is_zero())
                continue;
            auto g = deriv(ms[1], b);
            if (!g.is_zero())
                r += multiply_exact(f, g, ctx) * v;
        }
        return r;
    });
}

void criterion10(Checker& c, const AcceptanceOptions& opt)
{
    const AlgebraContext K({{"x", 0}, {"y", 0}}, 6);
    const int D = K.truncation();
    const auto basis = K.basis(D);
    UpsilonTable tab(K, 1);
    tab.set_antisymmetric(Monomial({0}), Monomial({1}), Polynomial::constant(1));
    auto pb = extend_upsilon(tab);

    auto sweep = [&](const MultilinearOperator& op, int n, std::vector<Monomial>* witness) {
        long count = 0;
        bool zero = true;
        for_each_tuple(basis, 2 * n, D, [&](const std::vector<Monomial>& t) {
            ++count;
            std::vector<Polynomial> a(t.begin(), t.begin() + n), b(t.begin() + n, t.end());
            if (!bideviation(op, a, b).is_zero()) {
                zero = false;
                if (witness)
                    *witness = t;
                return false;
            }
            return true;
        });
        return std::make_pair(zero, count);
    };

    auto [pz, pc] = sweep(pb, 2, nullptr);
    c.check(pz, "Phi~2 of the Poisson bracket {x,y}=1 vanishes on " + std::to_string(pc) + " tuples");

    std::mt19937_64 rng(opt.seed + 10);
    auto B = random_bidiff(K, rng);
    int worst = 0;
    for (int slot = 0; slot < 2; ++slot) {
        auto so = slot_order(B, slot, OrderKind::derivation, 3, D, false, opt.kernel);
        worst = std::max(worst, so.cert.order.value_or(99));
    }
    c.check(worst <= 2, "random bidifferential operator has derivation slot orders <= 2 (max " +
                            std::to_string(worst) + ")");
    std::vector<Monomial> wit;
    auto [z2, n2] = sweep(B, 2, &wit);
    c.check(!z2, "Phi~2 of it is nonzero" + (z2 ? std::string() : " at " + mono_list(wit, K)));
    auto [z3, n3] = sweep(B, 3, nullptr);
    c.check(z3, "Phi~3 of it vanishes on " + std::to_string(n3) + " tuples");
}

} // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt)
{
    static const char* titles[] = {"",
                                   "golden lattices, arity 3",
                                   "dimension formulas",
                                   "Jacobiator membership",
                                   "tightness classification",
                                   "Filipov fundamental identity",
                                   "operator calculus on k[x,y]",
                                   "superbig bracket",
                                   "Terilla star",
                                   "Poisson bracket from a Lie algebra",
                                   "F-manifold bideviations"};
    Shared sh{opt.kernel, {}};
    std::vector<CriterionResult> out;
    for (int id = 1; id <= 10; ++id) {
        if (!opt.only.empty() && !opt.only.count(id))
            continue;
        CriterionResult r;
        r.id = id;
        r.title = titles[id];
        r.pass = true;
        Checker c{r};
        const auto t0 = Clock::now();
        try {
            switch (id) {
            case 1: criterion1(c, sh); break;
            case 2: criterion2(c, sh); break;
            case 3: criterion3(c, sh); break;
            case 4: criterion4(c, sh); break;
            case 5: criterion5(c, sh); break;
            case 6: criterion6(c, opt); break;
            case 7: criterion7(c, opt); break;
            case 8: criterion8(c, opt); break;
            case 9: criterion9(c); break;
            case 10: criterion10(c, opt); break;
            }
        } catch (const std::exception& e) {
            c.check(false, std::string("exception: ") + e.what());
        }
        r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        if (opt.on_result)
            opt.on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_line(const CriterionResult& r)
{
    std::ostringstream os;
    os << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.id << ": " << r.title;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << "  (" << r.seconds << " s)";
    return os.str();
}

nlohmann::json to_json(const std::vector<CriterionResult>& rs)
{
    nlohmann::json arr = nlohmann::json::array();
    bool all = true;
    for (auto& r : rs) {
        arr.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"details", r.details}});
        all = all && r.pass;
    }
    return {{"schema", "odlab/1"}, {"criteria", arr}, {"pass", all}};
}

} // namespace odlab
