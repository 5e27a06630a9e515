#include "odlab/diffop.hpp"

#include <algorithm>
#include <limits>

#include <omp.h>

namespace odlab {

namespace {

void require_same(const AlgebraContext& a, const AlgebraContext& b)
{
    if (a != b)
        throw ContextMismatch("operators live on different algebras");
}

// Enumerate k-tuples of basis indices with total word length <= budget.
// Indices refer to `basis`; unit is basis[0].
template <class F>
void for_tuples(const std::vector<Monomial>& basis, int k, int budget, bool nondecreasing, bool skip_unit, F&& f)
{
    std::vector<int> t(k);
    auto rec = [&](auto&& self, int pos, int start, int left) -> bool {
        if (pos == k)
            return f(t);
        for (int i = nondecreasing ? start : 0; i < static_cast<int>(basis.size()); ++i) {
            int len = basis[i].length();
            if (len > left)
                break;  // basis ordered by length
            if (skip_unit && len == 0)
                continue;
            t[pos] = i;
            if (!self(self, pos + 1, i, left - len))
                return false;
        }
        return true;
    };
    rec(rec, 0, 0, budget);
}

std::vector<Polynomial> as_polys(const std::vector<Monomial>& basis, const std::vector<int>& idx, int from, int to)
{
    std::vector<Polynomial> r;
    for (int i = from; i < to; ++i)
        r.emplace_back(basis[idx[i]]);
    return r;
}

std::vector<Monomial> as_monos(const std::vector<Monomial>& basis, const std::vector<int>& idx)
{
    std::vector<Monomial> r;
    for (int i : idx)
        r.push_back(basis[i]);
    return r;
}

// First failing tuple (in enumeration order) among `tuples`, using `check` in parallel.
template <class F>
std::optional<std::size_t> first_failure(std::size_t count, F&& fails)
{
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(dynamic, 4) reduction(min : best)
    for (std::int64_t i = 0; i < n; ++i) {
        if (i >= best)
            continue;
        if (fails(static_cast<std::size_t>(i)))
            best = std::min(best, i);
    }
    if (best == std::numeric_limits<std::int64_t>::max())
        return std::nullopt;
    return static_cast<std::size_t>(best);
}

} // namespace

int parity(const AlgebraContext& ctx, const Polynomial& p)
{
    int par = 0;
    if (!parity_homogeneous(ctx, p, &par))
        throw Error("argument is not homogeneous in parity");
    return par;
}

Polynomial ordered_product(std::span<const Polynomial> ps, const AlgebraContext& ctx)
{
    Polynomial r = Polynomial::constant(1);
    for (auto& p : ps)
        r = multiply_exact(r, p, ctx);
    return r;
}

/* ---------------- LinearOperator ---------------- */

LinearOperator::LinearOperator(AlgebraContext ctx, int degree, Fn fn, int domain)
    : ctx_(std::move(ctx)), degree_(degree), fn_(std::move(fn)), domain_(domain)
{
}

LinearOperator LinearOperator::zero(const AlgebraContext& ctx, int degree)
{
    return LinearOperator(ctx, degree, [](const Monomial&) { return Polynomial(); });
}

LinearOperator LinearOperator::identity(const AlgebraContext& ctx)
{
    return LinearOperator(ctx, 0, [](const Monomial& m) { return Polynomial(m); });
}

LinearOperator LinearOperator::from_table(const AlgebraContext& ctx, int degree, std::map<Monomial, Polynomial> table)
{
    for (auto& [m, v] : table) {
        if (m.length() > ctx.truncation() || !ctx.basis_index(m))
            throw Error("operator table: key is not a basis monomial within the truncation");
        check_member(v, ctx);
        auto d = homogeneous_degree(ctx, v);
        if (!v.is_zero() && (!d || *d != ctx.degree(m) + degree))
            throw Error("operator table: image of " + ctx.to_string(m) + " is not of degree " +
                        std::to_string(ctx.degree(m) + degree));
    }
    auto shared = std::make_shared<const std::map<Monomial, Polynomial>>(std::move(table));
    return LinearOperator(
        ctx, degree,
        [shared](const Monomial& m) {
            auto it = shared->find(m);
            return it == shared->end() ? Polynomial() : it->second;
        },
        ctx.truncation());
}

Polynomial LinearOperator::apply(const Monomial& m) const
{
    if (domain_ >= 0 && m.length() > domain_)
        throw TruncationError("operator applied beyond its tabulated window (word length " +
                              std::to_string(m.length()) + " > " + std::to_string(domain_) + ")");
    return fn_(m);
}

Polynomial LinearOperator::operator()(const Polynomial& p) const
{
    Polynomial r;
    for (auto& [m, c] : p.terms())
        r += apply(m) * c;
    return r;
}

std::map<Monomial, Polynomial> LinearOperator::table(int len) const
{
    auto basis = ctx_.basis(len);
    std::vector<Polynomial> img(basis.size());
    const auto n = static_cast<std::int64_t>(basis.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i)
        img[i] = apply(basis[i]);
    std::map<Monomial, Polynomial> t;
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (!img[i].is_zero())
            t.emplace(basis[i], std::move(img[i]));
    return t;
}

LinearOperator LinearOperator::materialize(int len) const
{
    auto shared = std::make_shared<const std::map<Monomial, Polynomial>>(table(len));
    return LinearOperator(
        ctx_, degree_,
        [shared](const Monomial& m) {
            auto it = shared->find(m);
            return it == shared->end() ? Polynomial() : it->second;
        },
        len);
}

namespace {
int combined_domain(int a, int b)
{
    if (a < 0)
        return b;
    if (b < 0)
        return a;
    return std::min(a, b);
}
} // namespace

LinearOperator LinearOperator::operator+(const LinearOperator& o) const
{
    require_same(ctx_, o.ctx_);
    if (degree_ != o.degree_)
        throw Error("sum of operators of different degrees");
    auto a = fn_;
    auto b = o.fn_;
    return LinearOperator(ctx_, degree_, [a, b](const Monomial& m) { return a(m) + b(m); },
                          combined_domain(domain_, o.domain_));
}

LinearOperator LinearOperator::operator-(const LinearOperator& o) const
{
    return *this + o.scaled(-1);
}

LinearOperator LinearOperator::scaled(const Q& c) const
{
    auto a = fn_;
    return LinearOperator(ctx_, degree_, [a, c](const Monomial& m) { return a(m) * c; }, domain_);
}

LinearOperator left_mult(const Polynomial& a, const AlgebraContext& ctx)
{
    check_member(a, ctx);
    auto d = homogeneous_degree(ctx, a);
    if (!a.is_zero() && !d)
        throw Error("left multiplication by an inhomogeneous element");
    return LinearOperator(ctx, d.value_or(0),
                          [a, ctx](const Monomial& m) { return multiply_exact(a, Polynomial(m), ctx); });
}

LinearOperator partial(std::size_t gen, const AlgebraContext& ctx)
{
    if (gen >= ctx.size())
        throw ContextMismatch("partial: generator out of range");
    return LinearOperator(ctx, -ctx.degree(gen),
                          [gen, ctx](const Monomial& m) { return left_derivative(Polynomial(m), gen, ctx); });
}

LinearOperator compose(const LinearOperator& a, const LinearOperator& b)
{
    require_same(a.ctx(), b.ctx());
    return LinearOperator(a.ctx(), a.degree() + b.degree(), [a, b](const Monomial& m) { return a(b.apply(m)); },
                          b.domain());
}

LinearOperator commutator(const LinearOperator& a, const LinearOperator& b)
{
    const bool odd = (a.degree() & 1) && (b.degree() & 1);
    return compose(a, b) - compose(b, a).scaled(odd ? -1 : 1);
}

bool agree_upto(const LinearOperator& a, const LinearOperator& b, int len)
{
    for (auto& m : a.ctx().basis(len))
        if (a.apply(m) != b.apply(m))
            return false;
    return true;
}

/* ---------------- deviations and Ψ ---------------- */

Polynomial deviation(const LinearOperator& op, std::span<const Polynomial> args)
{
    const std::size_t n = args.size();
    if (n == 0)
        throw Error("deviation needs at least one argument");
    if (n == 1)
        return op(args[0]);
    const auto& ctx = op.ctx();
    const auto& an = args[n - 2];
    const auto& an1 = args[n - 1];
    std::vector<Polynomial> v(args.begin(), args.end() - 2);

    v.push_back(multiply_exact(an, an1, ctx));
    Polynomial r = deviation(op, v);

    v.back() = an;
    r -= multiply_exact(deviation(op, v), an1, ctx);

    v.back() = an1;
    auto t = multiply_exact(deviation(op, v), an, ctx);
    if (parity(ctx, an) && parity(ctx, an1))
        r += t;
    else
        r -= t;
    return r;
}

Polynomial deviation_expanded(const LinearOperator& op, std::span<const Polynomial> args)
{
    const int n = static_cast<int>(args.size());
    if (n == 0)
        throw Error("deviation needs at least one argument");
    const auto& ctx = op.ctx();
    std::vector<int> deg(n);
    for (int i = 0; i < n; ++i)
        deg[i] = parity(ctx, args[i]);
    Polynomial r;
    std::vector<int> perm;
    std::vector<Polynomial> in, out;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        perm.clear();
        in.clear();
        out.clear();
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) {
                perm.push_back(i);
                in.push_back(args[i]);
            }
        for (int i = 0; i < n; ++i)
            if (!(mask >> i & 1)) {
                perm.push_back(i);
                out.push_back(args[i]);
            }
        int s = koszul_sign(deg, perm);
        if ((n - static_cast<int>(in.size())) & 1)
            s = -s;
        auto t = multiply_exact(op(ordered_product(in, ctx)), ordered_product(out, ctx), ctx);
        r += t * s;
    }
    return r;
}

LinearOperator psi(const LinearOperator& op, std::span<const Polynomial> args)
{
    LinearOperator p = op;
    for (auto& a : args)
        p = commutator(p, left_mult(a, op.ctx()));
    return p;
}

Polynomial psi_apply(const LinearOperator& op, std::span<const Polynomial> args, const Polynomial& x)
{
    const int n = static_cast<int>(args.size());
    const auto& ctx = op.ctx();
    // items: 0 = the operator, 1..n = arguments
    std::vector<int> deg(n + 1);
    deg[0] = op.degree() & 1;
    for (int i = 0; i < n; ++i)
        deg[i + 1] = parity(ctx, args[i]);
    Polynomial r;
    std::vector<int> perm;
    std::vector<Polynomial> in, out;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        perm.clear();
        in.clear();
        out.clear();
        for (int i = 0; i < n; ++i)
            if (!(mask >> i & 1)) {
                perm.push_back(i + 1);
                out.push_back(args[i]);
            }
        perm.push_back(0);
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1) {
                perm.push_back(i + 1);
                in.push_back(args[i]);
            }
        int s = koszul_sign(deg, perm);
        if ((n - static_cast<int>(in.size())) & 1)
            s = -s;
        in.push_back(x);
        auto t = multiply_exact(ordered_product(out, ctx), op(ordered_product(in, ctx)), ctx);
        r += t * s;
    }
    return r;
}

/* ---------------- order sweeps ---------------- */

std::string OrderCertificate::describe() const
{
    if (order)
        return "order " + std::to_string(*order) + " up to truncation " + std::to_string(window);
    return "exceeds " + std::to_string(r_max);
}

std::optional<std::vector<Monomial>> deviation_witness(const LinearOperator& op, int n, int window, Kernel kernel)
{
    auto basis = op.ctx().basis(window);
    std::optional<std::vector<Monomial>> found;
    if (kernel == Kernel::serial) {
        for_tuples(basis, n, window, false, false, [&](const std::vector<int>& t) {
            if (!deviation(op, as_polys(basis, t, 0, n)).is_zero()) {
                found = as_monos(basis, t);
                return false;
            }
            return true;
        });
        return found;
    }
    std::vector<std::vector<int>> tuples;
    for_tuples(basis, n, window, true, false, [&](const std::vector<int>& t) {
        tuples.push_back(t);
        return true;
    });
    auto hit = first_failure(tuples.size(), [&](std::size_t i) {
        return !deviation_expanded(op, as_polys(basis, tuples[i], 0, n)).is_zero();
    });
    if (hit)
        found = as_monos(basis, tuples[*hit]);
    return found;
}

std::optional<std::vector<Monomial>> psi_witness(const LinearOperator& op, int n, int window, Kernel kernel)
{
    auto basis = op.ctx().basis(window);
    std::optional<std::vector<Monomial>> found;
    if (kernel == Kernel::serial) {
        for_tuples(basis, n, window, false, false, [&](const std::vector<int>& t) {
            auto args = as_polys(basis, t, 0, n);
            auto p = psi(op, args);
            int used = 0;
            for (int i : t)
                used += basis[i].length();
            for (auto& x : basis) {
                if (x.length() > window - used)
                    break;
                if (!p.apply(x).is_zero()) {
                    found = as_monos(basis, t);
                    found->push_back(x);
                    return false;
                }
            }
            return true;
        });
        return found;
    }
    // Ψ vanishes as soon as one argument is the unit, and is symmetric in its arguments
    std::vector<std::vector<int>> tuples;
    for_tuples(basis, n, window, true, true, [&](const std::vector<int>& t) {
        int used = 0;
        for (int i : t)
            used += basis[i].length();
        for (int x = 0; x < static_cast<int>(basis.size()) && basis[x].length() <= window - used; ++x) {
            auto v = t;
            v.push_back(x);
            tuples.push_back(std::move(v));
        }
        return true;
    });
    auto hit = first_failure(tuples.size(), [&](std::size_t i) {
        auto args = as_polys(basis, tuples[i], 0, n);
        return !psi_apply(op, args, Polynomial(basis[tuples[i][n]])).is_zero();
    });
    if (hit)
        found = as_monos(basis, tuples[*hit]);
    return found;
}

namespace {

template <class Witness>
OrderCertificate find_order(const LinearOperator& op, int r_max, int window, Kernel kernel, Witness&& witness)
{
    if (r_max < 0)
        throw Error("r_max must be >= 0");
    OrderCertificate c;
    c.r_max = r_max;
    c.window = window < 0 ? op.ctx().truncation() : window;
    LinearOperator o = kernel == Kernel::parallel ? op.materialize(c.window) : op;
    for (int r = 0; r <= r_max; ++r) {
        auto w = witness(o, r + 1, c.window, kernel);
        if (!w) {
            c.order = r;
            return c;
        }
        if (r == r_max)
            c.witness = *w;
    }
    return c;
}

} // namespace

OrderCertificate derivation_order(const LinearOperator& op, int r_max, int window, Kernel kernel)
{
    return find_order(op, r_max, window, kernel, deviation_witness);
}

OrderCertificate diffop_order(const LinearOperator& op, int r_max, int window, Kernel kernel)
{
    return find_order(op, r_max, window, kernel, psi_witness);
}

UnitalSplit unital_split(const LinearOperator& op)
{
    Polynomial v = op.apply(Monomial());
    LinearOperator l = v.is_zero() ? LinearOperator::zero(op.ctx(), op.degree()) : left_mult(v, op.ctx());
    return {op - l, v};
}

/* ---------------- MultilinearOperator ---------------- */

MultilinearOperator::MultilinearOperator(AlgebraContext ctx, int arity, int degree, Fn fn, int domain, Symmetry sym)
    : ctx_(std::move(ctx)), arity_(arity), degree_(degree), fn_(std::move(fn)), domain_(domain), sym_(sym)
{
    if (arity < 1)
        throw Error("multilinear operator arity must be >= 1");
}

MultilinearOperator MultilinearOperator::zero(const AlgebraContext& ctx, int arity, int degree)
{
    return MultilinearOperator(ctx, arity, degree, [](std::span<const Monomial>) { return Polynomial(); });
}

MultilinearOperator MultilinearOperator::from_table(const AlgebraContext& ctx, int arity, int degree,
                                                    std::map<std::vector<Monomial>, Polynomial> table, Symmetry sym)
{
    for (auto& [ms, v] : table) {
        if (static_cast<int>(ms.size()) != arity)
            throw Error("operator table: tuple of wrong arity");
        int len = 0, d = degree;
        for (auto& m : ms) {
            if (!ctx.basis_index(m))
                throw Error("operator table: key is not a basis monomial");
            len += m.length();
            d += ctx.degree(m);
        }
        if (len > ctx.truncation())
            throw Error("operator table: tuple exceeds the truncation");
        check_member(v, ctx);
        auto hd = homogeneous_degree(ctx, v);
        if (!v.is_zero() && (!hd || *hd != d))
            throw Error("operator table: inhomogeneous or wrong-degree value");
    }
    auto shared = std::make_shared<const std::map<std::vector<Monomial>, Polynomial>>(std::move(table));
    MultilinearOperator op(
        ctx, arity, degree,
        [shared](std::span<const Monomial> ms) {
            auto it = shared->find(std::vector<Monomial>(ms.begin(), ms.end()));
            return it == shared->end() ? Polynomial() : it->second;
        },
        ctx.truncation());
    return sym == Symmetry::none ? op : op.with_symmetry(sym);
}

Polynomial MultilinearOperator::apply(std::span<const Monomial> ms) const
{
    if (static_cast<int>(ms.size()) != arity_)
        throw Error("multilinear operator applied to the wrong number of arguments");
    if (domain_ >= 0) {
        int len = 0;
        for (auto& m : ms)
            len += m.length();
        if (len > domain_)
            throw TruncationError("multilinear operator applied beyond its tabulated window");
    }
    return fn_(ms);
}

Polynomial MultilinearOperator::operator()(std::span<const Polynomial> ps) const
{
    if (static_cast<int>(ps.size()) != arity_)
        throw Error("multilinear operator applied to the wrong number of arguments");
    Polynomial r;
    std::vector<Monomial> ms(arity_);
    auto rec = [&](auto&& self, int i, const Q& c) -> void {
        if (i == arity_) {
            r += apply(ms) * c;
            return;
        }
        for (auto& [m, v] : ps[i].terms()) {
            ms[i] = m;
            self(self, i + 1, c * v);
        }
    };
    rec(rec, 0, Q(1));
    return r;
}

Polynomial MultilinearOperator::operator()(const Polynomial& a, const Polynomial& b) const
{
    std::vector<Polynomial> v{a, b};
    return (*this)(v);
}

LinearOperator MultilinearOperator::freeze(int slot, std::span<const Monomial> others) const
{
    if (slot < 0 || slot >= arity_)
        throw Error("slot out of range");
    if (static_cast<int>(others.size()) != arity_ - 1)
        throw Error("freeze: need arity-1 frozen arguments");
    int deg = degree_, len = 0;
    for (auto& m : others) {
        deg += ctx_.degree(m);
        len += m.length();
    }
    std::vector<Monomial> frozen(others.begin(), others.end());
    // the input passes the frozen arguments to its right
    int right = 0;
    for (std::size_t k = slot; k < frozen.size(); ++k)
        right += ctx_.degree(frozen[k]);
    auto self = *this;
    return LinearOperator(
        ctx_, deg,
        [self, frozen, slot, right](const Monomial& m) {
            std::vector<Monomial> t = frozen;
            t.insert(t.begin() + slot, m);
            auto r = self.apply(t);
            if ((right & 1) && (self.ctx().degree(m) & 1))
                r *= Q(-1);
            return r;
        },
        domain_ < 0 ? -1 : domain_ - len);
}

MultilinearOperator MultilinearOperator::operator+(const MultilinearOperator& o) const
{
    require_same(ctx_, o.ctx_);
    if (arity_ != o.arity_ || degree_ != o.degree_)
        throw Error("sum of multilinear operators of different arity or degree");
    auto a = fn_;
    auto b = o.fn_;
    return MultilinearOperator(
        ctx_, arity_, degree_, [a, b](std::span<const Monomial> ms) { return a(ms) + b(ms); },
        combined_domain(domain_, o.domain_), sym_ == o.sym_ ? sym_ : Symmetry::none);
}

MultilinearOperator MultilinearOperator::operator-(const MultilinearOperator& o) const
{
    return *this + o.scaled(-1);
}

MultilinearOperator MultilinearOperator::scaled(const Q& c) const
{
    auto a = fn_;
    return MultilinearOperator(
        ctx_, arity_, degree_, [a, c](std::span<const Monomial> ms) { return a(ms) * c; }, domain_, sym_);
}

MultilinearOperator MultilinearOperator::with_symmetry(Symmetry s, int window) const
{
    int w = window < 0 ? (domain_ < 0 ? ctx_.truncation() : domain_) : window;
    if (auto bad = symmetry_violation(*this, s, w)) {
        std::string t;
        for (auto& m : *bad)
            t += (t.empty() ? "" : ", ") + ctx_.to_string(m);
        throw Error("declared symmetry fails at (" + t + ")");
    }
    MultilinearOperator r = *this;
    r.sym_ = s;
    return r;
}

std::map<std::vector<Monomial>, Polynomial> MultilinearOperator::table(int window) const
{
    auto basis = ctx_.basis(window);
    std::map<std::vector<Monomial>, Polynomial> t;
    for_tuples(basis, arity_, window, false, false, [&](const std::vector<int>& idx) {
        auto ms = as_monos(basis, idx);
        auto v = apply(ms);
        if (!v.is_zero())
            t.emplace(std::move(ms), std::move(v));
        return true;
    });
    return t;
}

std::optional<std::vector<Monomial>> symmetry_violation(const MultilinearOperator& op, Symmetry s, int window)
{
    if (s == Symmetry::none || op.arity() < 2)
        return std::nullopt;
    const auto& ctx = op.ctx();
    auto basis = ctx.basis(window);
    std::optional<std::vector<Monomial>> bad;
    for_tuples(basis, op.arity(), window, false, false, [&](const std::vector<int>& idx) {
        auto ms = as_monos(basis, idx);
        auto v = op.apply(ms);
        for (int k = 0; k + 1 < op.arity(); ++k) {
            auto sw = ms;
            std::swap(sw[k], sw[k + 1]);
            bool odd = (ctx.degree(ms[k]) & 1) && (ctx.degree(ms[k + 1]) & 1);
            if (s == Symmetry::graded_antisymmetric)
                odd = !odd;
            auto w = op.apply(sw);
            if (v != (odd ? -w : w)) {
                bad = ms;
                return false;
            }
        }
        return true;
    });
    return bad;
}

MultilinearOperator product_map(const AlgebraContext& ctx, int arity)
{
    return MultilinearOperator(ctx, arity, 0, [ctx](std::span<const Monomial> ms) {
        Polynomial r = Polynomial::constant(1);
        for (auto& m : ms)
            r = multiply_exact(r, Polynomial(m), ctx);
        return r;
    }, -1, Symmetry::graded_symmetric);
}

SlotOrder slot_order(const MultilinearOperator& op, int slot, OrderKind kind, int r_max, int window,
                     bool with_breakdown, Kernel kernel)
{
    if (slot < 0 || slot >= op.arity())
        throw Error("slot out of range");
    const int W = window < 0 ? op.ctx().truncation() : window;
    auto basis = op.ctx().basis(W);
    std::vector<std::vector<int>> frozen;
    for_tuples(basis, op.arity() - 1, W, false, false, [&](const std::vector<int>& t) {
        frozen.push_back(t);
        return true;
    });
    std::vector<OrderCertificate> certs(frozen.size());
    auto one = [&](std::size_t i) {
        auto others = as_monos(basis, frozen[i]);
        int used = 0;
        for (auto& m : others)
            used += m.length();
        auto u = op.freeze(slot, others);
        certs[i] = kind == OrderKind::derivation ? derivation_order(u, r_max, W - used, kernel)
                                                 : diffop_order(u, r_max, W - used, kernel);
    };
    if (kernel == Kernel::parallel) {
        const auto n = static_cast<std::int64_t>(frozen.size());
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < n; ++i)
            one(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < frozen.size(); ++i)
            one(i);
    }
    SlotOrder res;
    res.cert.r_max = r_max;
    res.cert.window = W;
    res.cert.order = 0;
    for (std::size_t i = 0; i < frozen.size(); ++i) {
        auto& c = certs[i];
        if (c.exceeds()) {
            if (res.cert.order) {
                res.cert.order.reset();
                res.cert.witness = as_monos(basis, frozen[i]);
                res.cert.witness.insert(res.cert.witness.end(), c.witness.begin(), c.witness.end());
            }
        } else if (res.cert.order) {
            res.cert.order = std::max(*res.cert.order, *c.order);
        }
        if (with_breakdown)
            res.breakdown.emplace_back(as_monos(basis, frozen[i]), c);
    }
    return res;
}

/* ---------------- Υ-extension ---------------- */

UpsilonTable::UpsilonTable(AlgebraContext ctx, int n, int degree) : ctx_(std::move(ctx)), n_(n), degree_(degree)
{
    if (n < 1)
        throw Error("upsilon table order must be >= 1");
}

void UpsilonTable::set(const Monomial& a, const Monomial& b, const Polynomial& value)
{
    if (a.length() < 1 || a.length() > n_ || b.length() < 1 || b.length() > n_)
        throw Error("upsilon entry outside 1 <= i,j <= n");
    check_member(value, ctx_);
    if (value.is_zero())
        e_.erase({a, b});
    else
        e_[{a, b}] = value;
}

void UpsilonTable::set_antisymmetric(const Monomial& a, const Monomial& b, const Polynomial& value)
{
    bool odd = (ctx_.degree(a) & 1) && (ctx_.degree(b) & 1);
    Polynomial mirror = odd ? value : -value;
    if (a == b && mirror != value)
        throw Error("upsilon entry conflicts with graded antisymmetry");
    set(a, b, value);
    set(b, a, mirror);
}

Polynomial UpsilonTable::get(const Monomial& a, const Monomial& b) const
{
    auto it = e_.find({a, b});
    return it == e_.end() ? Polynomial() : it->second;
}

std::optional<std::string> UpsilonTable::antisymmetry_violation() const
{
    for (auto& [k, v] : e_) {
        auto& [a, b] = k;
        bool odd = (ctx_.degree(a) & 1) && (ctx_.degree(b) & 1);
        if (get(b, a) != (odd ? v : -v))
            return "entry (" + ctx_.to_string(a) + ", " + ctx_.to_string(b) + ") has no antisymmetric partner";
    }
    return std::nullopt;
}

namespace {

// all subsets of {0..n-1} of size k, as increasing index lists
void for_subsets(int n, int k, const std::function<void(const std::vector<int>&)>& f)
{
    std::vector<int> s;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(s.size()) == k) {
            f(s);
            return;
        }
        for (int i = start; i < n; ++i) {
            s.push_back(i);
            self(self, i + 1);
            s.pop_back();
        }
    };
    rec(rec, 0);
}

std::vector<int> complement(int n, const std::vector<int>& s)
{
    std::vector<int> c;
    for (int i = 0, j = 0; i < n; ++i) {
        if (j < static_cast<int>(s.size()) && s[j] == i)
            ++j;
        else
            c.push_back(i);
    }
    return c;
}

SignedMonomial sub_word(const AlgebraContext& ctx, const std::vector<std::uint16_t>& f, const std::vector<int>& pos)
{
    std::vector<std::uint16_t> w;
    for (int p : pos)
        w.push_back(f[p]);
    return word_to_monomial(ctx, w);
}

} // namespace

MultilinearOperator extend_upsilon(const UpsilonTable& tab)
{
    if (auto bad = tab.antisymmetry_violation())
        throw Error("extend_upsilon: " + *bad);
    auto shared = std::make_shared<const UpsilonTable>(tab);
    const auto& ctx = tab.ctx();
    auto fn = [shared, ctx](std::span<const Monomial> ms) {
        const auto& x1 = ms[0].factors();
        const auto& x2 = ms[1].factors();
        const int s = static_cast<int>(x1.size());
        const int t = static_cast<int>(x2.size());
        const int n = shared->order();
        std::vector<int> d1, d2;
        for (auto g : x1)
            d1.push_back(ctx.degree(g) & 1);
        for (auto g : x2)
            d2.push_back(ctx.degree(g) & 1);
        Polynomial r;
        for (int i = 1; i <= std::min(n, s); ++i)
            for (int j = 1; j <= std::min(n, t); ++j)
                for_subsets(s, i, [&](const std::vector<int>& tail) {
                    auto head = complement(s, tail);
                    std::vector<int> p1 = head;
                    p1.insert(p1.end(), tail.begin(), tail.end());
                    int e1 = koszul_sign(d1, p1);
                    auto L = sub_word(ctx, x1, head);
                    auto A = sub_word(ctx, x1, tail);
                    if (L.sign == 0 || A.sign == 0)
                        return;
                    for_subsets(t, j, [&](const std::vector<int>& front) {
                        auto rest = complement(t, front);
                        std::vector<int> p2 = front;
                        p2.insert(p2.end(), rest.begin(), rest.end());
                        int e2 = koszul_sign(d2, p2);
                        auto B = sub_word(ctx, x2, front);
                        auto R = sub_word(ctx, x2, rest);
                        if (B.sign == 0 || R.sign == 0)
                            return;
                        auto u = shared->get(A.mono, B.mono);
                        if (u.is_zero())
                            return;
                        auto term = multiply_exact(multiply_exact(Polynomial(L.mono), u, ctx), Polynomial(R.mono), ctx);
                        r += term * Q(e1 * e2 * L.sign * A.sign * B.sign * R.sign);
                    });
                });
        return r;
    };
    return MultilinearOperator(ctx, 2, tab.degree(), fn, -1, Symmetry::graded_antisymmetric);
}

/* ---------------- bideviations ---------------- */

Polynomial bideviation(const MultilinearOperator& op, std::span<const Polynomial> a, std::span<const Polynomial> b)
{
    if (op.arity() != 2)
        throw Error("bideviation needs a bilinear operator");
    if (a.size() != b.size() || a.empty())
        throw Error("bideviation: argument counts must match and be >= 1");
    const auto& ctx = op.ctx();
    const std::size_t m = a.size() - 1;
    if (m == 0)
        return op(a[0], b[0]);
    auto mul = [&](const Polynomial& x, const Polynomial& y) { return multiply_exact(x, y, ctx); };

    // first two primed arguments merged, or one of them dropped
    std::vector<Polynomial> aM{mul(a[0], a[1])}, a0, a1{a[0]};
    aM.insert(aM.end(), a.begin() + 2, a.end());
    a0.assign(a.begin() + 1, a.end());
    a1.insert(a1.end(), a.begin() + 2, a.end());
    // last two double-primed arguments merged, or one of them dropped
    std::vector<Polynomial> bM(b.begin(), b.end() - 2), bL(b.begin(), b.end() - 1), bP(b.begin(), b.end() - 2);
    bM.push_back(mul(b[m - 1], b[m]));
    bP.push_back(b[m]);

    const Q e1 = (parity(ctx, a[0]) && parity(ctx, a[1])) ? -1 : 1;
    const Q e2 = (parity(ctx, b[m - 1]) && parity(ctx, b[m])) ? -1 : 1;

    Polynomial r = bideviation(op, aM, bM);
    r -= mul(a[0], bideviation(op, a0, bM));
    r -= mul(a[1], bideviation(op, a1, bM)) * e1;
    r -= mul(bideviation(op, aM, bL), b[m]);
    r -= mul(bideviation(op, aM, bP), b[m - 1]) * e2;
    r += mul(mul(a[0], bideviation(op, a0, bL)), b[m]);
    r += mul(mul(a[1], bideviation(op, a1, bL)), b[m]) * e1;
    r += mul(mul(a[0], bideviation(op, a0, bP)), b[m - 1]) * e2;
    r += mul(mul(a[1], bideviation(op, a1, bP)), b[m - 1]) * (e1 * e2);
    return r;
}

} // namespace odlab
