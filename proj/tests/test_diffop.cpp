#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "gen.hpp"
#include "odlab/diffop.hpp"

using namespace odlab;

namespace {

AlgebraContext kx(int D = 6) { return AlgebraContext({{"x", 0}}, D); }
AlgebraContext kxy(int D = 6) { return AlgebraContext({{"x", 0}, {"y", 0}}, D); }
AlgebraContext graded(int D = 6) { return AlgebraContext({{"x", 0}, {"e", 1}, {"f", 1}, {"z", 2}}, D); }

Polynomial P(const char* s, const AlgebraContext& ctx) { return parse_polynomial(s, ctx); }

// symbolic d/dx on exponents, independent of the derivative code
LinearOperator oracle_ddx(const AlgebraContext& ctx, int times)
{
    return LinearOperator(ctx, 0, [ctx, times](const Monomial& m) {
        const int e = m.exponent(0);
        if (e < times)
            return Polynomial();
        std::vector<std::uint16_t> f;
        for (auto g : m.factors())
            f.push_back(g);
        f.erase(std::find(f.begin(), f.end(), 0), std::find(f.begin(), f.end(), 0) + times);
        Q c = 1;
        for (int k = 0; k < times; ++k)
            c *= e - k;
        return Polynomial(Monomial(f), c);
    });
}

LinearOperator ddx(const AlgebraContext& ctx, std::size_t g = 0) { return partial(g, ctx); }

// random Σ p ∂^α with |α| <= order, coefficients of word length <= 1
LinearOperator random_diffop(const AlgebraContext& ctx, int order)
{
    LinearOperator op = LinearOperator::zero(ctx);
    for (int k = 0; k <= order; ++k)
        for (int t = gen::uniform(0, 1); t >= 0; --t) {
            LinearOperator term = left_mult(gen::poly(ctx, 1, 2), ctx);
            for (int j = 0; j < k; ++j)
                term = compose(term, ddx(ctx, gen::uniform(0, static_cast<int>(ctx.size()) - 1)));
            op = op + term;
        }
    // force the top order
    LinearOperator top = LinearOperator::identity(ctx);
    for (int j = 0; j < order; ++j)
        top = compose(top, ddx(ctx, 0));
    return op + top;
}

} // namespace

TEST_SUITE("diffop")
{
    TEST_CASE("left multiplications")
    {
        auto ctx = kxy();
        CHECK(agree_upto(left_mult(Polynomial::constant(1), ctx), LinearOperator::identity(ctx), 6));
        CHECK(agree_upto(compose(left_mult(P("x", ctx), ctx), left_mult(P("y", ctx), ctx)),
                         left_mult(P("x*y", ctx), ctx), 4));
        auto g = graded();
        CHECK(left_mult(P("e", g), g)(P("f", g)) == P("e*f", g));
        CHECK(left_mult(P("f", g), g)(P("e", g)) == -P("e*f", g));
        CHECK(agree_upto(commutator(left_mult(P("e", g), g), left_mult(P("f", g), g)), LinearOperator::zero(g), 4));
    }

    TEST_CASE("partial derivatives match the exponent oracle")
    {
        auto ctx = kx(8);
        CHECK(agree_upto(ddx(ctx), oracle_ddx(ctx, 1), 8));
        CHECK(agree_upto(compose(ddx(ctx), ddx(ctx)), oracle_ddx(ctx, 2), 8));
    }

    TEST_CASE("commutators")
    {
        auto ctx = kx();
        CHECK(agree_upto(commutator(ddx(ctx), left_mult(P("x", ctx), ctx)), LinearOperator::identity(ctx), 5));
        auto d = ddx(ctx);
        CHECK(agree_upto(commutator(d, d), LinearOperator::zero(ctx), 5));
        auto g = graded();
        auto de = partial(1, g); // odd
        CHECK(agree_upto(commutator(de, de), compose(de, de).scaled(2), 4));
        CHECK(commutator(de, partial(2, g)).degree() == -2);
    }

    TEST_CASE("deviation examples")
    {
        auto ctx = kx();
        const Polynomial x = P("x", ctx);
        std::vector<Polynomial> xx{x, x};
        CHECK(deviation(ddx(ctx), xx).is_zero());
        CHECK(deviation(compose(ddx(ctx), ddx(ctx)), xx) == Polynomial::constant(2));
        auto one = Polynomial::constant(1);
        auto g = graded();
        auto d2 = compose(partial(0, g), partial(3, g));
        for (int t = 0; t < 30; ++t) {
            std::vector<Polynomial> a{gen::homogeneous(g, 2), one, gen::homogeneous(g, 2)};
            std::rotate(a.begin(), a.begin() + gen::uniform(0, 2), a.end());
            CHECK(deviation(d2, a).is_zero());
        }
    }

    TEST_CASE("deviation recursion equals the subset expansion")
    {
        auto g = graded(9);
        for (int t = 0; t < 60; ++t) {
            auto op = LinearOperator(g, 0, [g](const Monomial& m) {
                // a non-derivation: x^k u -> k x^{k-1} u + z u
                return left_derivative(Polynomial(m), 0, g) + multiply_exact(P("z", g), Polynomial(m), g);
            });
            std::vector<Polynomial> a;
            for (int k = gen::uniform(1, 4); k > 0; --k)
                a.push_back(gen::homogeneous(g, 2, 2));
            CHECK(deviation(op, a) == deviation_expanded(op, a));
        }
    }

    TEST_CASE("psi examples and properties")
    {
        auto ctx = kx();
        std::vector<Polynomial> x{P("x", ctx)};
        CHECK(agree_upto(psi(ddx(ctx), x), LinearOperator::identity(ctx), 5));

        auto g = graded(9);
        auto op = compose(left_mult(P("e + x*f", g), g), compose(partial(1, g), partial(0, g)));
        for (int t = 0; t < 40; ++t) {
            std::vector<Polynomial> a;
            for (int k = gen::uniform(1, 3); k > 0; --k)
                a.push_back(gen::homogeneous(g, 2, 2));
            const auto u = gen::poly(g, 2);
            CHECK(psi(op, a)(u) == psi_apply(op, a, u));

            // symmetric up to the Koszul sign of the permutation
            std::vector<int> perm(a.size()), deg;
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), gen::rng());
            std::vector<Polynomial> b;
            for (int i : perm)
                b.push_back(a[i]);
            for (auto& p : a)
                deg.push_back(gen::degree(g, p));
            CHECK(psi_apply(op, b, u) == psi_apply(op, a, u) * koszul_sign(deg, perm));
        }
    }

    TEST_CASE("unit and bridge identities")
    {
        auto g = graded(9);
        auto theta = compose(left_mult(P("e*f + z", g), g), compose(partial(1, g), partial(2, g)));
        const auto one = Polynomial::constant(1);
        for (int t = 0; t < 40; ++t) {
            std::vector<Polynomial> a;
            for (int k = gen::uniform(1, 3); k > 0; --k)
                a.push_back(gen::homogeneous(g, 2, 2));
            CHECK(psi_apply(theta, a, one) == deviation(theta, a));
            const auto x = gen::homogeneous(g, 2, 2);
            auto ax = a;
            ax.push_back(x);
            // theta is even; x passes the odd part of a
            int sa = 0;
            for (auto& p : a)
                sa += gen::degree(g, p);
            auto xphi = multiply_exact(x, deviation(theta, a), g);
            const bool flip = (gen::degree(g, x) & 1) && (sa & 1);
            CHECK(psi_apply(theta, a, x) == deviation(theta, ax) + (flip ? -xphi : xphi));
        }
    }

    TEST_CASE("order certificates")
    {
        auto ctx = kx();
        auto d = ddx(ctx), d2 = compose(d, d), Lx = left_mult(P("x", ctx), ctx);
        CHECK(derivation_order(d, 3).order == 1);
        CHECK(derivation_order(d2, 3).order == 2);
        auto c = derivation_order(Lx, 3);
        CHECK(c.exceeds());
        CHECK(c.witness.size() == 4);
        CHECK(diffop_order(Lx, 3).order == 0);
        CHECK(diffop_order(d, 3).order == 1);
        CHECK(diffop_order(d2 + Lx, 3).order == 2);
        CHECK(derivation_order(LinearOperator::zero(ctx), 3).order == 0);
    }

    TEST_CASE("serial and parallel kernels agree")
    {
        auto ctx = kxy(5);
        for (int t = 0; t < 6; ++t) {
            auto op = random_diffop(ctx, gen::uniform(0, 3));
            auto a = diffop_order(op, 4, -1, Kernel::serial), b = diffop_order(op, 4, -1, Kernel::parallel);
            CHECK(a.order == b.order);
            auto th = unital_split(op).theta;
            CHECK(derivation_order(th, 4, -1, Kernel::serial).order ==
                  derivation_order(th, 4, -1, Kernel::parallel).order);
            CHECK(derivation_order(th, 4).order == a.order);
        }
    }

    TEST_CASE("order additivity")
    {
        auto ctx = kxy(6);
        for (int t = 0; t < 8; ++t) {
            const int m = gen::uniform(0, 2), n = gen::uniform(0, 2);
            auto A = random_diffop(ctx, m), B = random_diffop(ctx, n);
            REQUIRE(diffop_order(A, 5).order == m);
            REQUIRE(diffop_order(B, 5).order == n);
            CHECK(diffop_order(compose(A, B), 5).order.value() <= m + n);
            auto cm = diffop_order(commutator(A, B), 5).order.value();
            CHECK(cm <= std::max(m + n - 1, 0));
            auto b = left_mult(gen::poly(ctx, 1), ctx);
            CHECK(diffop_order(compose(b, A), 5).order.value() <= m);
            CHECK(diffop_order(compose(A, b), 5).order.value() <= m);
        }
    }

    TEST_CASE("unital split examples")
    {
        auto ctx = kx();
        auto s1 = unital_split(left_mult(P("x^2", ctx), ctx));
        CHECK(agree_upto(s1.theta, LinearOperator::zero(ctx), 6));
        CHECK(s1.value == P("x^2", ctx));
        auto s2 = unital_split(ddx(ctx));
        CHECK(agree_upto(s2.theta, ddx(ctx), 6));
        CHECK(s2.value.is_zero());
        auto s3 = unital_split(ddx(ctx) + left_mult(P("x", ctx), ctx));
        CHECK(agree_upto(s3.theta, ddx(ctx), 5));
        CHECK(s3.value == P("x", ctx));
    }

    TEST_CASE("slot orders")
    {
        auto ctx = kxy(6);
        UpsilonTable tab(ctx, 1);
        tab.set_antisymmetric(Monomial({0}), Monomial({1}), Polynomial::constant(1));
        auto pb = extend_upsilon(tab);
        for (int s = 0; s < 2; ++s) {
            CHECK(slot_order(pb, s, OrderKind::derivation, 3).cert.order == 1);
            CHECK(slot_order(product_map(ctx, 2), s, OrderKind::diffop, 3).cert.order == 0);
        }
    }

    TEST_CASE("upsilon extension")
    {
        auto ctx = kxy(6);
        UpsilonTable tab(ctx, 1);
        tab.set_antisymmetric(Monomial({0}), Monomial({1}), Polynomial::constant(1));
        CHECK_FALSE(tab.antisymmetry_violation());
        auto pb = extend_upsilon(tab);
        // {f,g} = f_x g_y - f_y g_x
        for (int t = 0; t < 30; ++t) {
            auto f = gen::poly(ctx, 3), g = gen::poly(ctx, 3);
            auto expect = multiply_exact(left_derivative(f, 0, ctx), left_derivative(g, 1, ctx), ctx) -
                          multiply_exact(left_derivative(f, 1, ctx), left_derivative(g, 0, ctx), ctx);
            CHECK(pb(f, g) == expect);
        }
        CHECK(pb(P("x", ctx), P("y", ctx)) == Polynomial::constant(1));

        UpsilonTable zero(ctx, 2);
        auto z = extend_upsilon(zero);
        CHECK(z(P("x^2*y", ctx), P("y^2", ctx)).is_zero());

        UpsilonTable bad(ctx, 1);
        bad.set(Monomial({0}), Monomial({1}), Polynomial::constant(1));
        CHECK(bad.antisymmetry_violation());
        CHECK_THROWS_AS(extend_upsilon(bad), Error);
    }

    TEST_CASE("bideviation examples")
    {
        auto ctx = kxy(8);
        UpsilonTable tab(ctx, 1);
        tab.set_antisymmetric(Monomial({0}), Monomial({1}), Polynomial::constant(1));
        auto pb = extend_upsilon(tab);
        std::vector<Polynomial> a1{P("x", ctx), P("x", ctx)}, a2{P("y", ctx), P("y", ctx)};
        CHECK(bideviation(pb, a1, a2).is_zero());
        // the product has slot orders 0 but its second bideviation does not vanish
        CHECK(bideviation(product_map(ctx, 2), a1, a2) == P("x^2*y^2", ctx));
        CHECK(bideviation(MultilinearOperator::zero(ctx, 2), a1, a2).is_zero());
        std::vector<Polynomial> one{P("x^2", ctx)}, two{P("y", ctx)};
        CHECK(bideviation(pb, one, two) == pb(one[0], two[0]));
        std::vector<Polynomial> short1{P("x", ctx)};
        CHECK_THROWS_AS(bideviation(pb, short1, a2), Error);
    }

    TEST_CASE("bideviation equals iterated deviations in each slot")
    {
        auto ctx = kxy(8);
        auto op = MultilinearOperator(ctx, 2, 0, [ctx](std::span<const Monomial> m) {
            // x f_x g_yy + f g
            auto f = Polynomial(m[0]), g = Polynomial(m[1]);
            auto t = multiply_exact(left_derivative(f, 0, ctx),
                                    left_derivative(left_derivative(g, 1, ctx), 1, ctx), ctx);
            return multiply_exact(P("x", ctx), t, ctx) + multiply_exact(f, g, ctx);
        });
        for (int t = 0; t < 15; ++t) {
            const int n = gen::uniform(1, 3);
            std::vector<Polynomial> a, b;
            for (int k = 0; k < n; ++k) {
                a.push_back(gen::poly(ctx, 2, 2));
                b.push_back(gen::poly(ctx, 2, 2));
            }
            LinearOperator outer(ctx, 0, [&](const Monomial& x) {
                LinearOperator inner(ctx, 0, [&](const Monomial& y) {
                    std::vector<Monomial> xy{x, y};
                    return op.apply(xy);
                });
                return deviation(inner, b);
            });
            CHECK(bideviation(op, a, b) == deviation(outer, a));
        }
    }

    TEST_CASE("freeze applies the Koszul sign of the frozen arguments")
    {
        auto g = graded();
        auto prod = product_map(g, 2);
        const Monomial e({1}), f({2});
        std::vector<Monomial> fr{f};
        // slot 0 with f frozen on the right: u -> (-1)^{|u||f|} u f
        CHECK(prod.freeze(0, fr)(Polynomial(e)) == -multiply_exact(Polynomial(e), Polynomial(f), g));
        CHECK(prod.freeze(1, fr)(Polynomial(e)) == multiply_exact(Polynomial(f), Polynomial(e), g));
    }
}
