#include <doctest.h>

#include "gen.hpp"
#include "odlab/graded_poly.hpp"

using namespace odlab;

namespace {

AlgebraContext mixed(int D = 6, AlgebraKind k = AlgebraKind::symmetric)
{
    return AlgebraContext({{"x", 0}, {"y", 1}, {"z", 2}, {"w", -1}}, D, k);
}

// bubble sort of the concatenated word, one transposition at a time
Polynomial oracle_product(const Monomial& a, const Monomial& b, const AlgebraContext& ctx)
{
    std::vector<std::uint16_t> w = a.factors();
    w.insert(w.end(), b.factors().begin(), b.factors().end());
    int sign = 1;
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t j = 0; j + 1 < w.size() - i; ++j)
            if (w[j] > w[j + 1]) {
                if (ctx.swap_odd(w[j], w[j + 1]))
                    sign = -sign;
                std::swap(w[j], w[j + 1]);
            }
    for (std::size_t j = 0; j + 1 < w.size(); ++j)
        if (w[j] == w[j + 1] && ctx.square_zero(w[j]))
            return {};
    return Polynomial(Monomial(w), sign);
}

} // namespace

TEST_SUITE("graded_poly")
{
    TEST_CASE("parse and print round trip")
    {
        auto ctx = mixed();
        for (const char* s : {"x^2*y - 1/2*z", "3", "w*y", "-x*z^2 + 2/3*x^3"}) {
            auto p = parse_polynomial(s, ctx);
            CHECK(parse_polynomial(to_string(p, ctx), ctx) == p);
        }
        CHECK(parse_polynomial("y*x", ctx) == parse_polynomial("x*y", ctx));
        CHECK(parse_polynomial("y*y", ctx).is_zero());
        CHECK(parse_polynomial("w*y", ctx) == -parse_polynomial("y*w", ctx));
        CHECK_THROWS_AS(parse_polynomial("x +* y", ctx), Error);
        CHECK_THROWS_AS(parse_polynomial("q", ctx), Error);
    }

    TEST_CASE("basis counts")
    {
        AlgebraContext two({{"x", 0}, {"y", 0}}, 4);
        CHECK(two.basis(4).size() == 15);
        AlgebraContext odd({{"a", 1}, {"b", 1}, {"c", 1}}, 6);
        CHECK(odd.basis(6).size() == 8);
        AlgebraContext ext({{"a", 0}, {"b", 0}}, 6, AlgebraKind::exterior);
        CHECK(ext.basis(6).size() == 4);
    }

    TEST_CASE("product agrees with the transposition oracle")
    {
        for (auto kind : {AlgebraKind::symmetric, AlgebraKind::exterior}) {
            auto ctx = mixed(6, kind);
            for (auto& a : ctx.basis(3))
                for (auto& b : ctx.basis(3))
                    CHECK(multiply_exact(Polynomial(a), Polynomial(b), ctx) == oracle_product(a, b, ctx));
        }
    }

    TEST_CASE("associativity and graded commutativity")
    {
        auto ctx = mixed(9);
        for (int t = 0; t < 200; ++t) {
            auto a = gen::homogeneous(ctx, 3), b = gen::homogeneous(ctx, 3), c = gen::poly(ctx, 3);
            CHECK(multiply_exact(multiply_exact(a, b, ctx), c, ctx) ==
                  multiply_exact(a, multiply_exact(b, c, ctx), ctx));
            const bool odd = (gen::degree(ctx, a) & 1) && (gen::degree(ctx, b) & 1);
            auto ab = multiply_exact(a, b, ctx), ba = multiply_exact(b, a, ctx);
            CHECK(ab == (odd ? -ba : ba));
        }
    }

    TEST_CASE("truncated product reports dropped terms")
    {
        AlgebraContext ctx({{"x", 0}}, 3);
        bool dropped = false;
        auto p = multiply(parse_polynomial("x^2", ctx), parse_polynomial("x^2 + 1", ctx), ctx, &dropped);
        CHECK(dropped);
        CHECK(p == parse_polynomial("x^2", ctx));
    }

    TEST_CASE("Leibniz rules for left and right derivatives")
    {
        auto ctx = mixed(9);
        for (int t = 0; t < 200; ++t) {
            auto a = gen::homogeneous(ctx, 3), b = gen::homogeneous(ctx, 3);
            const std::size_t i = gen::uniform(0, 3);
            const bool gi = ctx.degree(i) & 1;
            auto ab = multiply_exact(a, b, ctx);
            auto left = multiply_exact(left_derivative(a, i, ctx), b, ctx);
            auto tail = multiply_exact(a, left_derivative(b, i, ctx), ctx);
            CHECK(left_derivative(ab, i, ctx) == left + ((gi && (gen::degree(ctx, a) & 1)) ? -tail : tail));
            auto r1 = multiply_exact(a, right_derivative(b, i, ctx), ctx);
            auto r2 = multiply_exact(right_derivative(a, i, ctx), b, ctx);
            CHECK(right_derivative(ab, i, ctx) == r1 + ((gi && (gen::degree(ctx, b) & 1)) ? -r2 : r2));
        }
    }

    TEST_CASE("left and right derivatives of one generator")
    {
        auto ctx = mixed();
        auto p = parse_polynomial("y*z", ctx);
        CHECK(left_derivative(p, 1, ctx) == parse_polynomial("z", ctx));
        CHECK(right_derivative(p, 1, ctx) == parse_polynomial("z", ctx));
        auto q = parse_polynomial("w*y", ctx);
        CHECK(left_derivative(q, 1, ctx) == -parse_polynomial("w", ctx));
        CHECK(right_derivative(q, 1, ctx) == parse_polynomial("w", ctx));
    }

    TEST_CASE("context mismatch and membership")
    {
        auto ctx = mixed(3);
        CHECK_THROWS_AS(check_member(parse_polynomial("x^2", ctx), mixed(1)), Error);
        CHECK_NOTHROW(check_member(parse_polynomial("x^2", ctx), ctx));
    }

    TEST_CASE("suspension isomorphisms invert each other")
    {
        std::vector<Generator> W{{"a", 0}, {"b", 1}, {"c", -1}};
        auto ext = exterior_context(W, 3), up = up_context(W, 3), down = down_context(W, 3);
        for (int len = 0; len <= 3; ++len)
            for (auto& m : ext.basis(3)) {
                if (m.length() != len)
                    continue;
                Polynomial u(m, 1);
                auto v = suspend_iso(u, SuspendDirection::f, ext, up);
                CHECK(suspend_iso(v, SuspendDirection::f_inv, up, ext) == u);
            }
        for (auto& m : down.basis(3)) {
            Polynomial u(m, 1);
            auto v = suspend_iso(u, SuspendDirection::g, down, up);
            CHECK(suspend_iso(v, SuspendDirection::g_inv, up, down) == u);
        }
        CHECK_THROWS_AS(suspend_iso(Polynomial(up.basis(1)[1]), SuspendDirection::f, up, up), ContextMismatch);
    }

    TEST_CASE("json context round trip")
    {
        auto ctx = mixed(5, AlgebraKind::exterior);
        CHECK(AlgebraContext::from_json(ctx.to_json()) == ctx);
    }
}
