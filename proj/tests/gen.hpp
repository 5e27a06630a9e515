#pragma once

#include <random>
#include <vector>

#include "odlab/graded_poly.hpp"

namespace gen {

using odlab::AlgebraContext;
using odlab::Monomial;
using odlab::Polynomial;
using odlab::Q;

inline std::mt19937& rng()
{
    static std::mt19937 r(0x0d1ab);
    return r;
}

inline int uniform(int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng());
}

inline Q small_rational()
{
    int num = uniform(-4, 4);
    if (num == 0)
        num = 1;
    Q q(num, uniform(1, 3));
    q.canonicalize();
    return q;
}

inline Monomial monomial(const AlgebraContext& ctx, int max_len)
{
    const auto& b = ctx.basis(max_len);
    return b[uniform(0, static_cast<int>(b.size()) - 1)];
}

inline Polynomial poly(const AlgebraContext& ctx, int max_len, int max_terms = 3)
{
    Polynomial p;
    for (int k = uniform(1, max_terms); k > 0; --k)
        p.add_term(monomial(ctx, max_len), small_rational());
    return p;
}

// homogeneous in degree: all terms share the degree of the first
inline Polynomial homogeneous(const AlgebraContext& ctx, int max_len, int max_terms = 3)
{
    const Monomial m0 = monomial(ctx, max_len);
    Polynomial p(m0, small_rational());
    for (int k = uniform(0, max_terms - 1); k > 0; --k) {
        const Monomial m = monomial(ctx, max_len);
        if (ctx.degree(m) == ctx.degree(m0))
            p.add_term(m, small_rational());
    }
    return p;
}

inline int degree(const AlgebraContext& ctx, const Polynomial& p)
{
    return p.is_zero() ? 0 : ctx.degree(p.terms().begin()->first);
}

} // namespace gen
