#include <doctest.h>

#include "gen.hpp"
#include "odlab/operad.hpp"

using namespace odlab;

namespace {

std::shared_ptr<FreeOperad> one_gen(Symm s, int arity = 2, int degree = 0, int max_arity = 5, int max_weight = -1)
{
    return std::make_shared<FreeOperad>(std::vector<SigmaGenerator>{{"b", arity, degree, s}}, max_arity, max_weight);
}

long binom(int n, int k)
{
    long r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

OperadElement random_element(const OperadModel& P, int n)
{
    OperadElement e{n, {}};
    for (int k = gen::uniform(1, 3); k > 0; --k)
        e.v.axpy(gen::small_rational(), SparseVec::unit(gen::uniform(0, static_cast<int>(P.dim(n)) - 1)));
    return e;
}

Perm random_perm(int n)
{
    Perm p = identity_perm(n);
    std::shuffle(p.begin(), p.end(), gen::rng());
    return p;
}

Perm after(const Perm& s, const Perm& t)
{
    Perm r(s.size());
    for (std::size_t k = 0; k < s.size(); ++k)
        r[k] = s[t[k]];
    return r;
}

OperadElement unit_element(const FreeOperad& F)
{
    return {1, F.vector_of(Tree::make_leaf(1))};
}

} // namespace

TEST_SUITE("operad")
{
    TEST_CASE("component dimensions")
    {
        auto A = one_gen(Symm::antisymmetric);
        CHECK(A->dim(3) == 3);
        auto R = one_gen(Symm::regular);
        CHECK(R->dim(3) == 12);
        // Catalan(n-1) * n!
        const long cat[] = {1, 1, 2, 5};
        const long fact[] = {1, 2, 6, 24};
        for (int n = 1; n <= 4; ++n)
            CHECK(R->dim(n) == cat[n - 1] * fact[n - 1]);
        for (int k : {2, 3}) {
            auto T = one_gen(Symm::antisymmetric, k, 0, 2 * k - 1);
            CHECK(T->dim(2 * k - 1) == binom(2 * k - 1, k));
        }
        auto S = one_gen(Symm::symmetric);
        CHECK(S->dim(3) == 3);
        CHECK(S->dim(4) == 15);
    }

    TEST_CASE("basis order is deterministic")
    {
        auto A = one_gen(Symm::antisymmetric);
        auto B = one_gen(Symm::antisymmetric);
        CHECK(A->basis(4) == B->basis(4));
    }

    TEST_CASE("normal forms")
    {
        auto A = one_gen(Symm::antisymmetric);
        CHECK(A->parse_element("b(2,1)").v == A->parse_element("-b(1,2)").v);
        CHECK(A->parse_element("b(3,b(1,2))").v == A->parse_element("-b(b(1,2),3)").v);
        auto S = one_gen(Symm::symmetric);
        CHECK(S->parse_element("b(3,b(2,1))").v == S->parse_element("b(b(1,2),3)").v);
        CHECK_THROWS(A->parse_element("b(1,1)"));
        auto odd = one_gen(Symm::antisymmetric, 2, 1);
        // odd generator in sign rep: swapping two odd subtrees contributes an extra sign
        CHECK(odd->parse_element("b(b(3,4),b(1,2))").v == odd->parse_element("b(b(1,2),b(3,4))").v);
    }

    TEST_CASE("unit and grafting")
    {
        auto A = one_gen(Symm::antisymmetric);
        const auto b = A->parse_element("b(1,2)");
        CHECK(compose(*A, unit_element(*A), 1, b).v == b.v);
        CHECK(compose(*A, b, 1, unit_element(*A)).v == b.v);
        CHECK(compose(*A, b, 1, b).v == A->parse_element("b(b(1,2),3)").v);
        CHECK(compose(*A, b, 2, b).v == A->parse_element("b(1,b(2,3))").v);
        CHECK_THROWS_AS(compose(*A, b, 3, b), Error);
    }

    TEST_CASE("operad axioms on random elements")
    {
        for (auto s : {Symm::antisymmetric, Symm::symmetric, Symm::regular}) {
            auto P = one_gen(s, 2, 0, 5);
            for (int t = 0; t < 25; ++t) {
                auto a = random_element(*P, 2), b = random_element(*P, 2), c = random_element(*P, 2);
                const int i = gen::uniform(1, 2), j = gen::uniform(1, 2);
                // sequential
                CHECK(compose(*P, compose(*P, a, i, b), i + j - 1, c).v ==
                      compose(*P, a, i, compose(*P, b, j, c)).v);
                // parallel, i < j
                CHECK(compose(*P, compose(*P, a, 1, b), 3, c).v == compose(*P, compose(*P, a, 2, c), 1, b).v);
                // right action
                auto x = random_element(*P, 3);
                auto s1 = random_perm(3), s2 = random_perm(3);
                CHECK(act(*P, after(s1, s2), x).v == act(*P, s2, act(*P, s1, x)).v);
                CHECK(act(*P, identity_perm(3), x).v == x.v);
            }
        }
    }

    TEST_CASE("parallel composition carries the Koszul sign")
    {
        auto P = one_gen(Symm::regular, 2, 1, 4);
        const auto b = P->parse_element("b(1,2)");
        auto rhs = compose(*P, compose(*P, b, 2, b), 1, b).v;
        rhs *= -1;
        CHECK(compose(*P, compose(*P, b, 1, b), 3, b).v == rhs);
    }

    TEST_CASE("equivariance of composition")
    {
        auto P = one_gen(Symm::regular, 2, 0, 4);
        for (int t = 0; t < 20; ++t) {
            auto a = random_element(*P, 2), b = random_element(*P, 2);
            // (a·σ) ∘_1 b with σ = (21) equals (a ∘_2 b)·(block swap)
            const Perm swap{1, 0};
            auto lhs = compose(*P, act(*P, swap, a), 1, b);
            auto rhs = act(*P, Perm{1, 2, 0}, compose(*P, a, 2, b));
            CHECK(lhs.v == rhs.v);
        }
    }

    TEST_CASE("symmetric group action examples")
    {
        const Perm tw{1, 0};
        auto A = one_gen(Symm::antisymmetric);
        auto b = A->parse_element("b(1,2)");
        CHECK(act(*A, tw, b).v == A->parse_element("-b(1,2)").v);
        auto S = one_gen(Symm::symmetric);
        CHECK(act(*S, tw, S->parse_element("b(1,2)")).v == S->parse_element("b(1,2)").v);
        auto R = one_gen(Symm::regular);
        auto r = act(*R, tw, R->parse_element("b(1,2)"));
        CHECK(r.v == R->parse_element("b(2,1)").v);
        CHECK_FALSE(r.v == R->parse_element("b(1,2)").v);
        CHECK_THROWS_AS(act(*R, Perm{0, 1, 2}, R->parse_element("b(1,2)")), Error);
    }

    TEST_CASE("commutators")
    {
        auto D = one_gen(Symm::regular, 1, 1, 2, 3);
        auto d = D->parse_element("b(1)");
        auto dd = compose(*D, d, 1, d);
        auto c = op_commutator(*D, d, d, 1, 1);
        auto twice = dd;
        twice.v *= 2;
        CHECK(c.v == twice.v);

        auto R = one_gen(Symm::regular, 2, 0, 4);
        auto a = R->parse_element("b(1,2)");
        auto x = R->parse_element("b(b(1,2),3)");
        auto cab = op_commutator(*R, a, x, 1, 1);
        // second term: leaves (x, a_2, b_2, b_3) reordered to (x, b_2, b_3, a_2)
        CHECK(cab.v == compose(*R, a, 1, x).v - R->relabel(4, compose(*R, x, 1, a).v, Perm{0, 3, 1, 2}));

        for (auto deg : {0, 1}) {
            auto P = one_gen(Symm::regular, 2, deg, 5);
            for (int t = 0; t < 20; ++t) {
                const int m = gen::uniform(2, 3), n = gen::uniform(2, 3);
                auto u = random_element(*P, m), v = random_element(*P, n);
                const int i = gen::uniform(1, m), j = gen::uniform(1, n);
                const int du = (m - 1) * deg, dv = (n - 1) * deg;
                auto l = op_commutator(*P, u, v, i, j).v;
                // leaves of [v,u]_ji are (u_L, v_L, x, u_R, v_R); move to (v_L, u_L, x, v_R, u_R)
                Perm rho(m + n - 1);
                for (int k = 0; k < i - 1; ++k)
                    rho[k] = j - 1 + k;
                for (int k = 0; k < j - 1; ++k)
                    rho[i - 1 + k] = k;
                rho[i + j - 2] = i + j - 2;
                for (int k = 0; k < m - i; ++k)
                    rho[i + j - 1 + k] = i + n - 1 + k;
                for (int k = 0; k < n - j; ++k)
                    rho[j + m - 1 + k] = i + j - 1 + k;
                auto r = P->relabel(m + n - 1, op_commutator(*P, v, u, j, i).v, rho);
                r *= ((du & 1) && (dv & 1)) ? 1 : -1;
                CHECK(l == r);
            }
        }
    }

    TEST_CASE("Jacobiators")
    {
        auto A = one_gen(Symm::antisymmetric);
        auto j2 = jacobiator(*A, 0);
        CHECK(j2.v == A->parse_element("b(b(1,2),3) + b(b(2,3),1) + b(b(3,1),2)").v);
        CHECK(act(*A, Perm{1, 2, 0}, j2).v == j2.v);
        CHECK(act(*A, Perm{2, 0, 1}, j2).v == j2.v);
        auto T = one_gen(Symm::antisymmetric, 3, 1, 5);
        auto j3 = jacobiator(*T, 0);
        CHECK(j3.arity == 5);
        CHECK(j3.v.nnz() == 10);
        auto S = one_gen(Symm::symmetric);
        CHECK_THROWS_AS(jacobiator(*S, 0), Error);
    }

    TEST_CASE("quotient dimensions")
    {
        auto A = one_gen(Symm::antisymmetric, 2, 0, 4);
        QuotientOperad lie(A, {jacobiator(*A, 0)});
        CHECK(lie.dim(3) == 2);
        CHECK(lie.dim(4) == 6);
        auto S = one_gen(Symm::symmetric, 2, 0, 4);
        QuotientOperad com(S, {associator(*S, 0)});
        CHECK(com.dim(3) == 1);
        CHECK(com.dim(4) == 1);
        auto R = one_gen(Symm::regular, 2, 0, 4);
        QuotientOperad ass(R, {associator(*R, 0)});
        CHECK(ass.dim(3) == 6);
        CHECK(ass.dim(4) == 24);
        QuotientOperad none(A, {});
        for (int n = 1; n <= 4; ++n)
            CHECK(none.dim(n) == A->dim(n));
    }

    TEST_CASE("presentations from json")
    {
        nlohmann::json j = {{"generators", {{{"name", "b"}, {"arity", 2}, {"symmetry", "antisymmetric"}}}},
                            {"relations", {"jacobiator(b)"}},
                            {"max_arity", 4}};
        std::shared_ptr<const FreeOperad> F;
        auto pres = presentation_from_json(j, &F);
        REQUIRE(F);
        CHECK(pres.relations.size() == 1);
        CHECK(pres.relations[0].v == jacobiator(*F, 0).v);
        j["relations"] = {{{"arity", 3}, {"terms", {{{"coeff", "1"}, {"tree", "b(b(1,2),3)"}}}}}};
        auto p2 = presentation_from_json(j);
        CHECK(p2.relations.size() == 1);
        j["relations"] = {"nonsense(b)"};
        CHECK_THROWS(presentation_from_json(j));
    }

    TEST_CASE("simple connectivity")
    {
        CHECK(one_gen(Symm::antisymmetric)->simply_connected());
        CHECK_FALSE(one_gen(Symm::regular, 1, 1, 3, 2)->simply_connected());
    }
}
