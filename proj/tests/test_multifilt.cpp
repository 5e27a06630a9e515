#include <doctest.h>

#include "gen.hpp"
#include "odlab/multifilt.hpp"

using namespace odlab;

namespace {

std::shared_ptr<FreeOperad> one_gen(Symm s, int arity = 2, int degree = 0, int max_arity = 4)
{
    return std::make_shared<FreeOperad>(std::vector<SigmaGenerator>{{"b", arity, degree, s}}, max_arity);
}

std::map<MultiIndex, std::size_t> dims(const Multifiltration& F, int n)
{
    auto L = lattice(F, n);
    return {L.dims.begin(), L.dims.end()};
}

MultiIndex random_mi(int n, int lo, int hi)
{
    MultiIndex p(n);
    for (auto& x : p)
        x = gen::uniform(lo, hi);
    return p;
}

} // namespace

TEST_SUITE("multifilt")
{
    TEST_CASE("compositions of multi-indices")
    {
        CHECK(mz_compose({2, 3}, 1, {1, 1}) == MultiIndex{3, 3, 3});
        CHECK(mz_compose({2, 3, 5}, 2, {0}) == MultiIndex{2, 3, 5});
        CHECK(mz_compose({0}, 1, {4, 1}) == MultiIndex{4, 1});
        CHECK_THROWS_AS(mz_compose({1, 1}, 3, {1}), Error);
    }

    TEST_CASE("commutators of multi-indices")
    {
        for (int a = -2; a <= 3; ++a)
            for (int b = -2; b <= 3; ++b)
                CHECK(mz_commutator({a}, {b}, 1, 1) == MultiIndex{a + b - 1});
        CHECK(mz_commutator({1, 1}, {1, 1}, 1, 1) == MultiIndex{1, 2, 2});
        for (int t = 0; t < 200; ++t) {
            const int m = gen::uniform(1, 3), n = gen::uniform(1, 3);
            auto p = random_mi(m, 0, 3), p2 = random_mi(m, 0, 3), q = random_mi(n, 0, 3);
            const int i = gen::uniform(1, m), j = gen::uniform(1, n);
            CHECK(mz_commutator(meet(p, p2), q, i, j) == meet(mz_commutator(p, q, i, j), mz_commutator(p2, q, i, j)));
            CHECK(mz_compose(meet(p, p2), i, q) == meet(mz_compose(p, i, q), mz_compose(p2, i, q)));
        }
    }

    TEST_CASE("stability bounds")
    {
        CHECK(stability_bound(3, 2, BoundMode::sharp) == 2);
        CHECK(stability_bound(5, 3, BoundMode::sharp) == 2);
        CHECK(stability_bound(5, 3, BoundMode::coarse) == 4);
        CHECK(stability_bound(1, 2, BoundMode::sharp) == 1);
    }

    TEST_CASE("prestandard antisymmetric binary")
    {
        auto A = one_gen(Symm::antisymmetric);
        auto G = prestandard(*A, 3);
        CHECK(G.get(3, {2, 2, 2}) == Subspace::full(3));
        CHECK(G.get(3, {1, 2, 2}).dim() == 2);
        CHECK(G.get(3, {1, 2, 2}).contains(A->parse_element("b(1,b(2,3))").v));
        CHECK(G.get(3, {1, 2, 2}).contains(A->parse_element("b(2,b(3,1)) + b(3,b(1,2))").v));
        CHECK(G.get(3, {7, 9, 2}) == G.get(3, {2, 2, 2}));
        CHECK(G.get(3, {0, 2, 2}).is_zero());
    }

    TEST_CASE("standard lattices")
    {
        auto A = one_gen(Symm::antisymmetric);
        auto Gs = standard(*A, 3);
        CHECK(dims(Gs, 3) == std::map<MultiIndex, std::size_t>{{{1, 1, 1}, 1}, {{1, 1, 2}, 1}, {{1, 2, 1}, 1},
                                                                {{1, 2, 2}, 2}, {{2, 1, 1}, 1}, {{2, 1, 2}, 2},
                                                                {{2, 2, 1}, 2}, {{2, 2, 2}, 3}});
        CHECK(Gs.get(3, {1, 1, 2}) == Subspace::span(3, {jacobiator(*A, 0).v}));

        auto R = one_gen(Symm::regular);
        auto Gr = dims(standard(*R, 3), 3);
        CHECK(Gr[{2, 2, 2}] == 12);
        CHECK(Gr[{1, 2, 2}] == 8);
        CHECK(Gr[{1, 1, 2}] == 4);
        CHECK(Gr[{1, 1, 1}] == 1);

        auto S = one_gen(Symm::symmetric);
        CHECK(standard(*S, 3).get(3, {1, 1, 1}).is_zero());

        auto lieF = one_gen(Symm::antisymmetric);
        QuotientOperad lie(lieF, {jacobiator(*lieF, 0)});
        auto Gl = dims(standard(lie, 3), 3);
        CHECK(Gl[{2, 2, 2}] == 2);
        CHECK(Gl[{1, 2, 2}] == 1);
        CHECK(Gl[{2, 1, 2}] == 1);
        CHECK(Gl[{2, 2, 1}] == 1);
        CHECK(Gl[{1, 1, 1}] == 0);
        CHECK(Gl[{1, 1, 2}] == 0);
        CHECK(prestandard(lie, 3).get(3, {2, 2, 1}).dim() == 1);
    }

    TEST_CASE("saturation properties")
    {
        for (auto s : {Symm::antisymmetric, Symm::symmetric, Symm::regular}) {
            auto P = one_gen(s);
            auto G = prestandard(*P, 4);
            auto Gs = saturate(G);
            CHECK(saturation_defects(Gs).empty());
            CHECK(saturate(Gs) == Gs);
            CHECK(presaturate_general(G) == Gs);
            CHECK(presaturate_general(G, false) == Gs);
            for (auto& p : window(3, 2))
                CHECK(Gs.get(3, p).contains(G.get(3, p)));
        }
    }

    TEST_CASE("presaturation repairs an intersection defect")
    {
        Multifiltration F;
        ArityTable t;
        t.n = 2;
        t.N = 2;
        t.ambient = 2;
        const auto e1 = Subspace::span(2, {SparseVec::unit(0)});
        t.cells[{1, 1}] = Subspace(2);
        t.cells[{1, 2}] = e1;
        t.cells[{2, 1}] = e1;
        t.cells[{2, 2}] = Subspace::full(2);
        F.tables[2] = t;
        CHECK_FALSE(saturation_defects(F).empty());
        auto S = presaturate_general(F, false);
        CHECK(saturation_defects(S).empty());
        CHECK(S.get(2, {1, 1}) == e1);

        Multifiltration full;
        ArityTable u = t;
        for (auto& [p, c] : u.cells)
            c = Subspace::full(2);
        full.tables[2] = u;
        CHECK(presaturate_general(full) == full);
    }

    TEST_CASE("sharp and coarse bounds agree")
    {
        auto T = one_gen(Symm::antisymmetric, 3, 1, 5);
        auto a = standard(*T, 5, BoundMode::sharp);
        auto b = standard(*T, 5, BoundMode::coarse);
        for (auto& p : window(5, 4))
            CHECK(a.get(5, p) == b.get(5, p));
    }

    TEST_CASE("serial and parallel kernels agree")
    {
        for (auto s : {Symm::antisymmetric, Symm::regular}) {
            auto P = one_gen(s);
            CHECK(prestandard(*P, 4, BoundMode::sharp, Kernel::serial) ==
                  prestandard(*P, 4, BoundMode::sharp, Kernel::parallel));
        }
    }

    TEST_CASE("multifiltration axioms")
    {
        for (auto s : {Symm::antisymmetric, Symm::symmetric, Symm::regular}) {
            auto P = one_gen(s);
            CHECK(axiom_violations(*P, prestandard(*P, 4), 4).empty());
            CHECK(axiom_violations(*P, standard(*P, 4), 4).empty());
        }
        auto A = one_gen(Symm::antisymmetric);
        QuotientOperad lie(A, {jacobiator(*A, 0)});
        CHECK(axiom_violations(lie, standard(lie, 4), 4).empty());
    }

    TEST_CASE("pushforward to quotients")
    {
        auto A = one_gen(Symm::antisymmetric);
        QuotientOperad lie(A, {jacobiator(*A, 0)});
        auto pushed = pushforward(prestandard(*A, 4), lie);
        CHECK(pushed == prestandard(lie, 4));
        CHECK(saturate(pushed).get(3, {1, 1, 1}).is_zero());
        // image of the saturation sits inside the saturation of the image
        auto img = pushforward(standard(*A, 4), lie);
        auto sat = saturate(pushed);
        for (auto& p : window(3, 2))
            CHECK(sat.get(3, p).contains(img.get(3, p)));

        auto S = one_gen(Symm::symmetric);
        QuotientOperad com(S, {associator(*S, 0)});
        auto Gc = standard(com, 3);
        bool strict = false;
        auto imgc = pushforward(standard(*S, 3), com);
        for (auto& p : window(3, 2)) {
            CHECK(Gc.get(3, p).dim() == 1);
            strict = strict || imgc.get(3, p).dim() < Gc.get(3, p).dim();
        }
        CHECK(strict);

        auto id = pushforward(prestandard(*A, 3), [&](int n) {
            LinearMap m;
            m.source_dim = m.target_dim = static_cast<std::uint32_t>(A->dim(n));
            for (std::uint32_t c = 0; c < A->dim(n); ++c)
                m.columns.push_back(SparseVec::unit(c));
            return m;
        });
        CHECK(id == prestandard(*A, 3));
    }

    TEST_CASE("tightness")
    {
        auto A = one_gen(Symm::antisymmetric);
        CHECK(is_tight(*A, {jacobiator(*A, 0)}).tight);
        auto S = one_gen(Symm::symmetric);
        auto rc = is_tight(*S, {associator(*S, 0)});
        CHECK_FALSE(rc.tight);
        REQUIRE(rc.relations.size() == 1);
        CHECK_FALSE(rc.relations[0].member);
        CHECK_FALSE(rc.relations[0].residual.empty());
        auto R = one_gen(Symm::regular, 2, 0, 3);
        CHECK(is_tight(*R, {lie_admissible(*R, 0)}).tight);
        CHECK(standard(*R, 3).get(3, {1, 1, 1}) == Subspace::span(R->dim(3), {lie_admissible(*R, 0).v}));
    }

    TEST_CASE("Jacobiators and the fundamental identity sit low")
    {
        auto A = one_gen(Symm::antisymmetric);
        CHECK(standard(*A, 3).get(3, {1, 1, 1}).contains(jacobiator(*A, 0).v));
        auto T = one_gen(Symm::antisymmetric, 3, 1, 5);
        CHECK(standard(*T, 5).get(5, {1, 1, 1, 1, 1}).contains(jacobiator(*T, 0).v));
        auto F = one_gen(Symm::antisymmetric, 3, 0, 5);
        CHECK(standard(*F, 5).get(5, {2, 2, 1, 1, 1}).contains(fundamental_identity(*F, 0).v));
    }

    TEST_CASE("lattice export")
    {
        auto A = one_gen(Symm::antisymmetric);
        auto L = lattice(standard(*A, 3), 3);
        auto j = to_json(L);
        CHECK(j["arity"] == 3);
        auto csv = to_csv(L);
        CHECK(csv.find("2,2,2") != std::string::npos);
    }
}
