#include "odlab/multifilt.hpp"

#include <algorithm>
#include <sstream>

#include <omp.h>

namespace odlab {

/* ---------------- MZ ---------------- */

MultiIndex mz_compose(const MultiIndex& p, int i, const MultiIndex& q)
{
    const int m = static_cast<int>(p.size());
    if (i < 1 || i > m)
        throw Error("mz_compose: index out of range");
    MultiIndex r(p.begin(), p.begin() + (i - 1));
    for (int x : q)
        r.push_back(x + p[i - 1]);
    r.insert(r.end(), p.begin() + i, p.end());
    return r;
}

MultiIndex mz_commutator(const MultiIndex& a, const MultiIndex& b, int i, int j)
{
    const int m = static_cast<int>(a.size());
    const int n = static_cast<int>(b.size());
    if (i < 1 || i > m || j < 1 || j > n)
        throw Error("mz_commutator: index out of range");
    const int ai = a[i - 1];
    const int bj = b[j - 1];
    MultiIndex r;
    for (int k = 0; k < j - 1; ++k)
        r.push_back(b[k] + ai);
    for (int k = 0; k < i - 1; ++k)
        r.push_back(a[k] + bj);
    r.push_back(ai + bj - 1);
    for (int k = j; k < n; ++k)
        r.push_back(b[k] + ai);
    for (int k = i; k < m; ++k)
        r.push_back(a[k] + bj);
    return r;
}

MultiIndex meet(const MultiIndex& a, const MultiIndex& b)
{
    if (a.size() != b.size())
        throw Error("meet: length mismatch");
    MultiIndex r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k)
        r[k] = std::min(a[k], b[k]);
    return r;
}

MultiIndex join(const MultiIndex& a, const MultiIndex& b)
{
    if (a.size() != b.size())
        throw Error("join: length mismatch");
    MultiIndex r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k)
        r[k] = std::max(a[k], b[k]);
    return r;
}

bool leq(const MultiIndex& a, const MultiIndex& b)
{
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k] > b[k])
            return false;
    return true;
}

MultiIndex act(const MultiIndex& p, const Perm& sigma)
{
    if (p.size() != sigma.size())
        throw Error("multiindex action: size mismatch");
    MultiIndex r(p.size());
    for (std::size_t k = 0; k < p.size(); ++k)
        r[k] = p[sigma[k]];
    return r;
}

std::string to_string(const MultiIndex& p)
{
    std::string s = "(";
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (k)
            s += ",";
        s += std::to_string(p[k]);
    }
    return s + ")";
}

MultiIndex parse_multiindex(const std::string& s)
{
    MultiIndex p;
    std::string t;
    for (char c : s)
        t += (c == '(' || c == ')' || c == ',') ? ' ' : c;
    std::istringstream in(t);
    int x;
    while (in >> x)
        p.push_back(x);
    if (!in.eof() || p.empty())
        throw Error("bad multiindex '" + s + "'");
    return p;
}

std::vector<MultiIndex> window(int n, int N)
{
    std::vector<MultiIndex> r;
    MultiIndex p(n, 1);
    for (;;) {
        r.push_back(p);
        int k = n - 1;
        while (k >= 0 && p[k] == N)
            p[k--] = 1;
        if (k < 0)
            break;
        ++p[k];
    }
    return r;
}

/* ---------------- Multifiltration ---------------- */

const ArityTable& Multifiltration::table(int n) const
{
    auto it = tables.find(n);
    if (it == tables.end())
        throw Error("multifiltration: no table for arity " + std::to_string(n));
    return it->second;
}

int Multifiltration::max_arity() const { return tables.empty() ? 0 : tables.rbegin()->first; }

Subspace Multifiltration::get(int n, const MultiIndex& p) const
{
    const auto& T = table(n);
    if (static_cast<int>(p.size()) != n)
        throw Error("multifiltration: index length does not match the arity");
    MultiIndex q(p);
    for (auto& x : q) {
        if (x < 1) {
            if (floor_zero)
                return Subspace(T.ambient);
            throw Error("multifiltration: index below the floor");
        }
        x = std::min(x, T.N);
    }
    return T.cells.at(q);
}

bool operator==(const Multifiltration& a, const Multifiltration& b)
{
    if (a.tables.size() != b.tables.size())
        return false;
    for (auto& [n, T] : a.tables) {
        auto it = b.tables.find(n);
        if (it == b.tables.end())
            return false;
        const int N = std::max(T.N, it->second.N);
        for (auto& p : window(n, N))
            if (a.get(n, p) != b.get(n, p))
                return false;
    }
    return true;
}

int stability_bound(int n, int k_min, BoundMode mode)
{
    if (mode == BoundMode::coarse || k_min < 2)
        return std::max(1, n - 1);
    return std::max(1, (n - 1) / (k_min - 1));
}

/* ---------------- prestandard ---------------- */

namespace {

bool in_window(const MultiIndex& q, int N)
{
    for (int x : q)
        if (x < 1 || x > N)
            return false;
    return true;
}

Subspace generators_at(const OperadModel& P, int n)
{
    return P.sigma_closure(n, Subspace::span(P.dim(n), P.generator_vectors(n)));
}

// window cells not generated from a strictly lower neighbour
std::vector<MultiIndex> minimal_cells(const ArityTable& T)
{
    std::vector<MultiIndex> r;
    for (auto& [p, S] : T.cells) {
        if (S.is_zero())
            continue;
        bool minimal = true;
        for (int k = 0; k < T.n && minimal; ++k) {
            if (p[k] == 1)
                continue;
            MultiIndex q = p;
            --q[k];
            if (T.cells.at(q).dim() == S.dim())
                minimal = false;
        }
        if (minimal)
            r.push_back(p);
    }
    return r;
}

// sum of all cells below p, by the recursion over lower neighbours
void monotone_closure(std::map<MultiIndex, Subspace>& C, int n, int N, std::uint32_t dim)
{
    for (auto& p : window(n, N)) {
        auto& S = C.try_emplace(p, Subspace(dim)).first->second;
        for (int k = 0; k < n; ++k) {
            if (p[k] == 1)
                continue;
            MultiIndex q = p;
            --q[k];
            for (auto& v : C.at(q).basis())
                S.add(v);
        }
    }
}

ArityTable arity_serial(const OperadModel& P, const Multifiltration& G, int n, int N)
{
    const auto dim = P.dim(n);
    const auto perms = all_perms(n);
    std::map<MultiIndex, Subspace> C;
    auto put = [&](const MultiIndex& q, const std::vector<SparseVec>& V) {
        for (auto& s : perms) {
            auto qs = act(q, s);
            if (!in_window(qs, N))
                continue;
            auto& S = C.try_emplace(qs, Subspace(dim)).first->second;
            for (auto& v : V)
                S.add(P.act(n, v, s));
        }
    };
    C.try_emplace(MultiIndex(n, 1), generators_at(P, n));
    for (int k = 2; k <= n - 1; ++k) {
        const int l = n + 1 - k;
        const auto& Tk = G.table(k);
        const auto& Tl = G.table(l);
        for (auto& [p1, S1] : Tk.cells)
            for (auto& [p2, S2] : Tl.cells) {
                if (S1.is_zero() || S2.is_zero())
                    continue;
                const auto U = S1.basis();
                const auto W = S2.basis();
                for (int i = 1; i <= k; ++i) {
                    std::vector<SparseVec> V;
                    for (auto& u : U)
                        for (auto& w : W)
                            V.push_back(P.compose(k, u, i, l, w));
                    put(mz_compose(p1, i, p2), V);
                    for (int j = 1; j <= l; ++j) {
                        std::vector<SparseVec> Vc;
                        for (auto& u : U)
                            for (auto& w : W)
                                Vc.push_back(P.commutator(k, u, i, l, w, j));
                        put(mz_commutator(p1, p2, i, j), Vc);
                    }
                }
            }
    }
    ArityTable T{n, N, dim, {}};
    for (auto& p : window(n, N)) {
        Subspace S(dim);
        for (auto& [q, Cq] : C)
            if (leq(q, p))
                for (auto& v : Cq.basis())
                    S.add(v);
        T.cells.emplace(p, std::move(S));
    }
    return T;
}

ArityTable arity_parallel(const OperadModel& P, const Multifiltration& G, int n, int N)
{
    const auto dim = P.dim(n);
    struct Task {
        int k;
        MultiIndex p1, p2;
    };
    std::vector<Task> tasks;
    for (int k = 2; k <= n - 1; ++k) {
        const int l = n + 1 - k;
        auto m1 = minimal_cells(G.table(k));
        auto m2 = minimal_cells(G.table(l));
        for (auto& p1 : m1)
            for (auto& p2 : m2)
                tasks.push_back({k, p1, p2});
    }

    // contributions without the Σ-translates
    std::map<MultiIndex, Subspace> C;
    C.try_emplace(MultiIndex(n, 1), generators_at(P, n));
#pragma omp parallel
    {
        std::map<MultiIndex, Subspace> local;
#pragma omp for schedule(dynamic)
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            const auto& [k, p1, p2] = tasks[t];
            const int l = n + 1 - k;
            const auto U = G.table(k).cells.at(p1).basis();
            const auto W = G.table(l).cells.at(p2).basis();
            for (int i = 1; i <= k; ++i) {
                auto q = mz_compose(p1, i, p2);
                if (in_window(q, N)) {
                    auto& S = local.try_emplace(q, Subspace(dim)).first->second;
                    for (auto& u : U)
                        for (auto& w : W)
                            S.add(P.compose(k, u, i, l, w));
                }
                for (int j = 1; j <= l; ++j) {
                    auto qc = mz_commutator(p1, p2, i, j);
                    if (!in_window(qc, N))
                        continue;
                    auto& S = local.try_emplace(qc, Subspace(dim)).first->second;
                    for (auto& u : U)
                        for (auto& w : W)
                            S.add(P.commutator(k, u, i, l, w, j));
                }
            }
        }
#pragma omp critical(odlab_prestandard_merge)
        for (auto& [q, S] : local) {
            auto& D = C.try_emplace(q, Subspace(dim)).first->second;
            for (auto& v : S.basis())
                D.add(v);
        }
    }
    monotone_closure(C, n, N, dim);

    // G_p = Σ_σ G'_{p·σ⁻¹}·σ, computed on sorted representatives
    const auto perms = all_perms(n);
    std::vector<MultiIndex> reps;
    for (auto& p : window(n, N))
        if (std::is_sorted(p.begin(), p.end()))
            reps.push_back(p);
    std::vector<Subspace> repcell(reps.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t r = 0; r < reps.size(); ++r) {
        Subspace S(dim);
        for (auto& s : perms) {
            const auto& Gp = C.at(act(reps[r], inverse(s)));
            if (Gp.is_zero())
                continue;
            for (auto& v : P.act(n, Gp, s).basis())
                S.add(v);
        }
        repcell[r] = std::move(S);
    }
    std::map<MultiIndex, std::size_t> rep_index;
    for (std::size_t r = 0; r < reps.size(); ++r)
        rep_index.emplace(reps[r], r);

    auto win = window(n, N);
    std::vector<Subspace> cells(win.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < win.size(); ++c) {
        const auto& p = win[c];
        // p = rep·τ with τ[k] = position in rep of p[k]
        Perm ord = identity_perm(n);
        std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) { return p[a] < p[b]; });
        const MultiIndex rep = act(p, ord);
        const Perm tau = inverse(ord);
        cells[c] = P.act(n, repcell[rep_index.at(rep)], tau);
    }
    ArityTable T{n, N, dim, {}};
    for (std::size_t c = 0; c < win.size(); ++c)
        T.cells.emplace(win[c], std::move(cells[c]));
    return T;
}

} // namespace

Multifiltration prestandard(const OperadModel& P, int max_arity, BoundMode mode, Kernel kernel)
{
    if (!P.simply_connected())
        throw Error("prestandard: the operad is not simply connected (it has unary generators)");
    const int A = max_arity < 0 ? P.max_arity() : max_arity;
    if (A > P.max_arity())
        throw Error("prestandard: arity beyond the configured bound");
    const int kmin = P.min_generator_arity();
    Multifiltration G;
    G.floor_zero = true;
    G.stable = true;
    G.tables.emplace(1, ArityTable{1, 1, P.dim(1), {{MultiIndex{1}, Subspace::full(P.dim(1))}}});
    for (int n = 2; n <= A; ++n) {
        const int N = stability_bound(n, kmin, mode);
        G.tables.emplace(n, kernel == Kernel::serial ? arity_serial(P, G, n, N) : arity_parallel(P, G, n, N));
    }
    return G;
}

Multifiltration saturate(const Multifiltration& F)
{
    if (!F.stable)
        throw Error("saturate: unknown stability bound");
    Multifiltration R;
    R.floor_zero = F.floor_zero;
    R.stable = true;
    for (auto& [n, T] : F.tables) {
        auto win = window(n, T.N);
        std::vector<Subspace> cells(win.size());
#pragma omp parallel for schedule(dynamic)
        for (std::size_t c = 0; c < win.size(); ++c) {
            const auto& p = win[c];
            Subspace S = Subspace::full(T.ambient);
            for (int k = 0; k < n && !S.is_zero(); ++k) {
                MultiIndex q(n, T.N);
                q[k] = p[k];
                S = intersect(S, T.cells.at(q));
            }
            cells[c] = std::move(S);
        }
        ArityTable U{n, T.N, T.ambient, {}};
        for (std::size_t c = 0; c < win.size(); ++c)
            U.cells.emplace(win[c], std::move(cells[c]));
        R.tables.emplace(n, std::move(U));
    }
    return R;
}

Multifiltration standard(const OperadModel& P, int max_arity, BoundMode mode, Kernel kernel)
{
    return saturate(prestandard(P, max_arity, mode, kernel));
}

Multifiltration presaturate_step(const Multifiltration& F)
{
    Multifiltration R = F;
    for (auto& [n, T] : R.tables) {
        const auto& src = F.table(n).cells;
        std::map<MultiIndex, Subspace> add;
        for (auto i = src.begin(); i != src.end(); ++i)
            for (auto j = std::next(i); j != src.end(); ++j) {
                if (leq(i->first, j->first) || leq(j->first, i->first))
                    continue;
                auto S = intersect(i->second, j->second);
                if (S.is_zero())
                    continue;
                auto& D = add.try_emplace(meet(i->first, j->first), Subspace(T.ambient)).first->second;
                for (auto& v : S.basis())
                    D.add(v);
            }
        for (auto& [p, S] : add)
            for (auto& v : S.basis())
                T.cells.at(p).add(v);
        monotone_closure(T.cells, n, T.N, T.ambient);
    }
    return R;
}

Multifiltration presaturate_general(const Multifiltration& F, bool use_closed_formula)
{
    if (use_closed_formula && F.stable)
        return saturate(F);
    Multifiltration cur = F;
    for (;;) {
        auto next = presaturate_step(cur);
        if (next == cur)
            return cur;
        cur = std::move(next);
    }
}

Multifiltration pushforward(const Multifiltration& F, const std::function<LinearMap(int)>& phi)
{
    Multifiltration R;
    R.floor_zero = F.floor_zero;
    R.stable = F.stable;
    for (auto& [n, T] : F.tables) {
        const LinearMap m = phi(n);
        if (m.source_dim != T.ambient)
            throw Error("pushforward: map source does not match arity " + std::to_string(n));
        if (!m.surjective())
            throw Error("pushforward: map is not surjective in arity " + std::to_string(n));
        ArityTable U{n, T.N, m.target_dim, {}};
        for (auto& [p, S] : T.cells)
            U.cells.emplace(p, m.image(S));
        R.tables.emplace(n, std::move(U));
    }
    return R;
}

Multifiltration pushforward(const Multifiltration& F, const QuotientOperad& Q)
{
    return pushforward(F, [&](int n) { return Q.projection(n).as_map(); });
}

std::vector<std::string> saturation_defects(const Multifiltration& F)
{
    std::vector<std::string> r;
    for (auto& [n, T] : F.tables)
        for (auto i = T.cells.begin(); i != T.cells.end(); ++i)
            for (auto j = std::next(i); j != T.cells.end(); ++j) {
                auto S = intersect(i->second, j->second);
                if (!T.cells.at(meet(i->first, j->first)).contains(S))
                    r.push_back("arity " + std::to_string(n) + ": " + to_string(i->first) + " ∩ " +
                                to_string(j->first));
            }
    return r;
}

std::vector<std::string> axiom_violations(const OperadModel& P, const Multifiltration& F, int max_arity)
{
    const int A = max_arity < 0 ? F.max_arity() : std::min(max_arity, F.max_arity());
    std::vector<std::string> out;
    auto fail = [&](const std::string& s) { out.push_back(s); };
    for (int n = 2; n <= A; ++n) {
        const auto& T = F.table(n);
        const auto perms = all_perms(n);
        for (auto& [p, S] : T.cells) {
            for (int k = 0; k < n; ++k) {
                if (p[k] == T.N)
                    continue;
                MultiIndex q = p;
                ++q[k];
                if (!T.cells.at(q).contains(S))
                    fail("monotonicity " + to_string(p) + " <= " + to_string(q));
            }
            for (auto& s : perms)
                if (F.get(n, act(p, s)) != P.act(n, S, s))
                    fail("equivariance at " + to_string(p));
        }
        for (int k = 2; k <= n - 1; ++k) {
            const int l = n + 1 - k;
            for (auto& [p1, S1] : F.table(k).cells)
                for (auto& [p2, S2] : F.table(l).cells) {
                    const auto U = S1.basis();
                    const auto W = S2.basis();
                    if (U.empty() || W.empty())
                        continue;
                    auto inside = [&](const Subspace& S, auto&& f) {
                        for (auto& u : U)
                            for (auto& w : W)
                                if (!S.contains(f(u, w)))
                                    return false;
                        return true;
                    };
                    for (int i = 1; i <= k; ++i) {
                        if (!inside(F.get(n, mz_compose(p1, i, p2)),
                                    [&](auto& u, auto& w) { return P.compose(k, u, i, l, w); }))
                            fail("composition " + to_string(p1) + " o" + std::to_string(i) + " " + to_string(p2));
                        for (int j = 1; j <= l; ++j)
                            if (!inside(F.get(n, mz_commutator(p1, p2, i, j)),
                                        [&](auto& u, auto& w) { return P.commutator(k, u, i, l, w, j); }))
                                fail("commutator " + to_string(p1) + " " + to_string(p2) + " [" +
                                     std::to_string(i) + "," + std::to_string(j) + "]");
                    }
                }
        }
    }
    return out;
}

/* ---------------- tightness ---------------- */

TightnessReport is_tight(const FreeOperad& F, const std::vector<OperadElement>& relations, Kernel kernel)
{
    TightnessReport rep;
    rep.simply_connected = F.simply_connected();
    if (!rep.simply_connected)
        throw Error("tightness: the free operad is not simply connected");
    int A = 2;
    for (auto& r : relations) {
        if (r.arity > F.max_arity())
            throw Error("tightness: relation arity beyond max_arity");
        A = std::max(A, r.arity);
    }
    const auto Gbar = standard(F, A, BoundMode::sharp, kernel);
    for (auto& r : relations) {
        RelationVerdict v;
        v.arity = r.arity;
        v.relation = F.to_string(r.arity, r.v);
        if (r.arity < 2) {
            v.member = r.v.is_zero();
            v.residual = F.to_string(r.arity, r.v);
        } else {
            auto res = Gbar.get(r.arity, MultiIndex(r.arity, 1)).reduce(r.v);
            v.member = res.is_zero();
            v.residual = F.to_string(r.arity, res);
        }
        rep.tight = rep.tight && v.member;
        rep.relations.push_back(std::move(v));
    }
    return rep;
}

nlohmann::json to_json(const TightnessReport& r)
{
    nlohmann::json j;
    j["tight"] = r.tight;
    j["relations"] = nlohmann::json::array();
    for (auto& v : r.relations)
        j["relations"].push_back(
            {{"arity", v.arity}, {"relation", v.relation}, {"member", v.member}, {"residual", v.residual}});
    return j;
}

/* ---------------- lattices ---------------- */

Lattice lattice(const Multifiltration& F, int n)
{
    const auto& T = F.table(n);
    Lattice L;
    L.arity = n;
    L.N = T.N;
    for (auto& [p, S] : T.cells) {
        for (int k = 0; k < n; ++k) {
            if (p[k] == T.N)
                continue;
            MultiIndex q = p;
            ++q[k];
            if (!T.cells.at(q).contains(S))
                throw Error("lattice: monotonicity fails between " + to_string(p) + " and " + to_string(q));
        }
        L.dims.emplace_back(p, S.dim());
    }
    return L;
}

nlohmann::json to_json(const Lattice& L)
{
    nlohmann::json d = nlohmann::json::object();
    for (auto& [p, x] : L.dims)
        d[to_string(p)] = x;
    return {{"arity", L.arity}, {"bound", L.N}, {"dims", d}};
}

std::string to_csv(const Lattice& L)
{
    std::string s = "index,dim\n";
    for (auto& [p, x] : L.dims)
        s += "\"" + to_string(p) + "\"," + std::to_string(x) + "\n";
    return s;
}

} // namespace odlab
