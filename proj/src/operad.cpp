#include "odlab/operad.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <regex>
#include <set>

namespace odlab {

/* ---------------- permutations ---------------- */

Perm identity_perm(int n)
{
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

Perm inverse(const Perm& p)
{
    Perm q(p.size());
    for (std::size_t k = 0; k < p.size(); ++k)
        q[p[k]] = static_cast<int>(k);
    return q;
}

int perm_sign(const Perm& p)
{
    bool odd = false;
    for (std::size_t k = 0; k < p.size(); ++k)
        for (std::size_t l = k + 1; l < p.size(); ++l)
            if (p[k] > p[l])
                odd = !odd;
    return sign_of(odd);
}

std::vector<Perm> all_perms(int n)
{
    std::vector<Perm> r;
    Perm p = identity_perm(n);
    do
        r.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return r;
}

std::string to_string(Symm s)
{
    switch (s) {
    case Symm::symmetric: return "symmetric";
    case Symm::antisymmetric: return "antisymmetric";
    default: return "regular";
    }
}

/* ---------------- OperadModel ---------------- */

const LinearMap& OperadModel::action_map(int n, const Perm& sigma) const
{
    {
        std::lock_guard lk(cache_mu_);
        auto it = action_cache_.find({n, sigma});
        if (it != action_cache_.end())
            return *it->second;
    }
    auto m = std::make_shared<LinearMap>();
    m->source_dim = m->target_dim = dim(n);
    const Perm rho = inverse(sigma);
    for (std::uint32_t c = 0; c < dim(n); ++c)
        m->columns.push_back(relabel(n, SparseVec::unit(c), rho));
    std::lock_guard lk(cache_mu_);
    auto [it, ok] = action_cache_.emplace(std::make_pair(n, sigma), std::move(m));
    return *it->second;
}

Subspace OperadModel::act(int n, const Subspace& s, const Perm& sigma) const
{
    return action_map(n, sigma).image(s);
}

Subspace OperadModel::sigma_closure(int n, const Subspace& s) const
{
    Subspace r = s;
    std::vector<SparseVec> frontier = s.basis();
    while (!frontier.empty()) {
        std::vector<SparseVec> next;
        for (int k = 0; k + 1 < n; ++k) {
            Perm t = identity_perm(n);
            std::swap(t[k], t[k + 1]);
            const auto& m = action_map(n, t);
            for (auto& v : frontier) {
                auto w = m.apply(v);
                if (r.add(w))
                    next.push_back(std::move(w));
            }
        }
        frontier = std::move(next);
    }
    return r;
}

bool OperadModel::simply_connected() const
{
    for (auto& g : generators())
        if (g.arity == 1)
            return false;
    return true;
}

int OperadModel::min_generator_arity() const
{
    int k = 0;
    for (auto& g : generators())
        if (k == 0 || g.arity < k)
            k = g.arity;
    return k;
}

SparseVec OperadModel::commutator(int m, const SparseVec& a, int i, int n, const SparseVec& b, int j) const
{
    if (i < 1 || i > m || j < 1 || j > n)
        throw Error("commutator: index out of range");
    const int N = m + n - 1;
    // rho1: slots of a∘ᵢb -> (b_L, a_L, x, b_R, a_R)
    Perm rho1 = identity_perm(N);
    for (int k = 1; k <= i - 1; ++k)
        rho1[k - 1] = (j - 1) + k - 1;
    for (int l = 1; l <= j - 1; ++l)
        rho1[i - 1 + l - 1] = l - 1;
    // rho2: slots of b∘ⱼa -> same order
    Perm rho2 = identity_perm(N);
    for (int r = 1; r <= m - i; ++r)
        rho2[i + j - 1 + r - 1] = i + n - 1 + r - 1;
    for (int r = 1; r <= n - j; ++r)
        rho2[j + m - 1 + r - 1] = i + j - 1 + r - 1;

    auto [a0, a1] = parity_split(m, a);
    auto [b0, b1] = parity_split(n, b);
    SparseVec res;
    const SparseVec* as[2] = {&a0, &a1};
    const SparseVec* bs[2] = {&b0, &b1};
    for (int pa = 0; pa < 2; ++pa)
        for (int pb = 0; pb < 2; ++pb) {
            if (as[pa]->is_zero() || bs[pb]->is_zero())
                continue;
            res.axpy(1, relabel(N, compose(m, *as[pa], i, n, *bs[pb]), rho1));
            res.axpy(-sign_of(pa && pb), relabel(N, compose(n, *bs[pb], j, m, *as[pa]), rho2));
        }
    return res;
}

/* ---------------- FreeOperad ---------------- */

namespace {

using TreeList = std::vector<std::pair<Tree, int>>; // tree, weight

// all ways to split `elems` into k blocks, blocks ordered by least element
void set_partitions(const std::vector<int>& elems, int k, std::vector<std::vector<std::vector<int>>>& out)
{
    std::vector<std::vector<int>> blocks;
    std::function<void(std::size_t)> rec = [&](std::size_t idx) {
        if (idx == elems.size()) {
            if (static_cast<int>(blocks.size()) == k)
                out.push_back(blocks);
            return;
        }
        const int remaining = static_cast<int>(elems.size() - idx);
        if (static_cast<int>(blocks.size()) + remaining < k)
            return;
        const std::size_t nb = blocks.size();
        for (std::size_t b = 0; b < nb; ++b) {
            blocks[b].push_back(elems[idx]);
            rec(idx + 1);
            blocks[b].pop_back();
        }
        if (static_cast<int>(blocks.size()) < k) {
            blocks.push_back({elems[idx]});
            rec(idx + 1);
            blocks.pop_back();
        }
    };
    rec(0);
}

} // namespace

FreeOperad::FreeOperad(std::vector<SigmaGenerator> gens, int max_arity, int max_weight)
    : gens_(std::move(gens)), max_arity_(max_arity), max_weight_(max_weight)
{
    if (max_arity < 1)
        throw Error("free operad: max_arity must be positive");
    std::set<std::string> names;
    for (auto& g : gens_) {
        if (g.arity < 1)
            throw Error("generator " + g.name + ": arity must be at least 1");
        if (!names.insert(g.name).second)
            throw Error("duplicate generator name " + g.name);
        if (g.name.empty() || !std::isalpha(static_cast<unsigned char>(g.name[0])))
            throw Error("generator names must start with a letter");
    }
    if (!simply_connected() && max_weight_ < 0)
        max_weight_ = max_arity_;
    comps_.resize(max_arity_ + 1);
    for (int n = 1; n <= max_arity_; ++n)
        enumerate(n);
}

void FreeOperad::enumerate(int n)
{
    const int budget = max_weight_ >= 0 ? max_weight_ : n;
    std::map<std::pair<std::vector<int>, int>, TreeList> memo;

    std::function<const TreeList&(const std::vector<int>&, int)> trees =
        [&](const std::vector<int>& S, int w) -> const TreeList& {
        auto key = std::make_pair(S, w);
        if (auto it = memo.find(key); it != memo.end())
            return it->second;
        TreeList out;
        if (S.size() == 1)
            out.emplace_back(Tree::make_leaf(S[0]), 0);
        if (w >= 1) {
            for (std::size_t g = 0; g < gens_.size(); ++g) {
                const int k = gens_[g].arity;
                if (k > static_cast<int>(S.size()))
                    continue;
                if (k == 1) {
                    for (auto& [t, tw] : trees(S, w - 1)) {
                        Tree v;
                        v.gen = static_cast<int>(g);
                        v.children.push_back(t);
                        out.emplace_back(std::move(v), tw + 1);
                    }
                    continue;
                }
                std::vector<std::vector<std::vector<int>>> parts;
                set_partitions(S, k, parts);
                for (auto& blocks : parts) {
                    std::vector<Perm> orders;
                    if (gens_[g].symmetry == Symm::regular)
                        orders = all_perms(k);
                    else
                        orders = {identity_perm(k)};
                    for (auto& ord : orders) {
                        // cartesian product of child trees within the weight budget
                        std::vector<Tree> kids(k);
                        std::function<void(int, int)> prod = [&](int c, int used) {
                            if (c == k) {
                                Tree v;
                                v.gen = static_cast<int>(g);
                                v.children = kids;
                                out.emplace_back(std::move(v), used + 1);
                                return;
                            }
                            for (auto& [t, tw] : trees(blocks[ord[c]], w - 1 - used)) {
                                kids[c] = t;
                                prod(c + 1, used + tw);
                            }
                        };
                        prod(0, 0);
                    }
                }
            }
        }
        return memo.emplace(key, std::move(out)).first->second;
    };

    std::vector<int> S(n);
    std::iota(S.begin(), S.end(), 1);
    Component c;
    std::vector<TreeCode> codes;
    for (auto& [t, tw] : trees(S, budget))
        codes.push_back(encode(t));
    std::sort(codes.begin(), codes.end());
    codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
    for (auto& code : codes) {
        c.index.emplace(code, static_cast<std::uint32_t>(c.basis.size()));
        c.degree.push_back(tree_degree(decode(code)));
        c.basis.push_back(code);
    }
    comps_[n] = std::move(c);
}

const FreeOperad::Component& FreeOperad::comp(int n) const
{
    if (n < 1 || n > max_arity_)
        throw Error("free operad: arity " + std::to_string(n) + " beyond the configured bound " +
                    std::to_string(max_arity_));
    return comps_[n];
}

std::uint32_t FreeOperad::dim(int n) const { return static_cast<std::uint32_t>(comp(n).basis.size()); }

const std::vector<TreeCode>& FreeOperad::basis(int n) const { return comp(n).basis; }

int FreeOperad::basis_degree(int n, std::uint32_t idx) const { return comp(n).degree.at(idx); }

std::optional<std::size_t> FreeOperad::generator_index(const std::string& name) const
{
    for (std::size_t g = 0; g < gens_.size(); ++g)
        if (gens_[g].name == name)
            return g;
    return std::nullopt;
}

TreeCode FreeOperad::encode(const Tree& t) const
{
    TreeCode c;
    std::function<void(const Tree&)> rec = [&](const Tree& x) {
        if (x.is_leaf()) {
            c.push_back(static_cast<std::int16_t>(x.leaf));
            return;
        }
        c.push_back(static_cast<std::int16_t>(-(x.gen + 1)));
        for (auto& ch : x.children)
            rec(ch);
    };
    rec(t);
    return c;
}

Tree FreeOperad::decode(const TreeCode& c) const
{
    std::size_t pos = 0;
    std::function<Tree()> rec = [&]() {
        if (pos >= c.size())
            throw Error("tree code truncated");
        auto x = c[pos++];
        if (x > 0)
            return Tree::make_leaf(x);
        Tree t;
        t.gen = -x - 1;
        for (int k = 0; k < gens_.at(t.gen).arity; ++k)
            t.children.push_back(rec());
        return t;
    };
    return rec();
}

int FreeOperad::tree_degree(const Tree& t) const
{
    if (t.is_leaf())
        return 0;
    int d = gens_.at(t.gen).degree;
    for (auto& c : t.children)
        d += tree_degree(c);
    return d;
}

int FreeOperad::tree_arity(const Tree& t) const
{
    if (t.is_leaf())
        return 1;
    int a = 0;
    for (auto& c : t.children)
        a += tree_arity(c);
    return a;
}

std::pair<int, Tree> FreeOperad::normalize(const Tree& t) const
{
    struct NF {
        int sign;
        Tree t;
        int min_leaf;
        int degree;
    };
    std::function<NF(const Tree&)> rec = [&](const Tree& x) -> NF {
        if (x.is_leaf())
            return {1, x, x.leaf, 0};
        const auto& g = gens_.at(x.gen);
        if (static_cast<int>(x.children.size()) != g.arity)
            throw Error("tree: vertex " + g.name + " has the wrong number of inputs");
        std::vector<NF> kids;
        int sign = 1;
        int degree = g.degree;
        for (auto& c : x.children) {
            kids.push_back(rec(c));
            sign *= kids.back().sign;
            degree += kids.back().degree;
        }
        if (g.symmetry != Symm::regular && g.arity > 1) {
            Perm ord = identity_perm(g.arity);
            std::sort(ord.begin(), ord.end(), [&](int p, int q) { return kids[p].min_leaf < kids[q].min_leaf; });
            std::vector<int> degs;
            for (auto& k : kids)
                degs.push_back(k.degree);
            sign *= koszul_sign(degs, ord);
            if (g.symmetry == Symm::antisymmetric)
                sign *= perm_sign(ord);
            std::vector<NF> sorted;
            for (int p : ord)
                sorted.push_back(std::move(kids[p]));
            kids = std::move(sorted);
        }
        Tree out;
        out.gen = x.gen;
        int ml = kids.front().min_leaf;
        for (auto& k : kids) {
            ml = std::min(ml, k.min_leaf);
            out.children.push_back(std::move(k.t));
        }
        return {sign, std::move(out), ml, degree};
    };
    auto r = rec(t);
    return {r.sign, std::move(r.t)};
}

SparseVec FreeOperad::vector_of(const Tree& t) const
{
    const int n = tree_arity(t);
    auto [s, nf] = normalize(t);
    const auto& c = comp(n);
    auto it = c.index.find(encode(nf));
    if (it == c.index.end()) {
        std::vector<int> leaves;
        std::function<void(const Tree&)> rec = [&](const Tree& x) {
            if (x.is_leaf())
                leaves.push_back(x.leaf);
            for (auto& ch : x.children)
                rec(ch);
        };
        rec(t);
        std::sort(leaves.begin(), leaves.end());
        for (int k = 0; k < n; ++k)
            if (leaves[k] != k + 1)
                throw Error("tree: leaves must be labelled 1.." + std::to_string(n));
        // weight beyond the truncation of a non-simply-connected operad
        return SparseVec();
    }
    return SparseVec::unit(it->second, s);
}

Tree FreeOperad::generator_tree(std::size_t g) const
{
    Tree t;
    t.gen = static_cast<int>(g);
    for (int k = 1; k <= gens_.at(g).arity; ++k)
        t.children.push_back(Tree::make_leaf(k));
    return t;
}

std::vector<SparseVec> FreeOperad::generator_vectors(int n) const
{
    std::vector<SparseVec> r;
    for (std::size_t g = 0; g < gens_.size(); ++g)
        if (gens_[g].arity == n)
            r.push_back(vector_of(generator_tree(g)));
    return r;
}

SparseVec FreeOperad::compose(int m, const SparseVec& a, int i, int n, const SparseVec& b) const
{
    if (i < 1 || i > m)
        throw Error("compose: index " + std::to_string(i) + " out of range for arity " + std::to_string(m));
    const int N = m + n - 1;
    const auto& cm = comp(m);
    const auto& cn = comp(n);
    const auto& cN = comp(N);
    std::vector<SparseVec::Entry> out;
    for (auto& [ia, xa] : a.entries()) {
        const Tree A = decode(cm.basis.at(ia));
        for (auto& [ib, xb] : b.entries()) {
            const Tree B = decode(cn.basis.at(ib));
            const int degB = cn.degree[ib];
            bool found = false;
            int after = 0;
            std::function<Tree(const Tree&)> graft = [&](const Tree& x) -> Tree {
                if (x.is_leaf()) {
                    if (x.leaf < i)
                        return x;
                    if (x.leaf > i)
                        return Tree::make_leaf(x.leaf + n - 1);
                    found = true;
                    std::function<Tree(const Tree&)> shift = [&](const Tree& y) {
                        if (y.is_leaf())
                            return Tree::make_leaf(y.leaf + i - 1);
                        Tree z;
                        z.gen = y.gen;
                        for (auto& c : y.children)
                            z.children.push_back(shift(c));
                        return z;
                    };
                    return shift(B);
                }
                if (found)
                    after += gens_[x.gen].degree;
                Tree z;
                z.gen = x.gen;
                for (auto& c : x.children)
                    z.children.push_back(graft(c));
                return z;
            };
            Tree T = graft(A);
            auto [s, nf] = normalize(T);
            auto it = cN.index.find(encode(nf));
            if (it == cN.index.end())
                continue; // beyond the weight truncation
            const int sign = s * sign_of((degB & 1) && (after & 1));
            out.emplace_back(it->second, Q(sign) * xa * xb);
        }
    }
    return SparseVec(std::move(out));
}

SparseVec FreeOperad::relabel(int n, const SparseVec& a, const Perm& rho) const
{
    if (static_cast<int>(rho.size()) != n)
        throw Error("action: permutation size does not match the arity");
    const auto& c = comp(n);
    std::vector<SparseVec::Entry> out;
    for (auto& [idx, x] : a.entries()) {
        std::function<Tree(const Tree&)> rl = [&](const Tree& y) {
            if (y.is_leaf())
                return Tree::make_leaf(rho[y.leaf - 1] + 1);
            Tree z;
            z.gen = y.gen;
            for (auto& ch : y.children)
                z.children.push_back(rl(ch));
            return z;
        };
        auto [s, nf] = normalize(rl(decode(c.basis.at(idx))));
        out.emplace_back(c.index.at(encode(nf)), Q(s) * x);
    }
    return SparseVec(std::move(out));
}

std::pair<SparseVec, SparseVec> FreeOperad::parity_split(int n, const SparseVec& a) const
{
    const auto& c = comp(n);
    std::vector<SparseVec::Entry> e, o;
    for (auto& [idx, x] : a.entries())
        ((c.degree.at(idx) & 1) ? o : e).emplace_back(idx, x);
    return {SparseVec(std::move(e)), SparseVec(std::move(o))};
}

std::string FreeOperad::tree_to_string(const Tree& t) const
{
    if (t.is_leaf())
        return std::to_string(t.leaf);
    std::string s = gens_.at(t.gen).name + "(";
    for (std::size_t k = 0; k < t.children.size(); ++k) {
        if (k)
            s += ",";
        s += tree_to_string(t.children[k]);
    }
    return s + ")";
}

std::string FreeOperad::to_string(int n, const SparseVec& a) const
{
    if (a.is_zero())
        return "0";
    const auto& c = comp(n);
    std::string s;
    bool first = true;
    for (auto& [idx, x] : a.entries()) {
        Q v = x;
        if (first) {
            if (v < 0) {
                s += "-";
                v = -v;
            }
        } else {
            s += v < 0 ? " - " : " + ";
            if (v < 0)
                v = -v;
        }
        if (v != 1)
            s += q_to_string(v) + "*";
        s += tree_to_string(decode(c.basis.at(idx)));
        first = false;
    }
    return s;
}

namespace {

struct TreeParser {
    const FreeOperad& F;
    std::string_view s;
    std::size_t pos = 0;

    void ws()
    {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
    }
    [[noreturn]] void fail(const std::string& what)
    {
        throw Error("tree syntax at column " + std::to_string(pos + 1) + ": " + what);
    }
    Tree tree()
    {
        ws();
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            int v = 0;
            while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
                v = v * 10 + (s[pos++] - '0');
            if (v < 1)
                fail("leaf labels start at 1");
            return Tree::make_leaf(v);
        }
        std::size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        if (start == pos)
            fail("expected a generator name or a leaf label");
        std::string name(s.substr(start, pos - start));
        auto g = F.generator_index(name);
        if (!g)
            fail("unknown generator '" + name + "'");
        ws();
        if (pos >= s.size() || s[pos] != '(')
            fail("expected '('");
        ++pos;
        Tree t;
        t.gen = static_cast<int>(*g);
        for (;;) {
            t.children.push_back(tree());
            ws();
            if (pos < s.size() && s[pos] == ',') {
                ++pos;
                continue;
            }
            if (pos < s.size() && s[pos] == ')') {
                ++pos;
                break;
            }
            fail("expected ',' or ')'");
        }
        if (static_cast<int>(t.children.size()) != F.generators()[*g].arity)
            fail("generator '" + name + "' takes " + std::to_string(F.generators()[*g].arity) + " inputs");
        return t;
    }
};

} // namespace

Tree FreeOperad::parse_tree(const std::string& s) const
{
    TreeParser p{*this, s};
    Tree t = p.tree();
    p.ws();
    if (p.pos != s.size())
        p.fail("trailing characters");
    return t;
}

OperadElement FreeOperad::parse_element(const std::string& text) const
{
    if (auto m = expand_macro(*this, text))
        return *m;
    TreeParser p{*this, text};
    OperadElement out;
    out.arity = 0;
    bool first = true;
    for (;;) {
        p.ws();
        if (p.pos >= text.size()) {
            if (first)
                p.fail("empty expression");
            break;
        }
        Q sign = 1;
        if (text[p.pos] == '+' || text[p.pos] == '-') {
            if (text[p.pos] == '-')
                sign = -1;
            ++p.pos;
            p.ws();
        } else if (!first) {
            p.fail("expected '+' or '-'");
        }
        Q coeff = 1;
        // optional rational coefficient followed by '*'
        std::size_t save = p.pos;
        std::size_t q = p.pos;
        while (q < text.size() && (std::isdigit(static_cast<unsigned char>(text[q])) || text[q] == '/'))
            ++q;
        std::size_t r = q;
        while (r < text.size() && std::isspace(static_cast<unsigned char>(text[r])))
            ++r;
        if (q > save && r < text.size() && text[r] == '*') {
            coeff = q_from_string(text.substr(save, q - save));
            p.pos = r + 1;
        }
        Tree t = p.tree();
        const int n = tree_arity(t);
        if (out.arity == 0)
            out.arity = n;
        else if (out.arity != n)
            p.fail("terms of different arity");
        out.v.axpy(sign * coeff, vector_of(t));
        first = false;
    }
    return out;
}

/* ---------------- relation macros ---------------- */

namespace {

Tree node(int g, std::vector<Tree> kids)
{
    Tree t;
    t.gen = g;
    t.children = std::move(kids);
    return t;
}

Tree leaf(int l) { return Tree::make_leaf(l); }

} // namespace

OperadElement jacobiator(const FreeOperad& F, std::size_t g)
{
    const auto& gen = F.generators().at(g);
    if (gen.symmetry != Symm::antisymmetric)
        throw Error("jacobiator: generator " + gen.name + " is not antisymmetric");
    const int n = gen.arity;
    const int N = 2 * n - 1;
    OperadElement out{N, {}};
    // (n, n-1)-shuffles: choose the first block
    std::vector<bool> pick(N, false);
    std::fill(pick.begin(), pick.begin() + n, true);
    do {
        Perm s;
        for (int k = 0; k < N; ++k)
            if (pick[k])
                s.push_back(k);
        for (int k = 0; k < N; ++k)
            if (!pick[k])
                s.push_back(k);
        std::vector<Tree> inner, outer;
        for (int k = 0; k < n; ++k)
            inner.push_back(leaf(s[k] + 1));
        outer.push_back(node(static_cast<int>(g), std::move(inner)));
        for (int k = n; k < N; ++k)
            outer.push_back(leaf(s[k] + 1));
        out.v.axpy(perm_sign(s), F.vector_of(node(static_cast<int>(g), std::move(outer))));
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return out;
}

OperadElement associator(const FreeOperad& F, std::size_t g)
{
    const int gi = static_cast<int>(g);
    if (F.generators().at(g).arity != 2)
        throw Error("associator: generator must be binary");
    OperadElement out{3, {}};
    out.v = F.vector_of(node(gi, {node(gi, {leaf(1), leaf(2)}), leaf(3)})) -
            F.vector_of(node(gi, {leaf(1), node(gi, {leaf(2), leaf(3)})}));
    return out;
}

OperadElement fundamental_identity(const FreeOperad& F, std::size_t g)
{
    const int gi = static_cast<int>(g);
    const auto& gen = F.generators().at(g);
    if (gen.arity != 3 || gen.symmetry != Symm::antisymmetric)
        throw Error("fundamental_identity: generator must be ternary antisymmetric");
    auto b = [&](Tree x, Tree y, Tree z) { return node(gi, {std::move(x), std::move(y), std::move(z)}); };
    OperadElement out{5, {}};
    out.v = F.vector_of(b(leaf(1), leaf(2), b(leaf(3), leaf(4), leaf(5)))) -
            F.vector_of(b(b(leaf(1), leaf(2), leaf(3)), leaf(4), leaf(5))) -
            F.vector_of(b(leaf(3), b(leaf(1), leaf(2), leaf(4)), leaf(5))) -
            F.vector_of(b(leaf(3), leaf(4), b(leaf(1), leaf(2), leaf(5))));
    return out;
}

OperadElement lie_admissible(const FreeOperad& F, std::size_t g)
{
    if (F.generators().at(g).arity != 2)
        throw Error("lie_admissible: generator must be binary");
    const auto ass = associator(F, g);
    OperadElement out{3, {}};
    for (auto& s : all_perms(3))
        out.v.axpy(perm_sign(s), F.act(3, ass.v, s));
    return out;
}

std::optional<OperadElement> expand_macro(const FreeOperad& F, const std::string& text)
{
    static const std::regex re(R"(^\s*([a-z_]+)\s*\(\s*([A-Za-z][A-Za-z0-9_]*)\s*\)\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, re))
        return std::nullopt;
    const std::string name = m[1];
    if (name != "jacobiator" && name != "associator" && name != "fundamental_identity" && name != "lie_admissible")
        return std::nullopt;
    auto g = F.generator_index(m[2]);
    if (!g)
        throw Error("relation macro " + name + ": unknown generator '" + std::string(m[2]) + "'");
    if (name == "jacobiator")
        return jacobiator(F, *g);
    if (name == "associator")
        return associator(F, *g);
    if (name == "fundamental_identity")
        return fundamental_identity(F, *g);
    return lie_admissible(F, *g);
}

/* ---------------- element-level operations ---------------- */

SparseVec compose_elem(const OperadModel& P, const OperadElement& a, int i, const OperadElement& b,
                       OperadElement* out)
{
    auto v = P.compose(a.arity, a.v, i, b.arity, b.v);
    if (out)
        *out = {a.arity + b.arity - 1, v};
    return v;
}

OperadElement compose(const OperadModel& P, const OperadElement& a, int i, const OperadElement& b)
{
    OperadElement r;
    compose_elem(P, a, i, b, &r);
    return r;
}

OperadElement act(const OperadModel& P, const Perm& sigma, const OperadElement& a)
{
    if (static_cast<int>(sigma.size()) != a.arity)
        throw Error("action: permutation size does not match the arity");
    return {a.arity, P.act(a.arity, a.v, sigma)};
}

OperadElement op_commutator(const OperadModel& P, const OperadElement& a, const OperadElement& b, int i, int j)
{
    return {a.arity + b.arity - 1, P.commutator(a.arity, a.v, i, b.arity, b.v, j)};
}

/* ---------------- ideals and quotients ---------------- */

namespace {

std::vector<Subspace> ideal_tower(const FreeOperad& F, const std::vector<OperadElement>& relations)
{
    const int A = F.max_arity();
    std::vector<Subspace> I(A + 1);
    for (int n = 1; n <= A; ++n)
        I[n] = Subspace(F.dim(n));
    for (auto& r : relations) {
        if (r.arity < 1 || r.arity > A)
            throw Error("relation of arity " + std::to_string(r.arity) + " beyond max_arity");
        I[r.arity].add(r.v);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (int n = 1; n <= A; ++n) {
            Subspace cur = I[n];
            for (int k = 1; k <= n; ++k) {
                const int l = n - k + 1;
                for (auto& e : F.generator_vectors(k))
                    for (auto& v : I[l].basis())
                        for (int i = 1; i <= k; ++i)
                            cur.add(F.compose(k, e, i, l, v));
                for (auto& v : I[k].basis())
                    for (auto& e : F.generator_vectors(l))
                        for (int i = 1; i <= k; ++i)
                            cur.add(F.compose(k, v, i, l, e));
            }
            cur = F.sigma_closure(n, cur);
            if (cur.dim() != I[n].dim()) {
                I[n] = std::move(cur);
                changed = true;
            }
        }
    }
    return I;
}

} // namespace

Subspace ideal_component(const FreeOperad& F, const std::vector<OperadElement>& relations, int n)
{
    if (n < 1 || n > F.max_arity())
        throw Error("ideal: arity beyond the configured bound");
    return ideal_tower(F, relations)[n];
}

QuotientOperad::QuotientOperad(std::shared_ptr<const FreeOperad> free, std::vector<OperadElement> relations)
    : free_(std::move(free)), relations_(std::move(relations))
{
    auto I = ideal_tower(*free_, relations_);
    for (int n = 1; n <= free_->max_arity(); ++n)
        maps_.emplace(n, QuotientMap(std::move(I[n])));
}

std::uint32_t QuotientOperad::dim(int n) const
{
    auto it = maps_.find(n);
    if (it == maps_.end())
        throw Error("quotient operad: arity beyond the configured bound");
    return it->second.dim();
}

std::vector<SparseVec> QuotientOperad::generator_vectors(int n) const
{
    std::vector<SparseVec> r;
    for (auto& v : free_->generator_vectors(n))
        r.push_back(projection(n).project(v));
    return r;
}

SparseVec QuotientOperad::compose(int m, const SparseVec& a, int i, int n, const SparseVec& b) const
{
    const int N = m + n - 1;
    if (N > max_arity())
        throw Error("compose: arity beyond the configured bound");
    return projection(N).project(free_->compose(m, projection(m).lift(a), i, n, projection(n).lift(b)));
}

SparseVec QuotientOperad::relabel(int n, const SparseVec& a, const Perm& rho) const
{
    return projection(n).project(free_->relabel(n, projection(n).lift(a), rho));
}

std::pair<SparseVec, SparseVec> QuotientOperad::parity_split(int n, const SparseVec& a) const
{
    // the ideal is spanned by homogeneous relations' consequences; lifts of basis vectors are tree monomials
    auto [e, o] = free_->parity_split(n, projection(n).lift(a));
    return {projection(n).project(e), projection(n).project(o)};
}

std::string QuotientOperad::to_string(int n, const SparseVec& a) const
{
    return free_->to_string(n, projection(n).lift(a));
}

/* ---------------- JSON ---------------- */

SigmaGenerator generator_from_json(const nlohmann::json& j)
{
    SigmaGenerator g;
    g.name = j.at("name").get<std::string>();
    g.arity = j.value("arity", 2);
    g.degree = j.value("degree", 0);
    const std::string s = j.value("symmetry", "regular");
    if (s == "symmetric" || s == "trivial")
        g.symmetry = Symm::symmetric;
    else if (s == "antisymmetric" || s == "sign")
        g.symmetry = Symm::antisymmetric;
    else if (s == "regular" || s == "none")
        g.symmetry = Symm::regular;
    else
        throw Error("generator " + g.name + ": unknown symmetry '" + s + "'");
    return g;
}

OperadPresentation presentation_from_json(const nlohmann::json& j, std::shared_ptr<const FreeOperad>* free_out)
{
    OperadPresentation p;
    p.max_arity = j.value("max_arity", 5);
    for (auto& g : j.at("generators"))
        p.generators.push_back(generator_from_json(g));
    auto F = std::make_shared<const FreeOperad>(p.generators, p.max_arity, j.value("max_weight", -1));
    for (auto& r : j.value("relations", nlohmann::json::array())) {
        if (r.is_string()) {
            p.relations.push_back(F->parse_element(r.get<std::string>()));
            continue;
        }
        OperadElement e;
        e.arity = 0;
        for (auto& t : r.at("terms")) {
            Tree tr = F->parse_tree(t.at("tree").get<std::string>());
            const int n = F->tree_arity(tr);
            if (e.arity == 0)
                e.arity = n;
            else if (e.arity != n)
                throw Error("relation terms of different arity");
            Q c = t.contains("coeff") ? q_from_string(t.at("coeff").get<std::string>()) : Q(1);
            e.v.axpy(c, F->vector_of(tr));
        }
        if (r.contains("arity") && r.at("arity").get<int>() != e.arity)
            throw Error("relation arity does not match its terms");
        p.relations.push_back(std::move(e));
    }
    for (auto& r : p.relations)
        if (r.arity > p.max_arity)
            throw Error("relation arity exceeds max_arity");
    if (free_out)
        *free_out = F;
    return p;
}

} // namespace odlab
