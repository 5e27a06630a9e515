#include "odlab/linalg.hpp"

#include <algorithm>

namespace odlab {

SparseVec::SparseVec(std::vector<Entry> e) : e_(std::move(e))
{
    std::sort(e_.begin(), e_.end(), [](auto& a, auto& b) { return a.first < b.first; });
    std::vector<Entry> m;
    for (auto& x : e_) {
        if (!m.empty() && m.back().first == x.first)
            m.back().second += x.second;
        else
            m.push_back(std::move(x));
    }
    std::erase_if(m, [](auto& x) { return x.second == 0; });
    e_ = std::move(m);
}

SparseVec SparseVec::unit(std::uint32_t col, Q c)
{
    SparseVec v;
    if (c != 0)
        v.e_.emplace_back(col, std::move(c));
    return v;
}

SparseVec SparseVec::from_dense(const std::vector<Q>& d)
{
    SparseVec v;
    for (std::uint32_t i = 0; i < d.size(); ++i)
        if (d[i] != 0)
            v.e_.emplace_back(i, d[i]);
    return v;
}

Q SparseVec::at(std::uint32_t col) const
{
    auto it = std::lower_bound(e_.begin(), e_.end(), col, [](auto& a, auto c) { return a.first < c; });
    return it != e_.end() && it->first == col ? it->second : Q(0);
}

void SparseVec::axpy(const Q& c, const SparseVec& o)
{
    if (c == 0 || o.e_.empty())
        return;
    std::vector<Entry> r;
    r.reserve(e_.size() + o.e_.size());
    auto a = e_.begin();
    auto b = o.e_.begin();
    while (a != e_.end() || b != o.e_.end()) {
        if (b == o.e_.end() || (a != e_.end() && a->first < b->first)) {
            r.push_back(std::move(*a++));
        } else if (a == e_.end() || b->first < a->first) {
            r.emplace_back(b->first, c * b->second);
            ++b;
        } else {
            Q v = a->second + c * b->second;
            if (v != 0)
                r.emplace_back(a->first, std::move(v));
            ++a;
            ++b;
        }
    }
    e_ = std::move(r);
}

SparseVec& SparseVec::operator*=(const Q& c)
{
    if (c == 0)
        e_.clear();
    for (auto& x : e_)
        x.second *= c;
    return *this;
}

/* ---------------- Subspace ---------------- */

Subspace Subspace::full(std::uint32_t dim)
{
    Subspace s(dim);
    for (std::uint32_t i = 0; i < dim; ++i)
        s.rows_.emplace(i, SparseVec::unit(i));
    return s;
}

Subspace Subspace::span(std::uint32_t dim, const std::vector<SparseVec>& vs)
{
    Subspace s(dim);
    for (auto& v : vs)
        s.add(v);
    return s;
}

std::vector<SparseVec> Subspace::basis() const
{
    std::vector<SparseVec> b;
    b.reserve(rows_.size());
    for (auto& [p, r] : rows_)
        b.push_back(r);
    return b;
}

std::vector<std::uint32_t> Subspace::pivots() const
{
    std::vector<std::uint32_t> p;
    for (auto& [k, r] : rows_)
        p.push_back(k);
    return p;
}

SparseVec Subspace::reduce(SparseVec v) const
{
    if (rows_.empty())
        return v;
    // walk pivots in increasing order; rows are fully reduced so earlier pivots stay cleared
    std::size_t i = 0;
    while (i < v.entries().size()) {
        auto col = v.entries()[i].first;
        auto it = rows_.find(col);
        if (it == rows_.end()) {
            ++i;
            continue;
        }
        Q c = v.entries()[i].second;
        v.axpy(-c, it->second);
    }
    return v;
}

bool Subspace::add(SparseVec v)
{
    for (auto& e : v.entries())
        if (e.first >= dim_)
            throw Error("subspace: vector outside the ambient space");
    v = reduce(std::move(v));
    if (v.is_zero())
        return false;
    Q lead = v.entries().front().second;
    v *= Q(1) / lead;
    const auto p = v.lead();
    for (auto& [k, r] : rows_) {
        Q c = r.at(p);
        if (c != 0)
            r.axpy(-c, v);
    }
    rows_.emplace(p, std::move(v));
    return true;
}

bool Subspace::contains(const Subspace& o) const
{
    for (auto& [k, r] : o.rows_)
        if (!contains(r))
            return false;
    return true;
}

std::vector<Q> Subspace::coordinates(const SparseVec& v) const
{
    std::vector<Q> c;
    for (auto& [k, r] : rows_)
        c.push_back(v.at(k));
    return c;
}

bool operator==(const Subspace& a, const Subspace& b)
{
    if (a.dim_ != b.dim_ || a.rows_.size() != b.rows_.size())
        return false;
    auto i = a.rows_.begin();
    auto j = b.rows_.begin();
    for (; i != a.rows_.end(); ++i, ++j)
        if (i->first != j->first || !(i->second == j->second))
            return false;
    return true;
}

Subspace sum(const Subspace& a, const Subspace& b)
{
    if (a.ambient() != b.ambient())
        throw Error("subspace sum: ambient mismatch");
    if (a.dim() < b.dim())
        return sum(b, a);
    Subspace s = a;
    for (auto& r : b.basis())
        s.add(r);
    return s;
}

Subspace intersect(const Subspace& a, const Subspace& b)
{
    if (a.ambient() != b.ambient())
        throw Error("subspace intersection: ambient mismatch");
    const std::uint32_t d = a.ambient();
    if (a.is_zero() || b.is_zero())
        return Subspace(d);
    if (a.contains(b))
        return b;
    if (b.contains(a))
        return a;
    // Zassenhaus: rows (u|u) for u in a, (w|0) for w in b
    Subspace z(2 * d);
    for (auto& u : a.basis()) {
        auto e = u.entries();
        for (auto& x : u.entries())
            e.emplace_back(x.first + d, x.second);
        z.add(SparseVec(std::move(e)));
    }
    for (auto& w : b.basis())
        z.add(w);
    Subspace r(d);
    for (auto& row : z.basis()) {
        if (row.lead() < d)
            continue;
        std::vector<SparseVec::Entry> e;
        for (auto& x : row.entries())
            e.emplace_back(x.first - d, x.second);
        r.add(SparseVec(std::move(e)));
    }
    return r;
}

/* ---------------- maps ---------------- */

SparseVec LinearMap::apply(const SparseVec& v) const
{
    SparseVec r;
    for (auto& [c, x] : v.entries()) {
        if (c >= columns.size())
            throw Error("linear map: vector outside the source space");
        r.axpy(x, columns[c]);
    }
    return r;
}

Subspace LinearMap::image(const Subspace& s) const
{
    if (s.ambient() != source_dim)
        throw Error("linear map: subspace ambient mismatch");
    Subspace r(target_dim);
    for (auto& v : s.basis())
        r.add(apply(v));
    return r;
}

bool LinearMap::surjective() const
{
    return image(Subspace::full(source_dim)).dim() == target_dim;
}

QuotientMap::QuotientMap(Subspace k) : kernel(std::move(k))
{
    col_to_free.assign(kernel.ambient(), -1);
    auto piv = kernel.pivots();
    std::size_t p = 0;
    for (std::uint32_t c = 0; c < kernel.ambient(); ++c) {
        if (p < piv.size() && piv[p] == c) {
            ++p;
            continue;
        }
        col_to_free[c] = static_cast<std::int64_t>(free_cols.size());
        free_cols.push_back(c);
    }
}

SparseVec QuotientMap::project(const SparseVec& v) const
{
    auto r = kernel.reduce(v);
    std::vector<SparseVec::Entry> e;
    for (auto& [c, x] : r.entries())
        e.emplace_back(static_cast<std::uint32_t>(col_to_free[c]), x);
    return SparseVec(std::move(e));
}

SparseVec QuotientMap::lift(const SparseVec& q) const
{
    std::vector<SparseVec::Entry> e;
    for (auto& [c, x] : q.entries()) {
        if (c >= free_cols.size())
            throw Error("quotient lift: index out of range");
        e.emplace_back(free_cols[c], x);
    }
    return SparseVec(std::move(e));
}

LinearMap QuotientMap::as_map() const
{
    LinearMap m;
    m.source_dim = kernel.ambient();
    m.target_dim = dim();
    for (std::uint32_t c = 0; c < kernel.ambient(); ++c)
        m.columns.push_back(project(SparseVec::unit(c)));
    return m;
}

} // namespace odlab
