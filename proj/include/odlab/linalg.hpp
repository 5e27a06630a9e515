#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "odlab/graded_poly.hpp"

namespace odlab {

// Sparse vector: sorted (column, nonzero value) pairs.
class SparseVec {
  public:
    using Entry = std::pair<std::uint32_t, Q>;

    SparseVec() = default;
    explicit SparseVec(std::vector<Entry> e);
    static SparseVec unit(std::uint32_t col, Q c = 1);
    static SparseVec from_dense(const std::vector<Q>& d);

    const std::vector<Entry>& entries() const { return e_; }
    bool is_zero() const { return e_.empty(); }
    std::size_t nnz() const { return e_.size(); }
    Q at(std::uint32_t col) const;
    std::uint32_t lead() const { return e_.front().first; }

    // this += c * o
    void axpy(const Q& c, const SparseVec& o);
    SparseVec& operator*=(const Q& c);
    friend SparseVec operator+(SparseVec a, const SparseVec& b)
    {
        a.axpy(1, b);
        return a;
    }
    friend SparseVec operator-(SparseVec a, const SparseVec& b)
    {
        a.axpy(-1, b);
        return a;
    }
    friend bool operator==(const SparseVec& a, const SparseVec& b) { return a.e_ == b.e_; }
    friend bool operator<(const SparseVec& a, const SparseVec& b) { return a.e_ < b.e_; }

  private:
    std::vector<Entry> e_;
};

// Subspace of Q^dim held in reduced row echelon form.
class Subspace {
  public:
    Subspace() = default;
    explicit Subspace(std::uint32_t dim) : dim_(dim) {}
    static Subspace full(std::uint32_t dim);
    static Subspace span(std::uint32_t dim, const std::vector<SparseVec>& vs);

    std::uint32_t ambient() const { return dim_; }
    std::size_t dim() const { return rows_.size(); }
    bool is_zero() const { return rows_.empty(); }

    // rows ordered by pivot
    std::vector<SparseVec> basis() const;
    std::vector<std::uint32_t> pivots() const;

    bool add(SparseVec v);
    SparseVec reduce(SparseVec v) const;
    bool contains(const SparseVec& v) const { return reduce(v).is_zero(); }
    bool contains(const Subspace& o) const;

    // coordinates of a vector of the subspace in the row basis
    std::vector<Q> coordinates(const SparseVec& v) const;

    friend bool operator==(const Subspace& a, const Subspace& b);
    friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

  private:
    std::uint32_t dim_ = 0;
    std::map<std::uint32_t, SparseVec> rows_;
};

Subspace sum(const Subspace& a, const Subspace& b);
Subspace intersect(const Subspace& a, const Subspace& b);

// Linear map given by images of the ambient basis vectors.
struct LinearMap {
    std::uint32_t source_dim = 0;
    std::uint32_t target_dim = 0;
    std::vector<SparseVec> columns;

    SparseVec apply(const SparseVec& v) const;
    Subspace image(const Subspace& s) const;
    bool surjective() const;
};

// Projection onto the complement coordinates of a subspace (non-pivot columns of its RREF).
struct QuotientMap {
    Subspace kernel;
    std::vector<std::uint32_t> free_cols;   // quotient basis index -> ambient column
    std::vector<std::int64_t> col_to_free;  // ambient column -> quotient index or -1

    explicit QuotientMap(Subspace k);
    std::uint32_t dim() const { return static_cast<std::uint32_t>(free_cols.size()); }
    SparseVec project(const SparseVec& v) const;
    SparseVec lift(const SparseVec& q) const;
    LinearMap as_map() const;
};

} // namespace odlab
