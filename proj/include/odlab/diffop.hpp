#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "odlab/graded_poly.hpp"

namespace odlab {

// serial: plain recursive definitions over all ordered tuples (reference).
// parallel: closed-form expansions over multisets, OpenMP over tuples.
enum class Kernel { serial, parallel };

class LinearOperator {
  public:
    using Fn = std::function<Polynomial(const Monomial&)>;

    LinearOperator(AlgebraContext ctx, int degree, Fn fn, int domain = -1);
    static LinearOperator zero(const AlgebraContext& ctx, int degree = 0);
    static LinearOperator identity(const AlgebraContext& ctx);
    // table keyed by basis monomials; missing keys act as zero; domain = ctx.truncation()
    static LinearOperator from_table(const AlgebraContext& ctx, int degree, std::map<Monomial, Polynomial> table);

    const AlgebraContext& ctx() const { return ctx_; }
    int degree() const { return degree_; }
    // largest input word length the operator is defined on, -1 if unbounded
    int domain() const { return domain_; }

    Polynomial apply(const Monomial& m) const;
    Polynomial operator()(const Polynomial& p) const;

    // tabulate on all basis monomials of word length <= len (exact values)
    LinearOperator materialize(int len) const;
    std::map<Monomial, Polynomial> table(int len) const;

    LinearOperator operator+(const LinearOperator& o) const;
    LinearOperator operator-(const LinearOperator& o) const;
    LinearOperator scaled(const Q& c) const;

  private:
    AlgebraContext ctx_;
    int degree_ = 0;
    Fn fn_;
    int domain_ = -1;
};

LinearOperator left_mult(const Polynomial& a, const AlgebraContext& ctx);
LinearOperator partial(std::size_t gen, const AlgebraContext& ctx);
LinearOperator compose(const LinearOperator& a, const LinearOperator& b);
LinearOperator commutator(const LinearOperator& a, const LinearOperator& b);

// equality on every basis monomial of word length <= len
bool agree_upto(const LinearOperator& a, const LinearOperator& b, int len);

// Φⁿ by the three-term recursion.
Polynomial deviation(const LinearOperator& op, std::span<const Polynomial> args);
// Φⁿ by the expansion over nonempty subsets.
Polynomial deviation_expanded(const LinearOperator& op, std::span<const Polynomial> args);

// Ψⁿ as nested commutators with left multiplications.
LinearOperator psi(const LinearOperator& op, std::span<const Polynomial> args);
// Ψⁿ(args)(x) by the expansion over subsets.
Polynomial psi_apply(const LinearOperator& op, std::span<const Polynomial> args, const Polynomial& x);

struct OrderCertificate {
    std::optional<int> order;      // nullopt: exceeds r_max
    int r_max = 0;
    int window = 0;                // sweeps covered tuples of total word length <= window
    std::vector<Monomial> witness; // failing tuple at r_max when exceeded

    bool exceeds() const { return !order.has_value(); }
    std::string describe() const;
};

OrderCertificate derivation_order(const LinearOperator& op, int r_max, int window = -1,
                                  Kernel kernel = Kernel::parallel);
OrderCertificate diffop_order(const LinearOperator& op, int r_max, int window = -1,
                              Kernel kernel = Kernel::parallel);

// does Φ^{n} (resp. Ψ^{n}) vanish on the window; returns the first failing tuple otherwise
std::optional<std::vector<Monomial>> deviation_witness(const LinearOperator& op, int n, int window, Kernel kernel);
std::optional<std::vector<Monomial>> psi_witness(const LinearOperator& op, int n, int window, Kernel kernel);

struct UnitalSplit {
    LinearOperator theta;
    Polynomial value;
};
UnitalSplit unital_split(const LinearOperator& op);

enum class Symmetry { none, graded_symmetric, graded_antisymmetric };

class MultilinearOperator {
  public:
    using Fn = std::function<Polynomial(std::span<const Monomial>)>;

    MultilinearOperator(AlgebraContext ctx, int arity, int degree, Fn fn, int domain = -1,
                        Symmetry sym = Symmetry::none);
    static MultilinearOperator zero(const AlgebraContext& ctx, int arity, int degree = 0);
    // table keyed by tuples of basis monomials; domain = ctx.truncation() on total word length
    static MultilinearOperator from_table(const AlgebraContext& ctx, int arity, int degree,
                                          std::map<std::vector<Monomial>, Polynomial> table,
                                          Symmetry sym = Symmetry::none);

    const AlgebraContext& ctx() const { return ctx_; }
    int arity() const { return arity_; }
    int degree() const { return degree_; }
    int domain() const { return domain_; }
    Symmetry symmetry() const { return sym_; }

    Polynomial apply(std::span<const Monomial> ms) const;
    Polynomial operator()(std::span<const Polynomial> ps) const;
    Polynomial operator()(const Polynomial& a, const Polynomial& b) const;

    // unary operator in slot i (0-based) with the other slots frozen
    LinearOperator freeze(int slot, std::span<const Monomial> others) const;

    MultilinearOperator operator+(const MultilinearOperator& o) const;
    MultilinearOperator operator-(const MultilinearOperator& o) const;
    MultilinearOperator scaled(const Q& c) const;
    MultilinearOperator with_symmetry(Symmetry s, int window = -1) const;

    std::map<std::vector<Monomial>, Polynomial> table(int window) const;

  private:
    AlgebraContext ctx_;
    int arity_ = 1;
    int degree_ = 0;
    Fn fn_;
    int domain_ = -1;
    Symmetry sym_ = Symmetry::none;
};

// first tuple violating the declared symmetry on the window, if any
std::optional<std::vector<Monomial>> symmetry_violation(const MultilinearOperator& op, Symmetry s, int window);

// the product map (a1..ak) -> a1···ak
MultilinearOperator product_map(const AlgebraContext& ctx, int arity);

enum class OrderKind { derivation, diffop };

struct SlotOrder {
    OrderCertificate cert;
    std::vector<std::pair<std::vector<Monomial>, OrderCertificate>> breakdown;
};

SlotOrder slot_order(const MultilinearOperator& op, int slot, OrderKind kind, int r_max, int window = -1,
                     bool with_breakdown = false, Kernel kernel = Kernel::parallel);

class UpsilonTable {
  public:
    UpsilonTable(AlgebraContext ctx, int n, int degree = 0);

    const AlgebraContext& ctx() const { return ctx_; }
    int order() const { return n_; }
    int degree() const { return degree_; }

    // Υ^{ij}(a, b) for basis monomials of word lengths i and j
    void set(const Monomial& a, const Monomial& b, const Polynomial& value);
    // also sets the mirrored entry demanded by graded antisymmetry
    void set_antisymmetric(const Monomial& a, const Monomial& b, const Polynomial& value);
    Polynomial get(const Monomial& a, const Monomial& b) const;

    const std::map<std::pair<Monomial, Monomial>, Polynomial>& entries() const { return e_; }
    std::optional<std::string> antisymmetry_violation() const;

  private:
    AlgebraContext ctx_;
    int n_;
    int degree_;
    std::map<std::pair<Monomial, Monomial>, Polynomial> e_;
};

MultilinearOperator extend_upsilon(const UpsilonTable& tab);

// Φ̃ⁿ(a′; a″) with n = args1.size() = args2.size().
Polynomial bideviation(const MultilinearOperator& op, std::span<const Polynomial> args1,
                       std::span<const Polynomial> args2);

// helpers shared by the sweep kernels
Polynomial ordered_product(std::span<const Polynomial> ps, const AlgebraContext& ctx);
int parity(const AlgebraContext& ctx, const Polynomial& p);

} // namespace odlab
