#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace odlab {

using Q = mpq_class;

std::string q_to_string(const Q& q);
Q q_from_string(std::string_view s);

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ContextMismatch : Error {
    using Error::Error;
};

struct TruncationError : Error {
    using Error::Error;
};

inline int sign_of(bool odd) { return odd ? -1 : 1; }

struct Generator {
    std::string name;
    int degree = 0;
};

class Monomial {
  public:
    Monomial() = default;
    explicit Monomial(std::vector<std::uint16_t> factors) : f_(std::move(factors)) {}

    const std::vector<std::uint16_t>& factors() const { return f_; }
    int length() const { return static_cast<int>(f_.size()); }
    bool is_one() const { return f_.empty(); }
    int exponent(std::size_t gen) const;

    // word length first, then lexicographic on the factor sequence
    friend bool operator<(const Monomial& a, const Monomial& b)
    {
        if (a.f_.size() != b.f_.size())
            return a.f_.size() < b.f_.size();
        return a.f_ < b.f_;
    }
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.f_ == b.f_; }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

  private:
    std::vector<std::uint16_t> f_;
};

// Symmetric: S(X) with generator swap sign (-1)^{|a||b|}.
// Exterior: the graded exterior algebra, swap sign -(-1)^{|a||b|}.
enum class AlgebraKind { symmetric, exterior };

class AlgebraContext {
  public:
    AlgebraContext();
    AlgebraContext(std::vector<Generator> gens, int truncation = 6,
                   AlgebraKind kind = AlgebraKind::symmetric);

    const std::vector<Generator>& generators() const { return d_->gens; }
    std::size_t size() const { return d_->gens.size(); }
    int truncation() const { return d_->D; }
    AlgebraKind kind() const { return d_->kind; }
    bool unital() const { return true; }
    int degree(std::size_t i) const { return d_->gens[i].degree; }
    const std::string& name(std::size_t i) const { return d_->gens[i].name; }
    std::optional<std::size_t> index_of(std::string_view name) const;

    // sign exponent for swapping adjacent generators i, j
    bool swap_odd(std::size_t i, std::size_t j) const
    {
        bool s = (degree(i) & 1) && (degree(j) & 1);
        return d_->kind == AlgebraKind::exterior ? !s : s;
    }
    bool square_zero(std::size_t i) const { return swap_odd(i, i); }

    int degree(const Monomial& m) const;
    // all monomials of word length <= len, in basis order
    std::vector<Monomial> basis(int len) const;
    const std::vector<Monomial>& basis() const { return d_->basis; }
    std::optional<std::size_t> basis_index(const Monomial& m) const;

    std::string to_string(const Monomial& m) const;

    AlgebraContext with_truncation(int D) const;

    friend bool operator==(const AlgebraContext& a, const AlgebraContext& b);
    friend bool operator!=(const AlgebraContext& a, const AlgebraContext& b) { return !(a == b); }

    static AlgebraContext from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

  private:
    struct Data {
        std::vector<Generator> gens;
        int D = 6;
        AlgebraKind kind = AlgebraKind::symmetric;
        std::vector<Monomial> basis;
        std::map<Monomial, std::size_t> index;
    };
    std::shared_ptr<const Data> d_;
};

// Ordered product of generators, brought to canonical order.
// Returns sign 0 when the word vanishes (repeated square-zero generator).
struct SignedMonomial {
    int sign = 1;
    Monomial mono;
};
SignedMonomial word_to_monomial(const AlgebraContext& ctx, std::span<const std::uint16_t> word);

// Koszul sign of reordering graded items: the result lists items[perm[0]], items[perm[1]], ...
int koszul_sign(const AlgebraContext& ctx, std::span<const int> degrees, std::span<const int> perm);
int koszul_sign(std::span<const int> degrees, std::span<const int> perm);

SignedMonomial multiply(const AlgebraContext& ctx, const Monomial& a, const Monomial& b);

class Polynomial {
  public:
    using Terms = std::map<Monomial, Q>;

    Polynomial() = default;
    explicit Polynomial(const Monomial& m, Q c = 1);
    static Polynomial constant(Q c);

    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    std::size_t size() const { return t_.size(); }
    Q coeff(const Monomial& m) const;
    int max_length() const;

    void add_term(const Monomial& m, const Q& c);
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    Polynomial& operator*=(const Q& c);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Q& c) { return a *= c; }
    friend Polynomial operator*(const Q& c, Polynomial a) { return a *= c; }
    friend Polynomial operator-(Polynomial a) { return a *= Q(-1); }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.t_ == b.t_; }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    // drop terms of word length > len; true if anything was dropped
    bool truncate(int len);

  private:
    Terms t_;
};

// Degree if homogeneous, nullopt otherwise (zero counts as homogeneous of any degree: returns nullopt).
std::optional<int> homogeneous_degree(const AlgebraContext& ctx, const Polynomial& p);
bool parity_homogeneous(const AlgebraContext& ctx, const Polynomial& p, int* parity);

// Product truncated at ctx.truncation(); *truncated set when terms were dropped.
Polynomial multiply(const Polynomial& p, const Polynomial& q, const AlgebraContext& ctx,
                    bool* truncated = nullptr);
// Product without truncation.
Polynomial multiply_exact(const Polynomial& p, const Polynomial& q, const AlgebraContext& ctx);

Polynomial left_derivative(const Polynomial& p, std::size_t gen, const AlgebraContext& ctx);
Polynomial right_derivative(const Polynomial& p, std::size_t gen, const AlgebraContext& ctx);

// Substitute zero for every generator in the set.
Polynomial set_to_zero(const Polynomial& p, const std::vector<bool>& gens);

void check_member(const Polynomial& p, const AlgebraContext& ctx);

std::string to_string(const Polynomial& p, const AlgebraContext& ctx);
Polynomial parse_polynomial(std::string_view text, const AlgebraContext& ctx);
Monomial parse_monomial(std::string_view text, const AlgebraContext& ctx);

// Suspension isomorphisms. f: Λ(W) -> S(↑W), g: S(↓W) -> S(↑W).
enum class SuspendDirection { f, f_inv, g, g_inv };

Polynomial suspend_iso(const Polynomial& u, SuspendDirection dir, const AlgebraContext& source,
                       const AlgebraContext& target);

// Context helpers for the three pictures over W.
AlgebraContext exterior_context(const std::vector<Generator>& w, int D);
AlgebraContext up_context(const std::vector<Generator>& w, int D);
AlgebraContext down_context(const std::vector<Generator>& w, int D);

} // namespace odlab
