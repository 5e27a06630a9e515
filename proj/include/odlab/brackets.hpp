#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "odlab/diffop.hpp"
#include "odlab/graded_poly.hpp"

namespace odlab {

// big: ψᵢ = ↑eᵢ (degree |eᵢ|+1) and ηⁱ (degree 1-|eᵢ|); terilla: eᵢ and αⁱ (degree -|eᵢ|)
enum class PairingStyle { big, terilla };

class PairedContext {
  public:
    PairedContext(std::vector<int> degrees, int D = 6, int M = 3, PairingStyle style = PairingStyle::big);

    const AlgebraContext& algebra() const { return ctx_; }
    PairingStyle style() const { return style_; }
    std::size_t dim() const { return degrees_.size(); }
    const std::vector<int>& degrees() const { return degrees_; }
    int truncation() const { return D_; }
    int h_truncation() const { return M_; }

    // ψᵢ / eᵢ and ηⁱ / αⁱ as generator indices (0-based i)
    std::size_t lower(std::size_t i) const { return i; }
    std::size_t upper(std::size_t i) const { return dim() + i; }
    // (generator differentiated in f, generator differentiated in g)
    std::vector<std::pair<std::size_t, std::size_t>> pairs() const;
    // h-exponent carried by the n-fold contraction
    int h_shift() const { return style_ == PairingStyle::big ? 1 : 0; }

    static PairedContext from_json(const nlohmann::json& j, PairingStyle style);

  private:
    std::vector<int> degrees_;
    int D_;
    int M_;
    PairingStyle style_;
    AlgebraContext ctx_;
};

// c[s] is the coefficient of hˢ, s = 0..M
struct HSeries {
    std::vector<Polynomial> c;
    bool truncated = false; // terms beyond h^M or word length D were dropped

    explicit HSeries(int M = 0) : c(M + 1) {}
    int order() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const;
    HSeries& operator+=(const HSeries& o);
    HSeries& operator-=(const HSeries& o);
    HSeries scaled(const Q& x) const;
};

// Σ over index sequences of (f ∂⃖_{a(i1)}..∂⃖_{a(in)}) · (∂⃗_{b(in)}..∂⃗_{b(i1)} g), exact
Polynomial contraction(const Polynomial& f, const Polynomial& g, int n,
                       const std::vector<std::pair<std::size_t, std::size_t>>& pairs, const AlgebraContext& ctx);

Polynomial big_bracket(const Polynomial& f, const Polynomial& g, const PairedContext& ctx);
HSeries superbig_star(const Polynomial& f, const Polynomial& g, const PairedContext& ctx);
HSeries superbig_bracket(const Polynomial& f, const Polynomial& g, const PairedContext& ctx);
HSeries terilla_star(const Polynomial& f, const Polynomial& g, const PairedContext& ctx);
// ⋆ of h-series, for either style
HSeries star(const HSeries& F, const HSeries& G, const PairedContext& ctx);
HSeries graded_commutator(const HSeries& F, const HSeries& G, const PairedContext& ctx);

struct HSeriesOperator {
    int arity = 2;
    std::vector<MultilinearOperator> coeffs; // coefficient of hˢ
    int h_degree = 2;
    int offset = 1;        // coefficient s is meant to have slot orders <= offset + s
    int element_shift = 0; // element degree = word degree - element_shift

    HSeriesOperator(int arity, std::vector<MultilinearOperator> coeffs, int h_degree = 2, int offset = 1,
                    int element_shift = 0);
    int truncation() const { return static_cast<int>(coeffs.size()) - 1; }
    HSeries apply(std::span<const Polynomial> args) const;
    const AlgebraContext& ctx() const { return coeffs.front().ctx(); }
};

MultilinearOperator big_bracket_operator(const PairedContext& ctx);
HSeriesOperator superbig_operator(const PairedContext& ctx);
HSeriesOperator terilla_operator(const PairedContext& ctx);
MultilinearOperator product_operator(const PairedContext& ctx);
MultilinearOperator semiclassical(const HSeriesOperator& op);

struct OrderProfileEntry {
    int coefficient = 0;
    int slot = 0;
    int bound = 0;
    OrderCertificate cert;
};
// slot orders of every coefficient against the offset convention
std::vector<OrderProfileEntry> certify_profile(const HSeriesOperator& op, int window, Kernel kernel = Kernel::parallel);

// Jacₙ(a,b,c) = Σ_{s+t=n+1} (-1)^{|a||c|}[a,[b,c]_s]_t + cyclic, [-,-]_s the h^{s-1} coefficient
Polynomial lie_jacobiator_n(const HSeriesOperator& bracket, int n, const Polynomial& a, const Polynomial& b,
                            const Polynomial& c);
MultilinearOperator lie_jacobiator_operator(const HSeriesOperator& bracket, int n);

struct LInfFamily {
    AlgebraContext ctx;
    std::map<std::pair<int, int>, MultilinearOperator> l; // (k, n) -> l_{k,n}
    int element_shift = 0;
    bool missing_is_zero = false;

    const MultilinearOperator* get(int k, int n) const;
};

Polynomial linf_jacobiator(const LInfFamily& fam, int k, int n, std::span<const Polynomial> args);
MultilinearOperator linf_jacobiator_operator(const LInfFamily& fam, int k, int n);

struct IblVerdict {
    bool member = false;
    bool h0_in_m3 = false;
    bool vanishes_at_psi_zero = false;
    bool vanishes_at_eta_zero = false;
};
IblVerdict ibl_membership(const HSeries& f, const PairedContext& ctx);

nlohmann::json to_json(const HSeries& s, const AlgebraContext& ctx);
int word_parity(const Polynomial& p, const AlgebraContext& ctx, int shift = 0);
std::pair<Polynomial, Polynomial> split_parity(const Polynomial& p, const AlgebraContext& ctx);

} // namespace odlab
