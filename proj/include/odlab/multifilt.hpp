#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "odlab/diffop.hpp"
#include "odlab/linalg.hpp"
#include "odlab/operad.hpp"

namespace odlab {

using MultiIndex = std::vector<int>;

MultiIndex mz_compose(const MultiIndex& p, int i, const MultiIndex& q);
MultiIndex mz_commutator(const MultiIndex& p, const MultiIndex& q, int i, int j);
MultiIndex meet(const MultiIndex& a, const MultiIndex& b);
MultiIndex join(const MultiIndex& a, const MultiIndex& b);
bool leq(const MultiIndex& a, const MultiIndex& b);
// right action (p·σ)_k = p_{σ(k)}
MultiIndex act(const MultiIndex& p, const Perm& sigma);
std::string to_string(const MultiIndex& p);
MultiIndex parse_multiindex(const std::string& s);

// the cube [1..N]^n in lexicographic order
std::vector<MultiIndex> window(int n, int N);

struct ArityTable {
    int n = 0;
    int N = 1;
    std::uint32_t ambient = 0;
    std::map<MultiIndex, Subspace> cells;
};

class Multifiltration {
  public:
    bool floor_zero = true; // zero below (1,..,1)
    bool stable = true;     // each table stabilizes at its N
    std::map<int, ArityTable> tables;

    // clamped lookup: meet with (N,..,N), zero below the floor
    Subspace get(int n, const MultiIndex& p) const;
    const ArityTable& table(int n) const;
    int max_arity() const;
};

bool operator==(const Multifiltration& a, const Multifiltration& b);

enum class BoundMode { sharp, coarse };

// N_n = floor((n-1)/(k_min-1)) (sharp) or n-1 (coarse), at least 1
int stability_bound(int n, int k_min, BoundMode mode);

Multifiltration prestandard(const OperadModel& P, int max_arity = -1, BoundMode mode = BoundMode::sharp,
                            Kernel kernel = Kernel::parallel);
Multifiltration saturate(const Multifiltration& F);
Multifiltration standard(const OperadModel& P, int max_arity = -1, BoundMode mode = BoundMode::sharp,
                         Kernel kernel = Kernel::parallel);

// one presaturation step restricted to the window (pairwise intersections)
Multifiltration presaturate_step(const Multifiltration& F);
// closed formula for stable input, iterated steps to a fixpoint otherwise
Multifiltration presaturate_general(const Multifiltration& F, bool use_closed_formula = true);

Multifiltration pushforward(const Multifiltration& F, const std::function<LinearMap(int)>& phi);
Multifiltration pushforward(const Multifiltration& F, const QuotientOperad& Q);

// cells where Fp' ∩ Fp'' is not inside F(p'∧p'')
std::vector<std::string> saturation_defects(const Multifiltration& F);
// items (i), (ii), (iii), (v) of the multifiltration axioms on the windows up to max_arity
std::vector<std::string> axiom_violations(const OperadModel& P, const Multifiltration& F, int max_arity = -1);

struct RelationVerdict {
    int arity = 0;
    std::string relation;
    bool member = false;
    std::string residual;
};

struct TightnessReport {
    bool tight = true;
    bool simply_connected = true;
    std::vector<RelationVerdict> relations;
};

TightnessReport is_tight(const FreeOperad& F, const std::vector<OperadElement>& relations,
                         Kernel kernel = Kernel::parallel);
nlohmann::json to_json(const TightnessReport& r);

struct Lattice {
    int arity = 0;
    int N = 1;
    std::vector<std::pair<MultiIndex, std::size_t>> dims;
};

// throws when a monotonicity violation is met while collecting
Lattice lattice(const Multifiltration& F, int n);
nlohmann::json to_json(const Lattice& L);
std::string to_csv(const Lattice& L);

} // namespace odlab
