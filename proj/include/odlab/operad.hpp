#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "odlab/graded_poly.hpp"
#include "odlab/linalg.hpp"

namespace odlab {

enum class Symm { symmetric, antisymmetric, regular };

struct SigmaGenerator {
    std::string name;
    int arity = 2;
    int degree = 0;
    Symm symmetry = Symm::regular;
};

// 0-based permutation: p[k] = σ(k)
using Perm = std::vector<int>;
Perm identity_perm(int n);
Perm inverse(const Perm& p);
int perm_sign(const Perm& p);
std::vector<Perm> all_perms(int n);

// Tree monomial. Leaves carry 1-based labels; internal vertices a generator index.
struct Tree {
    int gen = -1;
    int leaf = 0;
    std::vector<Tree> children;

    bool is_leaf() const { return gen < 0; }
    static Tree make_leaf(int l)
    {
        Tree t;
        t.leaf = l;
        return t;
    }
};

// Preorder code: generator g -> -(g+1), leaf l -> l.
using TreeCode = std::vector<std::int16_t>;

struct OperadElement {
    int arity = 0;
    SparseVec v;
};

// Common interface of free and quotient operads, in the coordinates of a fixed basis per arity.
class OperadModel {
  public:
    virtual ~OperadModel() = default;

    virtual int max_arity() const = 0;
    virtual std::uint32_t dim(int n) const = 0;
    virtual const std::vector<SigmaGenerator>& generators() const = 0;
    // the generator vectors sitting in arity n (not their Σ-translates)
    virtual std::vector<SparseVec> generator_vectors(int n) const = 0;
    virtual SparseVec compose(int m, const SparseVec& a, int i, int n, const SparseVec& b) const = 0;
    // right action: relabels leaf l as rho[l-1]+1, i.e. act by σ with σ^{-1} = rho
    virtual SparseVec relabel(int n, const SparseVec& a, const Perm& rho) const = 0;
    // split into even and odd internal degree parts
    virtual std::pair<SparseVec, SparseVec> parity_split(int n, const SparseVec& a) const = 0;
    virtual std::string to_string(int n, const SparseVec& a) const = 0;

    SparseVec act(int n, const SparseVec& a, const Perm& sigma) const { return relabel(n, a, inverse(sigma)); }
    // cached linear map of the action of σ on the whole component
    const LinearMap& action_map(int n, const Perm& sigma) const;
    Subspace act(int n, const Subspace& s, const Perm& sigma) const;
    Subspace sigma_closure(int n, const Subspace& s) const;

    bool simply_connected() const;
    int min_generator_arity() const;

    SparseVec commutator(int m, const SparseVec& a, int i, int n, const SparseVec& b, int j) const;

  private:
    mutable std::mutex cache_mu_;
    mutable std::map<std::pair<int, Perm>, std::shared_ptr<const LinearMap>> action_cache_;
};

class FreeOperad : public OperadModel {
  public:
    // Components are enumerated up to max_arity. Unary generators make components infinite,
    // so trees are then cut at max_weight internal vertices.
    FreeOperad(std::vector<SigmaGenerator> gens, int max_arity = 5, int max_weight = -1);

    int max_arity() const override { return max_arity_; }
    std::uint32_t dim(int n) const override;
    const std::vector<SigmaGenerator>& generators() const override { return gens_; }
    std::vector<SparseVec> generator_vectors(int n) const override;
    SparseVec compose(int m, const SparseVec& a, int i, int n, const SparseVec& b) const override;
    SparseVec relabel(int n, const SparseVec& a, const Perm& rho) const override;
    std::pair<SparseVec, SparseVec> parity_split(int n, const SparseVec& a) const override;
    std::string to_string(int n, const SparseVec& a) const override;

    std::optional<std::size_t> generator_index(const std::string& name) const;
    const std::vector<TreeCode>& basis(int n) const;
    int basis_degree(int n, std::uint32_t idx) const;

    Tree decode(const TreeCode& c) const;
    TreeCode encode(const Tree& t) const;
    // normal form of a tree; sign 0 when the tree vanishes
    std::pair<int, Tree> normalize(const Tree& t) const;
    int tree_degree(const Tree& t) const;
    int tree_arity(const Tree& t) const;
    // coordinate vector of a (not necessarily normal) tree
    SparseVec vector_of(const Tree& t) const;
    std::string tree_to_string(const Tree& t) const;
    Tree parse_tree(const std::string& s) const;
    // "2*b(b(1,2),3) - b(1,b(2,3))"
    OperadElement parse_element(const std::string& s) const;
    // the generator with leaves 1..k in order
    Tree generator_tree(std::size_t g) const;

  private:
    struct Component {
        std::vector<TreeCode> basis;
        std::map<TreeCode, std::uint32_t> index;
        std::vector<int> degree;
    };
    void enumerate(int n);
    const Component& comp(int n) const;

    std::vector<SigmaGenerator> gens_;
    int max_arity_;
    int max_weight_;
    std::vector<Component> comps_;
};

struct OperadPresentation {
    std::vector<SigmaGenerator> generators;
    std::vector<OperadElement> relations;
    int max_arity = 5;
};

// Relation macros on a named generator of a free operad.
OperadElement jacobiator(const FreeOperad& F, std::size_t gen);
OperadElement associator(const FreeOperad& F, std::size_t gen);
OperadElement fundamental_identity(const FreeOperad& F, std::size_t gen);
OperadElement lie_admissible(const FreeOperad& F, std::size_t gen);
// expand "jacobiator(b)" etc.; nullopt when the text is not a macro call
std::optional<OperadElement> expand_macro(const FreeOperad& F, const std::string& text);

SparseVec compose_elem(const OperadModel& P, const OperadElement& a, int i, const OperadElement& b,
                       OperadElement* out = nullptr);
OperadElement compose(const OperadModel& P, const OperadElement& a, int i, const OperadElement& b);
OperadElement act(const OperadModel& P, const Perm& sigma, const OperadElement& a);
OperadElement op_commutator(const OperadModel& P, const OperadElement& a, const OperadElement& b, int i, int j);

// arity-n piece of the operadic ideal generated by the relations
Subspace ideal_component(const FreeOperad& F, const std::vector<OperadElement>& relations, int n);

class QuotientOperad : public OperadModel {
  public:
    QuotientOperad(std::shared_ptr<const FreeOperad> free, std::vector<OperadElement> relations);

    int max_arity() const override { return free_->max_arity(); }
    std::uint32_t dim(int n) const override;
    const std::vector<SigmaGenerator>& generators() const override { return free_->generators(); }
    std::vector<SparseVec> generator_vectors(int n) const override;
    SparseVec compose(int m, const SparseVec& a, int i, int n, const SparseVec& b) const override;
    SparseVec relabel(int n, const SparseVec& a, const Perm& rho) const override;
    std::pair<SparseVec, SparseVec> parity_split(int n, const SparseVec& a) const override;
    std::string to_string(int n, const SparseVec& a) const override;

    const FreeOperad& free() const { return *free_; }
    const QuotientMap& projection(int n) const { return maps_.at(n); }
    const Subspace& ideal(int n) const { return maps_.at(n).kernel; }
    const std::vector<OperadElement>& relations() const { return relations_; }

  private:
    std::shared_ptr<const FreeOperad> free_;
    std::vector<OperadElement> relations_;
    std::map<int, QuotientMap> maps_;
};

// JSON: {"generators":[{"name":"b","arity":2,"degree":0,"symmetry":"antisymmetric"}],
//        "relations":["jacobiator(b)", {"arity":3,"terms":[{"coeff":"1","tree":"b(b(1,2),3)"}]}],
//        "max_arity":5}
OperadPresentation presentation_from_json(const nlohmann::json& j, std::shared_ptr<const FreeOperad>* free_out = nullptr);
SigmaGenerator generator_from_json(const nlohmann::json& j);
std::string to_string(Symm s);

} // namespace odlab
