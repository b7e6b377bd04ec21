#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "gpbg/forest.hpp"

namespace gpbg {

enum class Op : std::uint8_t {
    Phi,    // the one-particle state
    Cubic,  // the marked |phi|^2 phi produced by the zero-propagator contraction
    Conj,
    Prop,   // U_{from,to} = e^{i(t_from - t_to) Laplacian}
    Prod,   // pointwise product of exactly three factors
};

// Immutable expression node. Nodes are interned in an ExprPool, so equal
// subexpressions share one node and pointer equality is structural equality.
struct Expr {
    Op op = Op::Phi;
    int from = 0, to = 0;  // Prop only; global time indices in 0..n
    const Expr* a = nullptr;
    const Expr* b = nullptr;
    const Expr* c = nullptr;

    // Derived, filled at interning time.
    bool has_cubic = false;
    int phi_atoms = 0;   // Phi leaves (the Cubic marker counts as zero)
    int prod_nodes = 0;
    std::uint64_t hash = 0;
};

// Hash-consing arena. Construction functions normalize eagerly:
//   prop(t,t,e) = e, prop(a,b,prop(b,c,e)) = prop(a,c,e), conj(conj(e)) = e.
// Not thread safe for inserts; share a built DAG across threads read-only.
class ExprPool {
public:
    const Expr* phi();
    const Expr* cubic();
    const Expr* conj(const Expr* e);
    const Expr* prop(int from, int to, const Expr* e);
    const Expr* prod(const Expr* a, const Expr* b, const Expr* c);

    std::size_t size() const { return nodes_.size(); }

private:
    const Expr* intern(Expr&& node);

    std::deque<Expr> nodes_;
    std::unordered_map<std::uint64_t, std::vector<const Expr*>> buckets_;
};

// One term of a kernel in normal form: sign * psi(x) * conj(chi)(x').
struct KernelTerm {
    int sign = 1;
    int minus_count = 0;  // number of diagonal-at-x' branches in its history
    const Expr* psi = nullptr;
    const Expr* chi = nullptr;
};

// Theta_alpha: a signed sum of factorized terms assigned to internal
// vertex alpha. Exactly 2^(subtree internal count) terms; at most one
// factor of any term is distinguished (contains the Cubic marker).
struct KernelExpr {
    int alpha = 1;
    int m_j = 0;
    bool distinguished = false;
    std::vector<KernelTerm> terms;
};

// Theta_alpha for every internal vertex alpha = 1..m_j of one factor.
struct KernelTower {
    std::vector<KernelExpr> theta;  // theta[alpha-1]

    const KernelExpr& top() const { return theta.front(); }
};

// Recursively contracts tree j of the factor map into its kernel tower,
// from the innermost vertex outwards. Requires m_j >= 1 (TermCapExceeded
// beyond the symbolic depth cap m_j <= 12).
KernelTower build_kernel_tower(const FactorMap& fm, ExprPool& pool);

// Theta_1 of the factor, validated against the forest it came from.
KernelExpr build_kernel(const FactorMap& fm, const TreeForest& forest, ExprPool& pool);

// The kernel of a bare factor (no contractions): the single term phi(x)conj(phi)(x').
KernelExpr leaf_kernel(ExprPool& pool);

// The flattened (sign, psi, chi) sequence; signs follow the plus/minus
// split of each contraction, total sign (-1)^(minus branches).
std::vector<KernelTerm> expand_term_signs(const KernelExpr& k);

std::string pretty(const Expr* e);
std::string pretty(const KernelExpr& k);
ojson to_json(const Expr* e);
ojson to_json(const KernelExpr& k);

}  // namespace gpbg
