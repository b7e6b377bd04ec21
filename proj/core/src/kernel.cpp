#include "gpbg/kernel.hpp"

#include <sstream>

namespace gpbg {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

std::uint64_t node_hash(const Expr& e) {
    std::uint64_t h = static_cast<std::uint64_t>(e.op) * 0x2545f4914f6cdd1dull;
    h = mix(h, static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.from)));
    h = mix(h, static_cast<std::uint64_t>(static_cast<std::uint32_t>(e.to)));
    h = mix(h, reinterpret_cast<std::uintptr_t>(e.a));
    h = mix(h, reinterpret_cast<std::uintptr_t>(e.b));
    h = mix(h, reinterpret_cast<std::uintptr_t>(e.c));
    return h;
}

bool node_equal(const Expr& x, const Expr& y) {
    return x.op == y.op && x.from == y.from && x.to == y.to && x.a == y.a && x.b == y.b &&
           x.c == y.c;
}

}  // namespace

const Expr* ExprPool::intern(Expr&& node) {
    node.hash = node_hash(node);
    auto& bucket = buckets_[node.hash];
    for (const Expr* e : bucket) {
        if (node_equal(*e, node)) return e;
    }
    nodes_.push_back(node);
    const Expr* e = &nodes_.back();
    bucket.push_back(e);
    return e;
}

const Expr* ExprPool::phi() {
    Expr e;
    e.op = Op::Phi;
    e.phi_atoms = 1;
    return intern(std::move(e));
}

const Expr* ExprPool::cubic() {
    Expr e;
    e.op = Op::Cubic;
    e.has_cubic = true;
    return intern(std::move(e));
}

const Expr* ExprPool::conj(const Expr* x) {
    if (x->op == Op::Conj) return x->a;
    Expr e;
    e.op = Op::Conj;
    e.a = x;
    e.has_cubic = x->has_cubic;
    e.phi_atoms = x->phi_atoms;
    e.prod_nodes = x->prod_nodes;
    return intern(std::move(e));
}

const Expr* ExprPool::prop(int from, int to, const Expr* x) {
    if (from == to) return x;
    if (x->op == Op::Prop && x->from == to) {
        // Group property of the free evolution: U_{a,b} U_{b,c} = U_{a,c}.
        return prop(from, x->to, x->a);
    }
    Expr e;
    e.op = Op::Prop;
    e.from = from;
    e.to = to;
    e.a = x;
    e.has_cubic = x->has_cubic;
    e.phi_atoms = x->phi_atoms;
    e.prod_nodes = x->prod_nodes;
    return intern(std::move(e));
}

const Expr* ExprPool::prod(const Expr* a, const Expr* b, const Expr* c) {
    const int cubics = (a->has_cubic ? 1 : 0) + (b->has_cubic ? 1 : 0) + (c->has_cubic ? 1 : 0);
    if (cubics > 1) throw Error("ExprPool::prod: more than one distinguished factor in a product");
    Expr e;
    e.op = Op::Prod;
    e.a = a;
    e.b = b;
    e.c = c;
    e.has_cubic = cubics == 1;
    e.phi_atoms = a->phi_atoms + b->phi_atoms + c->phi_atoms;
    e.prod_nodes = 1 + a->prod_nodes + b->prod_nodes + c->prod_nodes;
    return intern(std::move(e));
}

namespace {

struct LocalChild {
    bool leaf = false;
    int index = 0;  // internal alpha or local leaf index
};

// Children of local internal vertex alpha under the one-particle map s
// (k = 1): the continuing side tracks particle s(1+alpha), the created
// side tracks particle 1+alpha; each points at the next internal vertex
// touching that particle, or at the particle's leaf.
LocalChild continuing_child(const CollisionMap& s, int alpha) {
    const int particle = s.at(alpha);
    for (int a2 = alpha + 1; a2 <= s.n; ++a2) {
        if (s.at(a2) == particle) return LocalChild{false, a2};
    }
    return LocalChild{true, particle};
}

LocalChild created_child(const CollisionMap& s, int alpha) {
    const int particle = 1 + alpha;
    for (int a2 = alpha + 1; a2 <= s.n; ++a2) {
        if (s.at(a2) == particle) return LocalChild{false, a2};
    }
    return LocalChild{true, particle};
}

}  // namespace

KernelTower build_kernel_tower(const FactorMap& fm, ExprPool& pool) {
    const CollisionMap& s = fm.sigma_j;
    const int m = s.n;
    if (m < 1) throw Error("build_kernel_tower: factor has no internal vertices");
    if (m > 12) {
        throw TermCapExceeded("build_kernel_tower: m_j = " + std::to_string(m) +
                              " exceeds the symbolic depth cap of 12");
    }
    if (!s.valid() || s.k != 1 || static_cast<int>(fm.time_slots.size()) != m) {
        throw Error("build_kernel_tower: inconsistent factor map");
    }

    const auto time_of = [&](const LocalChild& c) {
        return c.leaf ? fm.n_global : fm.time_slots[static_cast<std::size_t>(c.index) - 1];
    };
    const std::vector<KernelTerm> leaf_terms{KernelTerm{1, 0, pool.phi(), pool.phi()}};

    KernelTower tower;
    tower.theta.resize(static_cast<std::size_t>(m));
    for (int alpha = m; alpha >= 1; --alpha) {
        const int t_here = fm.time_slots[static_cast<std::size_t>(alpha) - 1];
        const LocalChild c1 = continuing_child(s, alpha);
        const LocalChild c2 = created_child(s, alpha);

        KernelExpr theta;
        theta.alpha = alpha;
        theta.m_j = m;

        if (c1.leaf && c2.leaf && t_here == fm.n_global) {
            // Zero-propagator contraction of two state copies; its cubic
            // side is the marked |phi|^2 phi.
            theta.terms = {KernelTerm{1, 0, pool.cubic(), pool.phi()},
                           KernelTerm{-1, 1, pool.phi(), pool.cubic()}};
        } else {
            const auto& terms1 =
                c1.leaf ? leaf_terms : tower.theta[static_cast<std::size_t>(c1.index) - 1].terms;
            const auto& terms2 =
                c2.leaf ? leaf_terms : tower.theta[static_cast<std::size_t>(c2.index) - 1].terms;
            const int t1 = time_of(c1), t2 = time_of(c2);
            theta.terms.reserve(2 * terms1.size() * terms2.size());
            for (const auto& ta : terms1) {
                for (const auto& tb : terms2) {
                    const Expr* pa = pool.prop(t_here, t1, ta.psi);
                    const Expr* ca = pool.prop(t_here, t1, ta.chi);
                    const Expr* pb = pool.prop(t_here, t2, tb.psi);
                    const Expr* cb = pool.prop(t_here, t2, tb.chi);
                    // Diagonal at x: the created side multiplies the psi slot.
                    theta.terms.push_back(KernelTerm{ta.sign * tb.sign,
                                                     ta.minus_count + tb.minus_count,
                                                     pool.prod(pa, pb, pool.conj(cb)), ca});
                    // Diagonal at x': it multiplies the chi slot, negated.
                    theta.terms.push_back(KernelTerm{-ta.sign * tb.sign,
                                                     ta.minus_count + tb.minus_count + 1, pa,
                                                     pool.prod(ca, pool.conj(pb), cb)});
                }
            }
        }
        for (const auto& t : theta.terms) {
            if (t.psi->has_cubic && t.chi->has_cubic) {
                throw Error("build_kernel_tower: two distinguished factors in one term");
            }
            theta.distinguished = theta.distinguished || t.psi->has_cubic || t.chi->has_cubic;
        }
        tower.theta[static_cast<std::size_t>(alpha) - 1] = std::move(theta);
    }
    return tower;
}

KernelExpr build_kernel(const FactorMap& fm, const TreeForest& forest, ExprPool& pool) {
    const Tree& tree = forest.tree(fm.j);
    if (tree.m() != fm.sigma_j.n || tree.internals != fm.time_slots ||
        fm.n_global != forest.n) {
        throw Error("build_kernel: factor map does not match the forest");
    }
    KernelTower tower = build_kernel_tower(fm, pool);
    if (tower.top().distinguished != fm.distinguished) {
        throw Error("build_kernel: distinguished flag mismatch");
    }
    return tower.top();
}

KernelExpr leaf_kernel(ExprPool& pool) {
    KernelExpr k;
    k.alpha = 1;
    k.m_j = 0;
    k.terms = {KernelTerm{1, 0, pool.phi(), pool.phi()}};
    return k;
}

std::vector<KernelTerm> expand_term_signs(const KernelExpr& k) {
    for (const auto& t : k.terms) {
        if (t.sign != ((t.minus_count % 2 == 0) ? 1 : -1)) {
            throw Error("expand_term_signs: sign does not match its branch history");
        }
    }
    return k.terms;
}

std::string pretty(const Expr* e) {
    switch (e->op) {
        case Op::Phi:
            return "phi";
        case Op::Cubic:
            return "|phi|^2 phi";
        case Op::Conj:
            return "conj(" + pretty(e->a) + ")";
        case Op::Prop: {
            std::string u = "U_{" + std::to_string(e->from) + "," + std::to_string(e->to) + "}";
            if (e->a->op == Op::Phi) return u + "phi";
            return u + "(" + pretty(e->a) + ")";
        }
        case Op::Prod:
            return pretty(e->a) + " " + pretty(e->b) + " " + pretty(e->c);
    }
    return "?";
}

std::string pretty(const KernelExpr& k) {
    std::ostringstream os;
    os << "Theta_" << k.alpha << "(x,x') =\n";
    for (const auto& t : k.terms) {
        os << "  " << (t.sign > 0 ? "+" : "-") << " [" << pretty(t.psi) << "](x) conj["
           << pretty(t.chi) << "](x')\n";
    }
    return os.str();
}

ojson to_json(const Expr* e) {
    switch (e->op) {
        case Op::Phi:
            return ojson{{"op", "phi"}};
        case Op::Cubic:
            return ojson{{"op", "cubic"}};
        case Op::Conj:
            return ojson{{"op", "conj"}, {"arg", to_json(e->a)}};
        case Op::Prop:
            return ojson{{"op", "prop"}, {"from", e->from}, {"to", e->to}, {"arg", to_json(e->a)}};
        case Op::Prod:
            return ojson{{"op", "prod"},
                         {"args", ojson::array({to_json(e->a), to_json(e->b), to_json(e->c)})}};
    }
    return ojson{};
}

ojson to_json(const KernelExpr& k) {
    ojson terms = ojson::array();
    for (const auto& t : k.terms) {
        terms.push_back(ojson{{"sign", t.sign}, {"psi", to_json(t.psi)}, {"chi", to_json(t.chi)}});
    }
    return ojson{{"alpha", k.alpha},
                 {"m_j", k.m_j},
                 {"distinguished", k.distinguished},
                 {"terms", terms}};
}

}  // namespace gpbg
