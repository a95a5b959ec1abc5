#ifndef GAD_SYMBOLIC_HPP
#define GAD_SYMBOLIC_HPP

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gad/errors.hpp"
#include "gad/ring.hpp"
#include "gad/selfsimilar.hpp"

namespace gad {

struct NormalizeBudget {
    std::size_t max_depth = 6;
    AutomatonLimits automaton;
};

// An element of the self-similar graph algebra: an R-linear combination of
// basic bisections (alpha, g, beta) with full source cylinders.  Terms are
// kept in a form where any two are either germ-equal (then merged) or
// germ-disjoint, which makes the zero test exact; reaching that form may
// require refining overlapping cylinders, bounded by the normalize budget.
class SymbolicElement {
public:
    SymbolicElement(SystemPtr sys, RingSpec ring,
                    ProductConvention conv = ProductConvention::AsPrinted,
                    NormalizeBudget budget = {})
        : sys_(std::move(sys)), ring_(std::move(ring)), conv_(conv), budget_(budget) {}

    static SymbolicElement zero(SystemPtr sys, RingSpec ring,
                                ProductConvention conv = ProductConvention::AsPrinted,
                                NormalizeBudget budget = {}) {
        return SymbolicElement(std::move(sys), std::move(ring), conv, budget);
    }

    static SymbolicElement term(SystemPtr sys, RingSpec ring, const RingElem& c,
                                const SgeTriple& t,
                                ProductConvention conv = ProductConvention::AsPrinted,
                                NormalizeBudget budget = {}) {
        SymbolicElement e(std::move(sys), std::move(ring), conv, budget);
        if (!c.is_zero()) e.terms_.push_back({c, t});
        e.normalize();
        return e;
    }

    // vertex idempotent p_v
    static SymbolicElement vertex_proj(const SystemPtr& sys, const RingSpec& ring,
                                       std::size_t v,
                                       ProductConvention conv = ProductConvention::AsPrinted) {
        Path p = Path::vertex(sys->graph(), v);
        return term(sys, ring, RingElem::one(ring), SgeTriple(sys, p, sys->identity(), p),
                    conv);
    }

    // edge generator s_a
    static SymbolicElement edge_gen(const SystemPtr& sys, const RingSpec& ring, std::size_t a,
                                    ProductConvention conv = ProductConvention::AsPrinted) {
        Path e = Path::edges(sys->graph(), {a});
        Path src = Path::vertex(sys->graph(), sys->graph()->source(a));
        return term(sys, ring, RingElem::one(ring), SgeTriple(sys, e, sys->identity(), src),
                    conv);
    }

    // unitary-style generator u_g = sum over vertices of (g.v, g, v)
    static SymbolicElement group_gen(const SystemPtr& sys, const RingSpec& ring,
                                     const GroupElem& g,
                                     ProductConvention conv = ProductConvention::AsPrinted) {
        SymbolicElement out(sys, ring, conv);
        for (std::size_t v = 0; v < sys->graph()->num_vertices(); ++v) {
            Path pv = Path::vertex(sys->graph(), v);
            Path gv = Path::vertex(sys->graph(), sys->act_vertex(g, v));
            out.terms_.push_back({RingElem::one(ring), SgeTriple(sys, gv, g, pv)});
        }
        out.normalize();
        return out;
    }

    const SystemPtr& system() const { return sys_; }
    const RingSpec& ring() const { return ring_; }
    ProductConvention convention() const { return conv_; }
    const std::vector<std::pair<RingElem, SgeTriple>>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    SymbolicElement operator+(const SymbolicElement& o) const {
        require_same(o);
        SymbolicElement r = *this;
        r.terms_.insert(r.terms_.end(), o.terms_.begin(), o.terms_.end());
        r.normalize();
        return r;
    }

    SymbolicElement operator-() const {
        SymbolicElement r = *this;
        for (auto& [c, t] : r.terms_) c = -c;
        return r;
    }

    SymbolicElement operator-(const SymbolicElement& o) const { return *this + (-o); }

    SymbolicElement scale(const RingElem& c) const {
        SymbolicElement r(sys_, ring_, conv_, budget_);
        if (c.is_zero()) return r;
        for (const auto& [k, t] : terms_) r.terms_.push_back({c * k, t});
        return r;
    }

    SymbolicElement adjoint() const {
        SymbolicElement r(sys_, ring_, conv_, budget_);
        for (const auto& [c, t] : terms_) r.terms_.push_back({c, *sge_star(sys_, t)});
        r.normalize();
        return r;
    }

    friend SymbolicElement operator*(const SymbolicElement& x, const SymbolicElement& y) {
        x.require_same(y);
        SymbolicElement r(x.sys_, x.ring_, x.conv_, x.budget_);
        for (const auto& [cx, tx] : x.terms_)
            for (const auto& [cy, ty] : y.terms_) {
                SgeElement p = sge_multiply(x.sys_, tx, ty, x.conv_);
                if (p) r.terms_.push_back({cx * cy, *p});
            }
        r.normalize();
        return r;
    }

    // equality of algebra elements, decided by a zero test on the difference
    friend bool operator==(const SymbolicElement& x, const SymbolicElement& y) {
        return (x - y).is_zero();
    }
    friend bool operator!=(const SymbolicElement& x, const SymbolicElement& y) {
        return !(x == y);
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [c, t] : terms_) {
            if (!s.empty()) s += " + ";
            s += c.str() + "*" + t.str();
        }
        return s;
    }

private:
    void require_same(const SymbolicElement& o) const {
        if (sys_ != o.sys_ || ring_ != o.ring_)
            throw MixedAlgebras("elements of different self-similar graph algebras");
    }

    // Refine all terms to a uniform source-cylinder depth, merge germ-equal
    // terms, and retry deeper while partially overlapping terms remain.
    void normalize() {
        if (terms_.empty()) return;
        std::size_t base = 0;
        for (const auto& [c, t] : terms_) base = std::max(base, t.beta.length());
        for (std::size_t extra = 0; extra <= budget_.max_depth; ++extra) {
            std::vector<std::pair<RingElem, SgeTriple>> flat;
            for (const auto& [c, t] : terms_)
                for (const auto& s : refine(sys_, t, base + extra - t.beta.length()))
                    flat.push_back({c, s});
            bool partial = false;
            auto merged = merge_uniform(flat, &partial);
            if (!partial) {
                terms_ = std::move(merged);
                return;
            }
        }
        throw UndecidableWithBudget(
            "normalization could not separate overlapping terms within depth " +
            std::to_string(budget_.max_depth));
    }

    // terms all have equal source-cylinder depth here
    std::vector<std::pair<RingElem, SgeTriple>> merge_uniform(
        const std::vector<std::pair<RingElem, SgeTriple>>& flat, bool* partial) const {
        std::vector<std::pair<RingElem, SgeTriple>> out;
        std::map<std::pair<Path, Path>, std::vector<std::size_t>> buckets;
        for (std::size_t i = 0; i < flat.size(); ++i)
            buckets[{flat[i].second.beta, flat[i].second.alpha}].push_back(i);
        for (const auto& [key, idxs] : buckets) {
            // classes of germ-equal terms within a bucket
            std::vector<std::pair<RingElem, SgeTriple>> reps;
            for (std::size_t i : idxs) {
                const auto& [c, t] = flat[i];
                bool placed = false;
                for (auto& [rc, rt] : reps) {
                    GermRelation rel = compare_on_cylinder(sys_, rt.g, t.g, t.beta.d(),
                                                           budget_.automaton);
                    if (rel == GermRelation::Equal) {
                        rc = rc + c;
                        placed = true;
                        break;
                    }
                    if (rel == GermRelation::Partial) *partial = true;
                }
                if (!placed) reps.push_back({c, t});
            }
            for (const auto& [c, t] : reps)
                if (!c.is_zero()) out.push_back({c, t});
        }
        std::sort(out.begin(), out.end(),
                  [](const auto& a, const auto& b) { return a.second < b.second; });
        return out;
    }

    SystemPtr sys_;
    RingSpec ring_;
    ProductConvention conv_;
    NormalizeBudget budget_;
    std::vector<std::pair<RingElem, SgeTriple>> terms_;
};

}  // namespace gad

#endif
