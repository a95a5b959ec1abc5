#ifndef GAD_STEINBERG_HPP
#define GAD_STEINBERG_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gad/errors.hpp"
#include "gad/groupoid.hpp"
#include "gad/linalg.hpp"
#include "gad/ring.hpp"

namespace gad {

// An element of the Steinberg algebra A_R(G) of a finite discrete groupoid:
// a finitely supported R-valued function on arrows under convolution.
// Zero coefficients are never stored.
class AlgebraElement {
public:
    AlgebraElement(GroupoidPtr groupoid, RingSpec ring)
        : groupoid_(std::move(groupoid)), ring_(std::move(ring)) {}

    static AlgebraElement zero(GroupoidPtr g, RingSpec r) {
        return AlgebraElement(std::move(g), std::move(r));
    }

    static AlgebraElement indicator(GroupoidPtr g, RingSpec r, const ArrowSet& set) {
        AlgebraElement f(std::move(g), r);
        for (std::size_t a : set.members()) f.coeffs_.emplace(a, RingElem::one(r));
        return f;
    }

    static AlgebraElement indicator_arrow(GroupoidPtr g, RingSpec r, std::size_t arrow) {
        AlgebraElement f(std::move(g), r);
        f.coeffs_.emplace(arrow, RingElem::one(r));
        return f;
    }

    static AlgebraElement from_vector(GroupoidPtr g, const Vec& v) {
        if (v.empty()) throw Error("from_vector needs at least one coordinate");
        AlgebraElement f(std::move(g), v.front().spec());
        for (std::size_t a = 0; a < v.size(); ++a)
            if (!v[a].is_zero()) f.coeffs_.emplace(a, v[a]);
        return f;
    }

    const GroupoidPtr& groupoid() const { return groupoid_; }
    const RingSpec& ring() const { return ring_; }
    const std::map<std::size_t, RingElem>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    RingElem at(std::size_t arrow) const {
        auto it = coeffs_.find(arrow);
        return it == coeffs_.end() ? RingElem::zero(ring_) : it->second;
    }

    ArrowSet support() const {
        std::set<std::size_t> m;
        for (const auto& [a, _] : coeffs_) m.insert(a);
        return ArrowSet(groupoid_, std::move(m));
    }

    Vec to_vector() const {
        Vec v = zero_vec(ring_, groupoid_->num_arrows());
        for (const auto& [a, c] : coeffs_) v[a] = c;
        return v;
    }

    void set(std::size_t arrow, const RingElem& c) {
        if (c.is_zero())
            coeffs_.erase(arrow);
        else
            coeffs_.insert_or_assign(arrow, c);
    }

    AlgebraElement operator+(const AlgebraElement& o) const {
        require_same(o);
        AlgebraElement r = *this;
        for (const auto& [a, c] : o.coeffs_) r.set(a, r.at(a) + c);
        return r;
    }

    AlgebraElement operator-() const {
        AlgebraElement r = *this;
        for (auto& [a, c] : r.coeffs_) c = -c;
        return r;
    }

    AlgebraElement operator-(const AlgebraElement& o) const { return *this + (-o); }

    AlgebraElement scale(const RingElem& c) const {
        AlgebraElement r(groupoid_, ring_);
        for (const auto& [a, v] : coeffs_) r.set(a, c * v);
        return r;
    }

    friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
        return a.groupoid_ == b.groupoid_ && a.ring_ == b.ring_ && a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const AlgebraElement& a, const AlgebraElement& b) { return !(a == b); }

    void require_same(const AlgebraElement& o) const {
        if (groupoid_ != o.groupoid_ || ring_ != o.ring_)
            throw MixedAlgebras("elements of different Steinberg algebras");
    }

private:
    GroupoidPtr groupoid_;
    RingSpec ring_;
    std::map<std::size_t, RingElem> coeffs_;
};

// (fg)(gamma) = sum over factorizations gamma = gamma1 gamma2 of
// f(gamma1) g(gamma2).
inline AlgebraElement convolve(const AlgebraElement& f, const AlgebraElement& g) {
    f.require_same(g);
    const auto& gpd = *f.groupoid();
    AlgebraElement out(f.groupoid(), f.ring());
    for (const auto& [a, ca] : f.coeffs())
        for (const auto& [b, cb] : g.coeffs())
            if (gpd.composable(a, b)) {
                std::size_t c = gpd.compose(a, b);
                out.set(c, out.at(c) + ca * cb);
            }
    return out;
}

// 1_C with C the union of sources and ranges of all support arrows; acts as
// a two-sided unit on every element of the list.
inline AlgebraElement local_unit_for(const std::vector<AlgebraElement>& fs) {
    if (fs.empty()) throw Error("local_unit_for: empty list");
    const auto& g = fs.front().groupoid();
    std::set<std::size_t> units;
    for (const auto& f : fs) {
        fs.front().require_same(f);
        for (const auto& [a, _] : f.coeffs()) {
            units.insert(g->source(a));
            units.insert(g->range(a));
        }
    }
    return AlgebraElement::indicator(g, fs.front().ring(), ArrowSet::of_units(g, units));
}

// ---------------------------------------------------------------------------
// ideal machinery (fields only)

// A two-sided ideal as a canonical reduced basis.  Closure under left and
// right multiplication by every arrow indicator is checked on construction.
class IdealBasis {
public:
    IdealBasis(GroupoidPtr groupoid, RingSpec ring, Subspace space, bool check = true)
        : groupoid_(std::move(groupoid)), ring_(std::move(ring)), space_(std::move(space)) {
        if (!ring_.is_field()) throw FieldRequired("ideal bases require a field");
        if (check && !is_ideal_subspace(groupoid_, space_))
            throw Error("span is not closed under ambient multiplication");
    }

    static bool is_ideal_subspace(const GroupoidPtr& g, const Subspace& s) {
        for (const auto& row : s.basis()) {
            AlgebraElement f = AlgebraElement::from_vector(g, row);
            for (std::size_t a = 0; a < g->num_arrows(); ++a) {
                AlgebraElement ind = AlgebraElement::indicator_arrow(g, f.ring(), a);
                if (!s.contains(convolve(ind, f).to_vector())) return false;
                if (!s.contains(convolve(f, ind).to_vector())) return false;
            }
        }
        return true;
    }

    const GroupoidPtr& groupoid() const { return groupoid_; }
    const RingSpec& ring() const { return ring_; }
    const Subspace& space() const { return space_; }
    std::size_t dim() const { return space_.dim(); }

    std::vector<AlgebraElement> basis_elements() const {
        std::vector<AlgebraElement> out;
        for (const auto& row : space_.basis())
            out.push_back(AlgebraElement::from_vector(groupoid_, row));
        return out;
    }

    friend bool operator==(const IdealBasis& a, const IdealBasis& b) {
        return a.space_ == b.space_;
    }
    friend bool operator<(const IdealBasis& a, const IdealBasis& b) { return a.space_ < b.space_; }

private:
    GroupoidPtr groupoid_;
    RingSpec ring_;
    Subspace space_;
};

// Two-sided ideal generated by a set of vectors.
inline Subspace ideal_closure(const GroupoidPtr& g, const RingSpec& ring, std::size_t dim,
                              const Mat& gens) {
    Subspace s(ring, dim);
    std::vector<Vec> work;
    for (const auto& v : gens)
        if (s.insert(v)) work.push_back(v);
    while (!work.empty()) {
        Vec v = std::move(work.back());
        work.pop_back();
        AlgebraElement f = AlgebraElement::from_vector(g, v);
        for (std::size_t a = 0; a < g->num_arrows(); ++a) {
            AlgebraElement ind = AlgebraElement::indicator_arrow(g, ring, a);
            for (const AlgebraElement& p : {convolve(ind, f), convolve(f, ind)}) {
                Vec w = p.to_vector();
                if (s.insert(w)) work.push_back(std::move(w));
            }
        }
    }
    return s;
}

struct EnumerationBudget {
    unsigned long long max_vectors = 1ULL << 20;
};

// All two-sided ideals of A_GF(p)(G): scan every vector, close each to a
// principal ideal, then close the collection under join.  Deterministic order
// by (dimension, canonical basis).
inline std::vector<IdealBasis> enumerate_ideals(const GroupoidPtr& g, const RingSpec& ring,
                                                EnumerationBudget budget = {}) {
    if (!ring.is_field() || !ring.is_modular())
        throw FieldRequired("enumerate_ideals requires GF(p)");
    const std::size_t n = g->num_arrows();
    const unsigned long p = ring.modulus().get_ui();
    unsigned long long count = 1;
    for (std::size_t i = 0; i < n; ++i) {
        count *= p;
        if (count > budget.max_vectors)
            throw BudgetExceeded("enumerate_ideals: p^dim exceeds budget", count);
    }

    std::set<Subspace> ideals;
    ideals.insert(Subspace(ring, n));  // zero ideal
    std::vector<unsigned long> digits(n, 0);
    for (unsigned long long it = 1; it < count; ++it) {
        // next vector in base-p odometer order
        for (std::size_t i = 0; i < n; ++i) {
            if (++digits[i] < p) break;
            digits[i] = 0;
        }
        Vec v = zero_vec(ring, n);
        for (std::size_t i = 0; i < n; ++i)
            if (digits[i]) v[i] = RingElem(ring, static_cast<long>(digits[i]));
        ideals.insert(ideal_closure(g, ring, n, {v}));
    }

    // close under join; sums of ideals are ideals
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Subspace> cur(ideals.begin(), ideals.end());
        for (std::size_t i = 0; i < cur.size(); ++i)
            for (std::size_t j = i + 1; j < cur.size(); ++j)
                if (ideals.insert(cur[i].sum(cur[j])).second) grew = true;
    }

    std::vector<IdealBasis> out;
    for (const auto& s : ideals) out.emplace_back(g, ring, s, /*check=*/false);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// invariance criterion (Steinberg-algebra side)

struct InvarianceResult {
    bool lhs_eq_rhs;           // A.A(U) == A(U).A
    bool matches_is_invariant; // agrees with the arrow-level definition
    bool spans_equal_restriction;  // when invariant: both equal A(G|_U)
};

inline Subspace module_product_span(const GroupoidPtr& g, const RingSpec& ring,
                                    const std::vector<AlgebraElement>& xs,
                                    const std::vector<AlgebraElement>& ys) {
    Subspace s(ring, g->num_arrows());
    for (const auto& x : xs)
        for (const auto& y : ys) s.insert(convolve(x, y).to_vector());
    return s;
}

inline InvarianceResult invariance_criterion(const GroupoidPtr& g, const RingSpec& ring,
                                             const std::set<std::size_t>& units) {
    if (!ring.is_field()) throw FieldRequired("invariance_criterion uses linear algebra");
    std::vector<AlgebraElement> whole, part;
    for (std::size_t a = 0; a < g->num_arrows(); ++a)
        whole.push_back(AlgebraElement::indicator_arrow(g, ring, a));
    for (std::size_t u : units)
        part.push_back(AlgebraElement::indicator_arrow(g, ring, g->unit_arrow(u)));

    Subspace lhs = module_product_span(g, ring, whole, part);
    Subspace rhs = module_product_span(g, ring, part, whole);

    InvarianceResult res{};
    res.lhs_eq_rhs = lhs == rhs;
    bool inv = is_invariant(g, units);
    res.matches_is_invariant = res.lhs_eq_rhs == inv;
    res.spans_equal_restriction = true;
    if (inv) {
        Subspace restr(ring, g->num_arrows());
        for (std::size_t a = 0; a < g->num_arrows(); ++a)
            if (units.count(g->source(a)))
                restr.insert(AlgebraElement::indicator_arrow(g, ring, a).to_vector());
        res.spans_equal_restriction = lhs == restr && rhs == restr;
    }
    return res;
}

// ---------------------------------------------------------------------------
// uniqueness theorem, ideal-theoretic surrogate

struct UniquenessIdealEntry {
    IdealBasis ideal;
    bool meets_isotropy_interior;
    std::optional<AlgebraElement> witness;  // nonzero element supported in Iso(G) interior
};

struct UniquenessReport {
    bool passed;
    std::vector<UniquenessIdealEntry> entries;
};

// Every nonzero ideal of A_GF(p)(G) must meet A(Iso(G) interior) nontrivially.
inline UniquenessReport uniqueness_check(const GroupoidPtr& g, const RingSpec& ring,
                                         EnumerationBudget budget = {}) {
    auto ideals = enumerate_ideals(g, ring, budget);
    ArrowSet iso = interior_of_isotropy(g);

    Subspace iso_space(ring, g->num_arrows());
    for (std::size_t a : iso.members())
        iso_space.insert(AlgebraElement::indicator_arrow(g, ring, a).to_vector());

    UniquenessReport rep{true, {}};
    for (const auto& J : ideals) {
        if (J.dim() == 0) continue;
        Subspace meet = J.space().intersect(iso_space);
        UniquenessIdealEntry e{J, meet.dim() > 0, std::nullopt};
        if (e.meets_isotropy_interior)
            e.witness = AlgebraElement::from_vector(g, meet.basis().front());
        else
            rep.passed = false;
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// isotropy compression (discrete form of the K-window lemma)

struct CompressionResult {
    std::set<std::size_t> window_units;  // K
    AlgebraElement result;               // 1_K f 1_K
};

// Requires some isotropy arrow at u in the support of f.  In the discrete
// model the three-case neighbourhood choice collapses to K = {u}.
inline CompressionResult isotropy_compression(const AlgebraElement& f, std::size_t u) {
    const auto& g = f.groupoid();
    bool found = false;
    for (const auto& [a, _] : f.coeffs())
        if (g->source(a) == u && g->range(a) == u) found = true;
    if (!found)
        throw PreconditionFailed("no isotropy arrow at the unit lies in the support");
    AlgebraElement k = AlgebraElement::indicator(g, f.ring(), ArrowSet::of_units(g, {u}));
    AlgebraElement res = convolve(convolve(k, f), k);
    return {{u}, res};
}

}  // namespace gad

#endif
