#ifndef GAD_GRADING_HPP
#define GAD_GRADING_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gad/errors.hpp"
#include "gad/group.hpp"
#include "gad/groupoid.hpp"
#include "gad/linalg.hpp"
#include "gad/steinberg.hpp"

namespace gad {

// Degree map c : arrows -> Gamma with c(ab) = c(a)c(b) and c(unit) = e,
// validated exhaustively on construction.
class Cocycle {
public:
    Cocycle(GroupoidPtr groupoid, GroupPtr group, std::vector<GroupElem> values)
        : groupoid_(std::move(groupoid)), group_(std::move(group)), values_(std::move(values)) {
        if (values_.size() != groupoid_->num_arrows())
            throw Error("cocycle must assign a degree to every arrow");
        for (std::size_t u = 0; u < groupoid_->num_units(); ++u)
            if (!values_[groupoid_->unit_arrow(u)].is_identity())
                throw Error("cocycle is not the identity on unit " +
                            groupoid_->unit_names()[u]);
        for (std::size_t a = 0; a < groupoid_->num_arrows(); ++a)
            for (std::size_t b = 0; b < groupoid_->num_arrows(); ++b)
                if (groupoid_->composable(a, b) &&
                    values_[groupoid_->compose(a, b)] != values_[a] * values_[b])
                    throw Error("cocycle not multiplicative at " + groupoid_->arrow_id(a) +
                                " . " + groupoid_->arrow_id(b));
    }

    // Build from named assignments; unmentioned non-unit arrows get the identity.
    static Cocycle from_map(const GroupoidPtr& g, const GroupPtr& grp,
                            const std::map<std::string, GroupElem>& deg) {
        std::vector<GroupElem> vals(g->num_arrows(), GroupElem::identity(grp));
        for (const auto& [id, d] : deg) vals[g->arrow_index(id)] = d;
        return Cocycle(g, grp, std::move(vals));
    }

    static Cocycle trivial(const GroupoidPtr& g) {
        auto grp = Group::trivial();
        return Cocycle(g, grp,
                       std::vector<GroupElem>(g->num_arrows(), GroupElem::identity(grp)));
    }

    const GroupoidPtr& groupoid() const { return groupoid_; }
    const GroupPtr& group() const { return group_; }
    const GroupElem& at(std::size_t arrow) const { return values_[arrow]; }
    GroupElem identity() const { return GroupElem::identity(group_); }

    // Degrees taken by at least one arrow, sorted.
    std::vector<GroupElem> degrees_present() const {
        std::set<GroupElem> s(values_.begin(), values_.end());
        return {s.begin(), s.end()};
    }

    std::set<std::size_t> fiber(const GroupElem& g) const {
        std::set<std::size_t> out;
        for (std::size_t a = 0; a < values_.size(); ++a)
            if (values_[a] == g) out.insert(a);
        return out;
    }

    // Subgroupoid of degree-identity arrows over all units.
    GroupoidPtr kernel_subgroupoid() const {
        GroupoidData d;
        d.units = groupoid_->unit_names();
        std::set<std::size_t> keep = fiber(identity());
        for (std::size_t a : keep)
            if (!groupoid_->is_unit_arrow(a))
                d.arrows.push_back({groupoid_->arrow_id(a),
                                    groupoid_->unit_names()[groupoid_->source(a)],
                                    groupoid_->unit_names()[groupoid_->range(a)]});
        for (std::size_t a : keep)
            for (std::size_t b : keep)
                if (groupoid_->composable(a, b) && !groupoid_->is_unit_arrow(a) &&
                    !groupoid_->is_unit_arrow(b))
                    d.compose[{groupoid_->arrow_id(a), groupoid_->arrow_id(b)}] =
                        groupoid_->arrow_id(groupoid_->compose(a, b));
        return FiniteGroupoid::create(d);
    }

private:
    GroupoidPtr groupoid_;
    GroupPtr group_;
    std::vector<GroupElem> values_;
};

// Restriction of f to the arrows of degree g; these projections sum to f.
inline AlgebraElement homogeneous_component(const AlgebraElement& f, const Cocycle& c,
                                            const GroupElem& g) {
    if (f.groupoid() != c.groupoid())
        throw MixedAlgebras("cocycle defined on a different groupoid");
    AlgebraElement out(f.groupoid(), f.ring());
    for (const auto& [a, v] : f.coeffs())
        if (c.at(a) == g) out.set(a, v);
    return out;
}

// Coordinate subspace spanned by the indicators of one degree fiber.
inline Subspace fiber_subspace(const Cocycle& c, const RingSpec& ring, const GroupElem& g) {
    const auto& gpd = c.groupoid();
    Subspace s(ring, gpd->num_arrows());
    for (std::size_t a : c.fiber(g))
        s.insert(AlgebraElement::indicator_arrow(gpd, ring, a).to_vector());
    return s;
}

// J is graded when every homogeneous projection of a member stays inside.
inline bool is_graded_ideal(const Cocycle& c, const IdealBasis& J) {
    if (J.groupoid() != c.groupoid())
        throw MixedAlgebras("cocycle defined on a different groupoid");
    for (const auto& f : J.basis_elements())
        for (const auto& g : c.degrees_present())
            if (!J.space().contains(homogeneous_component(f, c, g).to_vector())) return false;
    return true;
}

namespace detail {

// span(X.Y.Z) for lists of algebra elements
inline Subspace triple_product_span(const GroupoidPtr& g, const RingSpec& ring,
                                    const std::vector<AlgebraElement>& xs,
                                    const std::vector<AlgebraElement>& ys,
                                    const std::vector<AlgebraElement>& zs) {
    Subspace s(ring, g->num_arrows());
    for (const auto& x : xs)
        for (const auto& y : ys)
            for (const auto& z : zs) s.insert(convolve(convolve(x, y), z).to_vector());
    return s;
}

inline std::vector<AlgebraElement> fiber_basis(const Cocycle& c, const RingSpec& ring,
                                               const GroupElem& g) {
    std::vector<AlgebraElement> out;
    for (std::size_t a : c.fiber(g))
        out.push_back(AlgebraElement::indicator_arrow(c.groupoid(), ring, a));
    return out;
}

inline std::vector<AlgebraElement> space_basis(const GroupoidPtr& g, const Subspace& s) {
    std::vector<AlgebraElement> out;
    for (const auto& row : s.basis()) out.push_back(AlgebraElement::from_vector(g, row));
    return out;
}

}  // namespace detail

// A_g A_{g^-1} A_g = A_g for every degree, on the full algebra of a grading.
inline bool is_symmetrically_graded(const Cocycle& c, const RingSpec& ring) {
    if (!ring.is_field()) throw FieldRequired("symmetric-grading check uses spans");
    const auto& gpd = c.groupoid();
    for (const auto& g : c.degrees_present()) {
        auto xs = detail::fiber_basis(c, ring, g);
        auto ys = detail::fiber_basis(c, ring, g.inverse());
        Subspace prod = detail::triple_product_span(gpd, ring, xs, ys, xs);
        if (prod != fiber_subspace(c, ring, g)) return false;
    }
    return true;
}

// Same condition on the homogeneous pieces J_g = J cap A_g of a graded ideal.
inline bool is_symmetrically_graded(const Cocycle& c, const IdealBasis& J) {
    const auto& gpd = J.groupoid();
    const auto& ring = J.ring();
    for (const auto& g : c.degrees_present()) {
        Subspace jg = J.space().intersect(fiber_subspace(c, ring, g));
        Subspace jginv = J.space().intersect(fiber_subspace(c, ring, g.inverse()));
        auto xs = detail::space_basis(gpd, jg);
        auto ys = detail::space_basis(gpd, jginv);
        if (detail::triple_product_span(gpd, ring, xs, ys, xs) != jg) return false;
    }
    return true;
}

// A finite-dimensional algebra given by structure constants together with a
// degree for each basis vector.  Exists so gradings that are not of the
// fiber-restriction kind (e.g. truncated polynomial rings) can be examined.
class AbstractGradedAlgebra {
public:
    AbstractGradedAlgebra(RingSpec ring, GroupPtr group, std::vector<GroupElem> degrees,
                          std::vector<std::vector<Vec>> mult)
        : ring_(std::move(ring)), group_(std::move(group)), degrees_(std::move(degrees)),
          mult_(std::move(mult)) {
        const std::size_t n = degrees_.size();
        if (mult_.size() != n) throw ShapeMismatch("multiplication table must be n x n");
        for (const auto& row : mult_) {
            if (row.size() != n) throw ShapeMismatch("multiplication table must be n x n");
            for (const auto& v : row)
                if (v.size() != n) throw ShapeMismatch("product vector has wrong length");
        }
        // grading law on the basis: e_i e_j lands in the d_i d_j component
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                GroupElem d = degrees_[i] * degrees_[j];
                for (std::size_t k = 0; k < n; ++k)
                    if (!mult_[i][j][k].is_zero() && degrees_[k] != d)
                        throw Error("product of basis " + std::to_string(i) + "," +
                                    std::to_string(j) + " leaves its degree component");
            }
    }

    const RingSpec& ring() const { return ring_; }
    std::size_t dim() const { return degrees_.size(); }
    const GroupElem& degree(std::size_t i) const { return degrees_[i]; }

    Vec multiply(const Vec& x, const Vec& y) const {
        const std::size_t n = dim();
        Vec out = zero_vec(ring_, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (x[i].is_zero() || y[j].is_zero()) continue;
                RingElem c = x[i] * y[j];
                for (std::size_t k = 0; k < n; ++k)
                    out[k] = out[k] + c * mult_[i][j][k];
            }
        return out;
    }

    std::vector<GroupElem> degrees_present() const {
        std::set<GroupElem> s(degrees_.begin(), degrees_.end());
        return {s.begin(), s.end()};
    }

    Subspace component(const GroupElem& g) const {
        Subspace s(ring_, dim());
        for (std::size_t i = 0; i < dim(); ++i)
            if (degrees_[i] == g) {
                Vec v = zero_vec(ring_, dim());
                v[i] = RingElem::one(ring_);
                s.insert(v);
            }
        return s;
    }

private:
    RingSpec ring_;
    GroupPtr group_;
    std::vector<GroupElem> degrees_;
    std::vector<std::vector<Vec>> mult_;  // mult_[i][j] = e_i e_j in coordinates
};

inline bool is_symmetrically_graded(const AbstractGradedAlgebra& alg) {
    for (const auto& g : alg.degrees_present()) {
        Subspace ag = alg.component(g);
        Subspace aginv = alg.component(g.inverse());
        Subspace prod(alg.ring(), alg.dim());
        for (const auto& x : ag.basis())
            for (const auto& y : aginv.basis())
                for (const auto& z : ag.basis())
                    prod.insert(alg.multiply(alg.multiply(x, y), z));
        if (prod != ag) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// induced ideals

// Ind(I) = sum over g of I.A_g, for I an invariant ideal of the degree-e part.
// I is given as a subspace supported on identity-degree arrows.
inline IdealBasis induce(const Cocycle& c, const RingSpec& ring, const Subspace& I) {
    const auto& gpd = c.groupoid();
    if (!ring.is_field()) throw FieldRequired("induce uses spans");
    Subspace e_part = fiber_subspace(c, ring, c.identity());
    if (!e_part.contains_space(I))
        throw PreconditionFailed("generating ideal not supported in the identity component");

    auto e_basis = detail::fiber_basis(c, ring, c.identity());
    auto i_basis = detail::space_basis(gpd, I);

    // I must be an ideal of A_e
    for (const auto& f : i_basis)
        for (const auto& x : e_basis)
            if (!I.contains(convolve(x, f).to_vector()) ||
                !I.contains(convolve(f, x).to_vector()))
                throw PreconditionFailed("generator span is not an ideal of the identity part");

    // invariance: A_g I = I A_g for every degree
    for (const auto& g : c.degrees_present()) {
        auto g_basis = detail::fiber_basis(c, ring, g);
        Subspace lhs = module_product_span(gpd, ring, g_basis, i_basis);
        Subspace rhs = module_product_span(gpd, ring, i_basis, g_basis);
        if (lhs != rhs)
            throw NotInvariantIdeal("A_g I != I A_g at degree " + g.str());
    }

    Subspace ind(ring, gpd->num_arrows());
    for (const auto& f : i_basis) ind.insert(f.to_vector());  // I = I A_e by local units
    for (const auto& g : c.degrees_present()) {
        auto g_basis = detail::fiber_basis(c, ring, g);
        for (const auto& f : i_basis)
            for (const auto& x : g_basis) ind.insert(convolve(f, x).to_vector());
    }
    return IdealBasis(gpd, ring, ind);
}

// ---------------------------------------------------------------------------
// lattice of graded ideals vs. lattice of invariant unit subsets

struct LatticeEntry {
    std::set<std::size_t> units;
    IdealBasis ideal;  // A(G|_U) inside A(G)
};

struct LatticeReport {
    std::vector<LatticeEntry> invariant_sets;       // sorted by size, then lex
    std::vector<IdealBasis> graded_ideals;          // sorted by (dim, basis)
    std::vector<std::size_t> matching;              // invariant_sets[i] <-> graded_ideals[matching[i]]
    bool bijection = false;
    bool order_isomorphism = false;
    bool meets_match = false;
    bool joins_match = false;
    bool lattice_ops_verified = false;
};

inline Subspace restriction_span(const GroupoidPtr& g, const RingSpec& ring,
                                 const std::set<std::size_t>& units) {
    Subspace s(ring, g->num_arrows());
    for (std::size_t a = 0; a < g->num_arrows(); ++a)
        if (units.count(g->source(a)))
            s.insert(AlgebraElement::indicator_arrow(g, ring, a).to_vector());
    return s;
}

inline LatticeReport graded_ideal_lattice(const GroupoidPtr& g, const Cocycle& c,
                                          const RingSpec& ring,
                                          EnumerationBudget budget = {}) {
    if (c.groupoid() != g) throw MixedAlgebras("cocycle defined on a different groupoid");
    if (!ring.is_field() || !ring.is_modular())
        throw FieldRequired("graded_ideal_lattice enumerates over GF(p)");

    auto kernel = c.kernel_subgroupoid();
    if (!classify(kernel).strongly_effective) {
        // name an invariant subset whose restriction has non-unit isotropy
        for (const auto& u : invariant_unit_subsets(kernel)) {
            if (u.empty()) continue;
            auto sub = restrict_to(kernel, u);
            ArrowSet iso = isotropy(sub);
            for (std::size_t a : iso.members())
                if (!sub->is_unit_arrow(a)) {
                    std::string names;
                    for (std::size_t x : u) {
                        if (!names.empty()) names += ",";
                        names += kernel->unit_names()[x];
                    }
                    throw HypothesisFailed(
                        "identity-degree subgroupoid is not strongly effective: "
                        "restriction to {" + names + "} has isotropy arrow " +
                        sub->arrow_id(a));
                }
        }
        throw HypothesisFailed("identity-degree subgroupoid is not strongly effective");
    }

    LatticeReport rep;
    for (const auto& u : invariant_unit_subsets(g))
        rep.invariant_sets.push_back({u, IdealBasis(g, ring, restriction_span(g, ring, u))});

    for (const auto& J : enumerate_ideals(g, ring, budget))
        if (is_graded_ideal(c, J)) rep.graded_ideals.push_back(J);

    // matching U -> A(G|_U)
    rep.bijection = rep.invariant_sets.size() == rep.graded_ideals.size();
    std::set<std::size_t> hit;
    for (const auto& e : rep.invariant_sets) {
        std::size_t found = rep.graded_ideals.size();
        for (std::size_t j = 0; j < rep.graded_ideals.size(); ++j)
            if (rep.graded_ideals[j] == e.ideal) found = j;
        if (found == rep.graded_ideals.size() || !hit.insert(found).second) {
            rep.bijection = false;
            rep.matching.clear();
            break;
        }
        rep.matching.push_back(found);
    }

    if (rep.bijection) {
        const auto& sets = rep.invariant_sets;
        rep.order_isomorphism = true;
        rep.meets_match = true;
        rep.joins_match = true;
        for (std::size_t i = 0; i < sets.size(); ++i)
            for (std::size_t j = 0; j < sets.size(); ++j) {
                bool sub = std::includes(sets[j].units.begin(), sets[j].units.end(),
                                         sets[i].units.begin(), sets[i].units.end());
                if (sub != sets[j].ideal.space().contains_space(sets[i].ideal.space()))
                    rep.order_isomorphism = false;

                std::set<std::size_t> meet, join = sets[i].units;
                std::set_intersection(sets[i].units.begin(), sets[i].units.end(),
                                      sets[j].units.begin(), sets[j].units.end(),
                                      std::inserter(meet, meet.begin()));
                join.insert(sets[j].units.begin(), sets[j].units.end());
                if (restriction_span(g, ring, meet) !=
                    sets[i].ideal.space().intersect(sets[j].ideal.space()))
                    rep.meets_match = false;
                if (restriction_span(g, ring, join) !=
                    sets[i].ideal.space().sum(sets[j].ideal.space()))
                    rep.joins_match = false;
            }
        rep.lattice_ops_verified =
            rep.order_isomorphism && rep.meets_match && rep.joins_match;
    }
    return rep;
}

}  // namespace gad

#endif
