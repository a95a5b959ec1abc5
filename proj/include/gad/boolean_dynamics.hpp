#ifndef GAD_BOOLEAN_DYNAMICS_HPP
#define GAD_BOOLEAN_DYNAMICS_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gad/errors.hpp"
#include "gad/linalg.hpp"
#include "gad/ring.hpp"

namespace gad {

// An element of a finite Boolean algebra, as a bitmask over its atoms.
using AtomMask = std::uint32_t;

class BooleanDynSystem;
using BdsPtr = std::shared_ptr<const BooleanDynSystem>;

// A finite Boolean dynamical system: a powerset algebra over named atoms and
// one action per label.  Each action is stored by its atom images; the
// additive extension is a Boolean homomorphism exactly when distinct atoms
// have disjoint images, which create() enforces.
class BooleanDynSystem {
public:
    // atom_images[label][atom] = image mask of that atom
    static BdsPtr create(std::vector<std::string> atoms, std::vector<std::string> labels,
                         std::vector<std::vector<AtomMask>> atom_images) {
        auto sys = std::make_shared<BooleanDynSystem>();
        sys->atoms_ = std::move(atoms);
        sys->labels_ = std::move(labels);
        sys->images_ = std::move(atom_images);
        std::sort(sys->atoms_.begin(), sys->atoms_.end());
        std::sort(sys->labels_.begin(), sys->labels_.end());
        if (std::adjacent_find(sys->atoms_.begin(), sys->atoms_.end()) != sys->atoms_.end())
            throw Error("duplicate atom name");
        if (std::adjacent_find(sys->labels_.begin(), sys->labels_.end()) !=
            sys->labels_.end())
            throw Error("duplicate label name");
        if (sys->atoms_.empty()) throw Error("Boolean algebra needs at least one atom");
        if (sys->atoms_.size() > 20)
            throw BudgetExceeded("atom powerset too large", 1ULL << sys->atoms_.size());
        const std::size_t n = sys->atoms_.size();
        if (sys->images_.size() != sys->labels_.size())
            throw ShapeMismatch("need one atom-image table per label");
        for (std::size_t l = 0; l < sys->images_.size(); ++l) {
            const auto& img = sys->images_[l];
            if (img.size() != n)
                throw ShapeMismatch("atom-image table of label " + sys->labels_[l] +
                                    " has the wrong length");
            AtomMask seen = 0;
            for (std::size_t a = 0; a < n; ++a) {
                if (img[a] >> n)
                    throw Error("image of an atom under " + sys->labels_[l] +
                                " uses unknown atoms");
                if (seen & img[a])
                    throw Error("label " + sys->labels_[l] +
                                " maps distinct atoms to overlapping images, so it does "
                                "not preserve intersections");
                seen |= img[a];
            }
        }
        return sys;
    }

    std::size_t num_atoms() const { return atoms_.size(); }
    std::size_t num_labels() const { return labels_.size(); }
    const std::vector<std::string>& atom_names() const { return atoms_; }
    const std::vector<std::string>& label_names() const { return labels_; }
    AtomMask top() const { return (AtomMask(1) << atoms_.size()) - 1; }

    std::size_t atom_index(const std::string& name) const {
        auto it = std::lower_bound(atoms_.begin(), atoms_.end(), name);
        if (it == atoms_.end() || *it != name) throw Error("unknown atom: " + name);
        return static_cast<std::size_t>(it - atoms_.begin());
    }

    std::size_t label_index(const std::string& name) const {
        auto it = std::lower_bound(labels_.begin(), labels_.end(), name);
        if (it == labels_.end() || *it != name) throw Error("unknown label: " + name);
        return static_cast<std::size_t>(it - labels_.begin());
    }

    AtomMask mask_of(const std::vector<std::string>& names) const {
        AtomMask m = 0;
        for (const auto& s : names) m |= AtomMask(1) << atom_index(s);
        return m;
    }

    std::string mask_str(AtomMask m) const {
        std::string s = "{";
        for (std::size_t a = 0; a < atoms_.size(); ++a)
            if (m & (AtomMask(1) << a)) {
                if (s.size() > 1) s += ",";
                s += atoms_[a];
            }
        return s + "}";
    }

    AtomMask theta(std::size_t label, AtomMask b) const {
        AtomMask out = 0;
        for (std::size_t a = 0; a < atoms_.size(); ++a)
            if (b & (AtomMask(1) << a)) out |= images_[label][a];
        return out;
    }

    // theta_{a1 a2 ... an} applies a1 first
    AtomMask theta_word(const std::vector<std::size_t>& word, AtomMask b) const {
        for (std::size_t l : word) b = theta(l, b);
        return b;
    }

    // least upper bound of the image, here just the image of the top element
    AtomMask range_of(const std::vector<std::size_t>& word) const {
        return theta_word(word, top());
    }

private:
    std::vector<std::string> atoms_;   // sorted
    std::vector<std::string> labels_;  // sorted
    std::vector<std::vector<AtomMask>> images_;
};

inline std::set<std::size_t> delta(const BdsPtr& sys, AtomMask b) {
    std::set<std::size_t> out;
    for (std::size_t l = 0; l < sys->num_labels(); ++l)
        if (sys->theta(l, b) != 0) out.insert(l);
    return out;
}

inline std::size_t lambda_count(const BdsPtr& sys, AtomMask b) {
    return delta(sys, b).size();
}

// Every nonempty subset of a must have at least one label acting nontrivially
// on it; the empty set counts as regular.
inline bool is_regular(const BdsPtr& sys, AtomMask a) {
    for (AtomMask b = a; b != 0; b = (b - 1) & a)
        if (delta(sys, b).empty()) return false;
    return true;
}

// ---------------------------------------------------------------------------
// cycles and condition (L_B)

struct BdsCycle {
    std::vector<std::size_t> word;
    AtomMask base = 0;
};

namespace detail_bds {

// the distinct values of A, theta_w(A), theta_w^2(A), ...; iteration on a
// finite algebra is eventually periodic, so this decides every "for all k"
inline std::vector<AtomMask> iterates(const BdsPtr& sys, const std::vector<std::size_t>& w,
                                      AtomMask a) {
    std::vector<AtomMask> out;
    std::set<AtomMask> seen;
    while (seen.insert(a).second) {
        out.push_back(a);
        a = sys->theta_word(w, a);
    }
    return out;
}

}  // namespace detail_bds

inline bool is_cycle(const BdsPtr& sys, const std::vector<std::size_t>& word, AtomMask a) {
    if (word.empty() || a == 0) return false;
    if ((a & sys->range_of(word)) != a) return false;
    for (AtomMask c : detail_bds::iterates(sys, word, a)) {
        if (c == 0) return false;
        // every nonempty B inside the iterate must meet its own image
        for (AtomMask b = c; b != 0; b = (b - 1) & c)
            if ((b & sys->theta_word(word, b)) == 0) return false;
    }
    return true;
}

// No-exit condition: along every shift of every power of the word, the
// current set is regular and exactly one label keeps it alive.  The initial
// untranslated set itself is not constrained; the k+1 power clause covers
// all later returns.
inline bool cycle_has_exit(const BdsPtr& sys, const BdsCycle& cyc) {
    const auto& w = cyc.word;
    auto singleton = [&](AtomMask c, std::size_t label) {
        return is_regular(sys, c) && delta(sys, c) == std::set<std::size_t>{label};
    };
    for (AtomMask c : detail_bds::iterates(sys, w, cyc.base)) {
        AtomMask d = c;
        for (std::size_t t = 0; t + 1 < w.size(); ++t) {
            d = sys->theta(w[t], d);
            if (!singleton(d, w[t + 1])) return true;
        }
        if (!singleton(sys->theta_word(w, c), w[0])) return true;
    }
    return false;
}

// Cycles (word, atom) with words up to max_len; join-irreducible bases are
// enough since the cycle condition passes to nonempty subsets.
inline std::vector<BdsCycle> find_cycles(const BdsPtr& sys, std::size_t max_len) {
    std::vector<BdsCycle> out;
    std::vector<std::vector<std::size_t>> words = {{}};
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& w : words)
            for (std::size_t l = 0; l < sys->num_labels(); ++l) {
                auto w2 = w;
                w2.push_back(l);
                for (std::size_t a = 0; a < sys->num_atoms(); ++a)
                    if (is_cycle(sys, w2, AtomMask(1) << a))
                        out.push_back({w2, AtomMask(1) << a});
                next.push_back(std::move(w2));
            }
        words = std::move(next);
    }
    return out;
}

struct LbReport {
    bool holds = true;
    std::optional<BdsCycle> witness;  // a cycle with no exit, when one exists
    std::size_t searched_max_len = 0;
    std::string note;
};

inline LbReport satisfies_LB(const BdsPtr& sys, std::size_t max_len = 0) {
    LbReport rep;
    rep.searched_max_len = max_len ? max_len : sys->num_atoms() * sys->num_labels();
    for (const auto& cyc : find_cycles(sys, rep.searched_max_len))
        if (!cycle_has_exit(sys, cyc)) {
            rep.holds = false;
            rep.witness = cyc;
            return rep;
        }
    rep.note = "no entry-free cycle among words of length <= " +
               std::to_string(rep.searched_max_len);
    return rep;
}

// ---------------------------------------------------------------------------
// hereditary and saturated ideals; every ideal of a finite Boolean algebra is
// principal, so an ideal is stored by its top element

inline bool is_hereditary_ideal(const BdsPtr& sys, AtomMask s) {
    for (AtomMask a = s;; a = (a - 1) & s) {
        for (std::size_t l = 0; l < sys->num_labels(); ++l)
            if ((sys->theta(l, a) | s) != s) return false;
        if (a == 0) break;
    }
    return true;
}

inline bool is_saturated_ideal(const BdsPtr& sys, AtomMask s) {
    for (AtomMask a = 0; a <= sys->top(); ++a) {
        if ((a | s) == s || !is_regular(sys, a)) continue;
        bool all_in = true;
        for (std::size_t l : delta(sys, a))
            if ((sys->theta(l, a) | s) != s) all_in = false;
        if (all_in) return false;
    }
    return true;
}

// least hereditary ideal containing s
inline AtomMask hereditary_expansion(const BdsPtr& sys, AtomMask s) {
    for (;;) {
        AtomMask grown = s;
        for (std::size_t l = 0; l < sys->num_labels(); ++l) grown |= sys->theta(l, s);
        if (grown == s) return s;
        s = grown;
    }
}

// closure under the saturation recurrence: adjoin every regular set whose
// surviving images already lie inside
inline AtomMask saturation(const BdsPtr& sys, AtomMask s) {
    for (;;) {
        AtomMask grown = s;
        for (AtomMask a = 0; a <= sys->top(); ++a) {
            if ((a | s) == s || !is_regular(sys, a)) continue;
            bool all_in = true;
            for (std::size_t l : delta(sys, a))
                if ((sys->theta(l, a) | s) != s) all_in = false;
            if (all_in) grown |= a;
        }
        if (grown == s) return s;
        s = grown;
    }
}

inline AtomMask min_hs_ideal(const BdsPtr& sys, AtomMask s) {
    AtomMask out = saturation(sys, hereditary_expansion(sys, s));
    if (!is_hereditary_ideal(sys, out) || !is_saturated_ideal(sys, out))
        throw Error("hereditary-saturated closure failed its own postcondition");
    return out;
}

struct BdsLatticeReport {
    std::vector<AtomMask> members;  // sorted by population then value
    bool meets_match = true;        // meet is intersection, stays a member
    bool joins_match = true;        // join is the closure of the union
    bool lattice_ops_verified = true;
};

// All hereditary and saturated ideals with verified meet/join structure;
// by the graded-ideal correspondence this is also the lattice of Z-graded
// ideals of the associated algebra.
inline BdsLatticeReport hs_ideal_lattice(const BdsPtr& sys) {
    BdsLatticeReport rep;
    for (AtomMask s = 0; s <= sys->top(); ++s)
        if (is_hereditary_ideal(sys, s) && is_saturated_ideal(sys, s))
            rep.members.push_back(s);
    std::sort(rep.members.begin(), rep.members.end(), [](AtomMask a, AtomMask b) {
        int pa = std::popcount(a), pb = std::popcount(b);
        if (pa != pb) return pa < pb;
        return a < b;
    });
    std::set<AtomMask> set(rep.members.begin(), rep.members.end());
    for (AtomMask a : rep.members)
        for (AtomMask b : rep.members) {
            if (!set.count(a & b)) rep.meets_match = false;
            AtomMask join = min_hs_ideal(sys, a | b);
            if (!set.count(join)) rep.joins_match = false;
            // least upper bound: every member containing both contains the join
            for (AtomMask c : rep.members)
                if ((a | c) == c && (b | c) == c && (join | c) != c)
                    rep.joins_match = false;
        }
    rep.lattice_ops_verified = rep.meets_match && rep.joins_match;
    return rep;
}

struct BdsSimplicityReport {
    bool lb_holds = false;
    bool only_trivial_ideals = false;
    bool simple = false;
    std::vector<std::string> notes;
};

inline BdsSimplicityReport check_simplicity(const BdsPtr& sys, std::size_t max_len = 0) {
    BdsSimplicityReport rep;
    auto lb = satisfies_LB(sys, max_len);
    rep.lb_holds = lb.holds;
    if (!lb.holds && lb.witness) {
        std::string w;
        for (std::size_t l : lb.witness->word) w += sys->label_names()[l];
        rep.notes.push_back("entry-free cycle (" + w + ", " +
                            sys->mask_str(lb.witness->base) + ")");
    }
    auto lattice = hs_ideal_lattice(sys);
    rep.only_trivial_ideals = lattice.members.size() == 2;
    if (!rep.only_trivial_ideals)
        for (AtomMask s : lattice.members)
            if (s != 0 && s != sys->top())
                rep.notes.push_back("proper hereditary saturated ideal " + sys->mask_str(s));
    rep.simple = rep.lb_holds && rep.only_trivial_ideals;
    return rep;
}

// ---------------------------------------------------------------------------
// matrix representation validator

namespace detail_bds {

inline void require_square(const Mat& m, std::size_t dim, const std::string& what) {
    if (m.size() != dim) throw ShapeMismatch(what + " has the wrong number of rows");
    for (const auto& row : m)
        if (row.size() != dim) throw ShapeMismatch(what + " is not square of the right size");
}

inline Mat mat_mul(const RingSpec& ring, const Mat& a, const Mat& b) {
    const std::size_t n = a.size();
    Mat out(n, zero_vec(ring, n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < n; ++j)
                out[i][j] = out[i][j] + a[i][k] * b[k][j];
        }
    return out;
}

inline Mat mat_add(const Mat& a, const Mat& b) {
    Mat out = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) out[i][j] = out[i][j] + b[i][j];
    return out;
}

inline Mat mat_sub(const Mat& a, const Mat& b) {
    Mat out = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) out[i][j] = out[i][j] - b[i][j];
    return out;
}

inline Mat transpose(const Mat& a) {
    Mat out(a.size(), Vec());
    for (std::size_t j = 0; j < a.size(); ++j) {
        out[j].reserve(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out[j].push_back(a[i][j]);
    }
    return out;
}

inline bool mat_is_zero(const Mat& a) {
    for (const auto& row : a)
        for (const auto& x : row)
            if (!x.is_zero()) return false;
    return true;
}

inline bool mat_eq(const Mat& a, const Mat& b) { return mat_is_zero(mat_sub(a, b)); }

}  // namespace detail_bds

struct CkReport {
    std::vector<std::string> violations;
    bool relations_hold = true;
    bool faithful = true;
};

// Checks the four representation relations for projections P (indexed by
// element mask) and partial isometries S (indexed by label), with the
// transpose as adjoint.
inline CkReport validate_ck_representation(const BdsPtr& sys, const RingSpec& ring,
                                           const std::vector<Mat>& p,
                                           const std::vector<Mat>& s) {
    using namespace detail_bds;
    if (p.size() != std::size_t(sys->top()) + 1)
        throw ShapeMismatch("need one projection per algebra element");
    if (s.size() != sys->num_labels())
        throw ShapeMismatch("need one isometry per label");
    if (p.empty() || p[0].empty()) throw ShapeMismatch("matrices must be nonempty");
    const std::size_t dim = p[0].size();
    for (AtomMask a = 0; a <= sys->top(); ++a)
        require_square(p[a], dim, "P_" + sys->mask_str(a));
    for (std::size_t l = 0; l < s.size(); ++l)
        require_square(s[l], dim, "S_" + sys->label_names()[l]);

    CkReport rep;
    auto flag = [&](const std::string& msg) {
        rep.violations.push_back(msg);
        rep.relations_hold = false;
    };

    if (!mat_is_zero(p[0])) flag("(1) P_{} is not zero");
    for (AtomMask a = 0; a <= sys->top(); ++a)
        for (AtomMask b = 0; b <= sys->top(); ++b) {
            if (!mat_eq(mat_mul(ring, p[a], p[b]), p[a & b]))
                flag("(1) P_A P_B != P_{A and B} at A = " + sys->mask_str(a) +
                     ", B = " + sys->mask_str(b));
            if (!mat_eq(p[a | b], mat_sub(mat_add(p[a], p[b]), p[a & b])))
                flag("(1) P_{A or B} != P_A + P_B - P_{A and B} at A = " +
                     sys->mask_str(a) + ", B = " + sys->mask_str(b));
        }

    for (std::size_t l = 0; l < s.size(); ++l)
        for (AtomMask a = 0; a <= sys->top(); ++a)
            if (!mat_eq(mat_mul(ring, p[a], s[l]), mat_mul(ring, s[l], p[sys->theta(l, a)])))
                flag("(2) P_A S != S P_{theta(A)} at A = " + sys->mask_str(a) +
                     ", label " + sys->label_names()[l]);

    for (std::size_t l = 0; l < s.size(); ++l)
        for (std::size_t m = 0; m < s.size(); ++m) {
            Mat lhs = mat_mul(ring, transpose(s[l]), s[m]);
            if (l == m) {
                if (!mat_eq(lhs, p[sys->range_of({l})]))
                    flag("(3) S* S != P_{range} at label " + sys->label_names()[l]);
            } else if (!mat_is_zero(lhs)) {
                flag("(3) S* S != 0 at labels " + sys->label_names()[l] + ", " +
                     sys->label_names()[m]);
            }
        }

    for (AtomMask a = 0; a <= sys->top(); ++a) {
        if (!is_regular(sys, a)) continue;
        Mat sum(dim, zero_vec(ring, dim));
        for (std::size_t l : delta(sys, a))
            sum = mat_add(sum, mat_mul(ring, mat_mul(ring, s[l], p[sys->theta(l, a)]),
                                       transpose(s[l])));
        if (!mat_eq(p[a], sum))
            flag("(4) P_A != sum over Delta_A at A = " + sys->mask_str(a));
    }

    for (AtomMask a = 1; a <= sys->top(); ++a)
        if (mat_is_zero(p[a])) rep.faithful = false;
    return rep;
}

}  // namespace gad

#endif
