#ifndef GAD_GROUP_HPP
#define GAD_GROUP_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gad/errors.hpp"

namespace gad {

class Group;
using GroupPtr = std::shared_ptr<const Group>;

// A grading / acting group: either a finite group given by its multiplication
// table, or a finitely generated free abelian group (rank 0 = trivial group,
// rank 1 = the integers).
class Group : public std::enable_shared_from_this<Group> {
public:
    enum class Kind { Table, FreeAbelian };

    static GroupPtr trivial() { return free_abelian(0); }
    static GroupPtr integers() { return free_abelian(1); }

    static GroupPtr free_abelian(std::size_t rank) {
        return GroupPtr(new Group(Kind::FreeAbelian, rank));
    }

    // names[i] is element i; mult[i][j] is the index of names[i]*names[j].
    static GroupPtr table(std::vector<std::string> names,
                          std::vector<std::vector<std::size_t>> mult);

    // Z/n as a table group with elements e, g, g2, ...
    static GroupPtr cyclic(std::size_t n);

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Table || rank_ == 0; }
    std::size_t order() const { return kind_ == Kind::Table ? names_.size() : 1; }
    std::size_t rank() const { return rank_; }
    const std::vector<std::string>& element_names() const { return names_; }
    std::size_t identity_index() const { return id_; }
    std::size_t mul_index(std::size_t i, std::size_t j) const { return mult_[i][j]; }
    std::size_t inv_index(std::size_t i) const { return inv_[i]; }

    std::size_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return i;
        throw Error("unknown group element: " + name);
    }

private:
    Group(Kind k, std::size_t rank) : kind_(k), rank_(rank) {}

    Kind kind_;
    std::size_t rank_ = 0;                        // FreeAbelian
    std::vector<std::string> names_;              // Table
    std::vector<std::vector<std::size_t>> mult_;  // Table
    std::vector<std::size_t> inv_;                // Table
    std::size_t id_ = 0;                          // Table
};

// Value-semantic group element; structural equality, total order.
class GroupElem {
public:
    GroupElem(GroupPtr parent, std::size_t idx) : parent_(std::move(parent)), idx_(idx) {
        if (parent_->kind() != Group::Kind::Table) throw Error("index element of non-table group");
    }
    GroupElem(GroupPtr parent, std::vector<long long> exps)
        : parent_(std::move(parent)), exps_(std::move(exps)) {
        if (parent_->kind() != Group::Kind::FreeAbelian || exps_.size() != parent_->rank())
            throw Error("exponent element shape mismatch");
    }

    static GroupElem identity(const GroupPtr& g) {
        if (g->kind() == Group::Kind::Table) return GroupElem(g, g->identity_index());
        return GroupElem(g, std::vector<long long>(g->rank(), 0));
    }

    const GroupPtr& parent() const { return parent_; }
    std::size_t index() const { return idx_; }
    const std::vector<long long>& exponents() const { return exps_; }

    bool is_identity() const {
        if (parent_->kind() == Group::Kind::Table) return idx_ == parent_->identity_index();
        for (long long e : exps_)
            if (e != 0) return false;
        return true;
    }

    GroupElem operator*(const GroupElem& o) const {
        require_same(o);
        if (parent_->kind() == Group::Kind::Table)
            return GroupElem(parent_, parent_->mul_index(idx_, o.idx_));
        std::vector<long long> e = exps_;
        for (std::size_t i = 0; i < e.size(); ++i) e[i] += o.exps_[i];
        return GroupElem(parent_, std::move(e));
    }

    GroupElem inverse() const {
        if (parent_->kind() == Group::Kind::Table)
            return GroupElem(parent_, parent_->inv_index(idx_));
        std::vector<long long> e = exps_;
        for (auto& x : e) x = -x;
        return GroupElem(parent_, std::move(e));
    }

    friend bool operator==(const GroupElem& a, const GroupElem& b) {
        return a.parent_ == b.parent_ && a.idx_ == b.idx_ && a.exps_ == b.exps_;
    }
    friend bool operator!=(const GroupElem& a, const GroupElem& b) { return !(a == b); }
    friend bool operator<(const GroupElem& a, const GroupElem& b) {
        if (a.idx_ != b.idx_) return a.idx_ < b.idx_;
        return a.exps_ < b.exps_;
    }

    std::string str() const {
        if (parent_->kind() == Group::Kind::Table) return parent_->element_names()[idx_];
        if (exps_.empty()) return "e";
        std::string s;
        for (std::size_t i = 0; i < exps_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(exps_[i]);
        }
        return exps_.size() == 1 ? s : "(" + s + ")";
    }

private:
    void require_same(const GroupElem& o) const {
        if (parent_ != o.parent_) throw Error("elements of different groups");
    }

    GroupPtr parent_;
    std::size_t idx_ = 0;
    std::vector<long long> exps_;
};

inline GroupPtr Group::table(std::vector<std::string> names,
                             std::vector<std::vector<std::size_t>> mult) {
    const std::size_t n = names.size();
    if (n == 0) throw Error("empty group table");
    if (mult.size() != n) throw Error("group table must be square");
    for (const auto& row : mult) {
        if (row.size() != n) throw Error("group table must be square");
        for (std::size_t v : row)
            if (v >= n) throw Error("group table entry out of range");
    }
    // locate the two-sided identity
    std::size_t id = n;
    for (std::size_t e = 0; e < n; ++e) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) ok = mult[e][i] == i && mult[i][e] == i;
        if (ok) {
            id = e;
            break;
        }
    }
    if (id == n) throw Error("group table has no identity");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (mult[mult[i][j]][k] != mult[i][mult[j][k]])
                    throw Error("group table not associative at (" + names[i] + "," + names[j] +
                                "," + names[k] + ")");
    std::vector<std::size_t> inv(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            if (mult[i][j] == id && mult[j][i] == id) {
                inv[i] = j;
                break;
            }
        if (inv[i] == n) throw Error("group table element " + names[i] + " has no inverse");
    }
    auto g = GroupPtr(new Group(Kind::Table, 0));
    auto* m = const_cast<Group*>(g.get());
    m->names_ = std::move(names);
    m->mult_ = std::move(mult);
    m->inv_ = std::move(inv);
    m->id_ = id;
    return g;
}

inline GroupPtr Group::cyclic(std::size_t n) {
    std::vector<std::string> names;
    names.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        names.push_back(i == 0 ? "e" : (i == 1 ? "g" : "g" + std::to_string(i)));
    std::vector<std::vector<std::size_t>> mult(n, std::vector<std::size_t>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) mult[i][j] = (i + j) % n;
    return table(std::move(names), std::move(mult));
}

// All elements of a finite group (table groups and the rank-0 case).
inline std::vector<GroupElem> all_elements(const GroupPtr& g) {
    std::vector<GroupElem> out;
    if (g->kind() == Group::Kind::Table) {
        for (std::size_t i = 0; i < g->order(); ++i) out.emplace_back(g, i);
    } else if (g->rank() == 0) {
        out.push_back(GroupElem::identity(g));
    } else {
        throw Error("cannot enumerate an infinite group");
    }
    return out;
}

}  // namespace gad

#endif
