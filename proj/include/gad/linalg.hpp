#ifndef GAD_LINALG_HPP
#define GAD_LINALG_HPP

#include <algorithm>
#include <cstddef>
#include <vector>

#include "gad/errors.hpp"
#include "gad/ring.hpp"

namespace gad {

using Vec = std::vector<RingElem>;
using Mat = std::vector<Vec>;

inline Vec zero_vec(const RingSpec& spec, std::size_t n) {
    return Vec(n, RingElem::zero(spec));
}

inline bool is_zero_vec(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const RingElem& x) { return x.is_zero(); });
}

inline Vec vec_add(const Vec& a, const Vec& b) {
    Vec r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = r[i] + b[i];
    return r;
}

inline Vec vec_scale(const RingElem& c, const Vec& a) {
    Vec r = a;
    for (auto& x : r) x = c * x;
    return r;
}

// Row space of a matrix over a field, kept in reduced row-echelon form so
// equality of subspaces is equality of representations.
class Subspace {
public:
    Subspace(RingSpec spec, std::size_t dim) : spec_(std::move(spec)), ncols_(dim) {
        if (!spec_.is_field())
            throw FieldRequired("subspace arithmetic requires a field, not " + spec_.name());
    }

    static Subspace span(const RingSpec& spec, std::size_t dim, const Mat& rows) {
        Subspace s(spec, dim);
        for (const auto& r : rows) s.insert(r);
        return s;
    }

    const RingSpec& spec() const { return spec_; }
    std::size_t ambient_dim() const { return ncols_; }
    std::size_t dim() const { return rows_.size(); }
    const Mat& basis() const { return rows_; }

    // Gaussian insertion; returns true when v enlarged the space.
    bool insert(Vec v) {
        if (v.size() != ncols_) throw ShapeMismatch("vector/ambient dimension mismatch");
        for (const auto& row : rows_) {
            std::size_t p = pivot_of(row);
            if (!v[p].is_zero()) v = vec_add(v, vec_scale(-v[p], row));
        }
        std::size_t p = 0;
        while (p < ncols_ && v[p].is_zero()) ++p;
        if (p == ncols_) return false;
        v = vec_scale(v[p].inv(), v);
        // back-substitute into existing rows, keep rows sorted by pivot
        for (auto& row : rows_)
            if (!row[p].is_zero()) row = vec_add(row, vec_scale(-row[p], v));
        auto it = std::lower_bound(rows_.begin(), rows_.end(), p,
                                   [](const Vec& r, std::size_t q) { return pivot_of(r) < q; });
        rows_.insert(it, std::move(v));
        return true;
    }

    bool contains(Vec v) const {
        for (const auto& row : rows_) {
            std::size_t p = pivot_of(row);
            if (!v[p].is_zero()) v = vec_add(v, vec_scale(-v[p], row));
        }
        return is_zero_vec(v);
    }

    bool contains_space(const Subspace& other) const {
        for (const auto& r : other.rows_)
            if (!contains(r)) return false;
        return true;
    }

    Subspace sum(const Subspace& other) const {
        Subspace s = *this;
        for (const auto& r : other.rows_) s.insert(r);
        return s;
    }

    // Zassenhaus: RREF of [U | U; V | 0], rows with zero left half carry an
    // intersection basis in the right half.
    Subspace intersect(const Subspace& other) const {
        if (ncols_ != other.ncols_) throw ShapeMismatch("subspace ambient mismatch");
        Subspace big(spec_, 2 * ncols_);
        for (const auto& r : rows_) {
            Vec w = r;
            w.insert(w.end(), r.begin(), r.end());
            big.insert(std::move(w));
        }
        for (const auto& r : other.rows_) {
            Vec w = r;
            Vec z = zero_vec(spec_, ncols_);
            w.insert(w.end(), z.begin(), z.end());
            big.insert(std::move(w));
        }
        Subspace out(spec_, ncols_);
        for (const auto& r : big.rows_) {
            bool left_zero = true;
            for (std::size_t i = 0; i < ncols_ && left_zero; ++i)
                if (!r[i].is_zero()) left_zero = false;
            if (left_zero) out.insert(Vec(r.begin() + static_cast<long>(ncols_), r.end()));
        }
        return out;
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ncols_ == b.ncols_ && a.rows_ == b.rows_;
    }
    friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

    // Lexicographic on the canonical bases; deterministic report ordering.
    friend bool operator<(const Subspace& a, const Subspace& b) {
        if (a.rows_.size() != b.rows_.size()) return a.rows_.size() < b.rows_.size();
        for (std::size_t i = 0; i < a.rows_.size(); ++i)
            for (std::size_t j = 0; j < a.ncols_; ++j) {
                if (a.rows_[i][j] < b.rows_[i][j]) return true;
                if (b.rows_[i][j] < a.rows_[i][j]) return false;
            }
        return false;
    }

private:
    static std::size_t pivot_of(const Vec& row) {
        for (std::size_t i = 0; i < row.size(); ++i)
            if (!row[i].is_zero()) return i;
        return row.size();
    }

    RingSpec spec_;
    std::size_t ncols_;
    Mat rows_;  // RREF, sorted by pivot column
};

}  // namespace gad

#endif
