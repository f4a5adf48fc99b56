#pragma once

#include "prolongate/coeff.hpp"

#include <map>
#include <optional>
#include <vector>

namespace prolong {

using SparseRow = std::map<int, Coeff>;

// Incremental Gauss-Jordan over Q(i). Pivot rows are monic in their pivot
// column and free of every other pivot column.
class RowEchelon {
public:
    // Reduces r by the current pivots (in place).
    void reduce(SparseRow& r) const;
    // Adds a row; returns its pivot column, or -1 if it reduced to zero.
    // Columns >= limit are never chosen as pivots (augmented columns).
    int insert(SparseRow r, int limit = -1);
    const std::map<int, SparseRow>& pivots() const { return piv_; }
    int rank() const { return static_cast<int>(piv_.size()); }

private:
    std::map<int, SparseRow> piv_;
    bool inconsistent_ = false;

public:
    // A row with no pivot candidate below `limit` but nonzero beyond it was inserted.
    bool inconsistent() const { return inconsistent_; }
};

void axpy(SparseRow& y, const Coeff& a, const SparseRow& x);  // y += a x

// Solves sum_j A[i][j] x_j = b_i; free unknowns are set to zero.
std::optional<std::vector<Coeff>> solve_linear(const std::vector<SparseRow>& rows, const std::vector<Coeff>& rhs, int ncols);

}  // namespace prolong
