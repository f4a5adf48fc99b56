#include "prolongate/linalg.hpp"

namespace prolong {

void axpy(SparseRow& y, const Coeff& a, const SparseRow& x) {
    if (a.is_zero()) return;
    for (auto& [j, v] : x) {
        auto it = y.find(j);
        if (it == y.end()) {
            y.emplace(j, a * v);
        } else {
            it->second += a * v;
            if (it->second.is_zero()) y.erase(it);
        }
    }
}

void RowEchelon::reduce(SparseRow& r) const {
    if (piv_.empty()) return;
    std::vector<int> cols;
    for (auto& [j, v] : r)
        if (piv_.count(j)) cols.push_back(j);
    for (int j : cols) {
        auto it = r.find(j);
        if (it == r.end()) continue;
        Coeff a = -it->second;
        axpy(r, a, piv_.at(j));
    }
}

int RowEchelon::insert(SparseRow r, int limit) {
    reduce(r);
    if (r.empty()) return -1;
    int p = r.begin()->first;
    if (limit >= 0 && p >= limit) {
        inconsistent_ = true;
        return -1;
    }
    Coeff inv = r.begin()->second.inverse();
    for (auto& [j, v] : r) v *= inv;
    for (auto& [q, row] : piv_) {
        auto it = row.find(p);
        if (it == row.end()) continue;
        Coeff a = -it->second;
        axpy(row, a, r);
    }
    piv_.emplace(p, std::move(r));
    return p;
}

std::optional<std::vector<Coeff>> solve_linear(const std::vector<SparseRow>& rows, const std::vector<Coeff>& rhs, int ncols) {
    RowEchelon ech;
    for (size_t i = 0; i < rows.size(); ++i) {
        SparseRow r = rows[i];
        if (!rhs[i].is_zero()) r[ncols] = rhs[i];
        ech.insert(std::move(r), ncols);
        if (ech.inconsistent()) return std::nullopt;
    }
    std::vector<Coeff> x(ncols);
    for (auto& [p, row] : ech.pivots()) {
        auto it = row.find(ncols);
        if (it != row.end()) x[p] = it->second;
    }
    return x;
}

}  // namespace prolong
