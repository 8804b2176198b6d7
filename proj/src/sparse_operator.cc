// Copyright 2026 The mbcn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mbcn/sparse_operator.h"

#include <algorithm>
#include <map>

#include "mbcn/error.h"

namespace mbcn {

SparseOperator::SparseOperator(BasisPtr basis, std::vector<Triplet> triplets, bool hermitian)
    : basis_(std::move(basis)), hermitian_(hermitian) {
    size_t dim = basis_->dimension();
    std::sort(triplets.begin(), triplets.end(), [](const Triplet &a, const Triplet &b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    row_ptr_.assign(dim + 1, 0);
    for (size_t i = 0; i < triplets.size();) {
        const Triplet &t = triplets[i];
        if (t.row >= dim || t.col >= dim) {
            throw Error(ErrorKind::InvalidSpec, "operator entry outside the basis");
        }
        cdouble sum = 0;
        size_t j = i;
        while (j < triplets.size() && triplets[j].row == t.row && triplets[j].col == t.col) {
            sum += triplets[j].value;
            ++j;
        }
        if (sum != cdouble(0)) {
            col_idx_.push_back(t.col);
            values_.push_back(sum);
            row_ptr_[t.row + 1]++;
        }
        i = j;
    }
    for (size_t r = 0; r < dim; ++r) {
        row_ptr_[r + 1] += row_ptr_[r];
    }
}

void SparseOperator::apply(const CVector &in, CVector &out) const {
    const auto n = static_cast<Eigen::Index>(dimension());
    out.resize(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        cdouble acc = 0;
        for (size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            acc += values_[k] * in[static_cast<Eigen::Index>(col_idx_[k])];
        }
        out[r] = acc;
    }
}

CVector SparseOperator::apply(const CVector &in) const {
    CVector out;
    apply(in, out);
    return out;
}

FockState SparseOperator::apply(const FockState &state) const {
    return FockState(state.basis, apply(state.amplitudes));
}

cdouble SparseOperator::expectation(const CVector &v) const {
    return v.dot(apply(v));
}

double SparseOperator::hermiticity_error() const {
    std::map<std::pair<size_t, size_t>, cdouble> entries;
    for (size_t r = 0; r + 1 < row_ptr_.size(); ++r) {
        for (size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            entries[{r, col_idx_[k]}] = values_[k];
        }
    }
    double worst = 0;
    for (const auto &[rc, v] : entries) {
        auto it = entries.find({rc.second, rc.first});
        cdouble mirror = it == entries.end() ? cdouble(0) : std::conj(it->second);
        worst = std::max(worst, std::abs(v - mirror));
    }
    return worst;
}

CMatrix SparseOperator::to_dense() const {
    const auto n = static_cast<Eigen::Index>(dimension());
    CMatrix m = CMatrix::Zero(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            m(r, static_cast<Eigen::Index>(col_idx_[k])) = values_[k];
        }
    }
    return m;
}

bool SparseOperator::is_diagonal() const {
    for (size_t r = 0; r + 1 < row_ptr_.size(); ++r) {
        for (size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            if (col_idx_[k] != r) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace mbcn
