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

#ifndef MBCN_SPARSE_OPERATOR_H
#define MBCN_SPARSE_OPERATOR_H

#include <vector>

#include "mbcn/basis.h"

namespace mbcn {

struct Triplet {
    size_t row;
    size_t col;
    cdouble value;
};

/// Row-compressed complex matrix acting inside one fixed-N sector. Columns in
/// each row are sorted ascending, so products sum in a fixed order.
class SparseOperator {
   public:
    SparseOperator() = default;
    /// Duplicate (row, col) entries are summed; exact zeros are dropped.
    SparseOperator(BasisPtr basis, std::vector<Triplet> triplets, bool hermitian);

    const BasisPtr &basis() const {
        return basis_;
    }
    size_t dimension() const {
        return row_ptr_.empty() ? 0 : row_ptr_.size() - 1;
    }
    size_t nonzeros() const {
        return values_.size();
    }
    bool hermitian() const {
        return hermitian_;
    }

    /// out = H * in. `out` is resized as needed and must not alias `in`.
    void apply(const CVector &in, CVector &out) const;
    CVector apply(const CVector &in) const;
    FockState apply(const FockState &state) const;

    cdouble expectation(const CVector &v) const;
    /// Largest |H_ij - conj(H_ji)|.
    double hermiticity_error() const;
    CMatrix to_dense() const;
    bool is_diagonal() const;

    const std::vector<size_t> &row_ptr() const {
        return row_ptr_;
    }
    const std::vector<size_t> &col_idx() const {
        return col_idx_;
    }
    const std::vector<cdouble> &values() const {
        return values_;
    }

   private:
    BasisPtr basis_;
    std::vector<size_t> row_ptr_;
    std::vector<size_t> col_idx_;
    std::vector<cdouble> values_;
    bool hermitian_ = false;
};

}  // namespace mbcn

#endif
