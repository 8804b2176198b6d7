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

#include "mbcn/random.h"

#include <cmath>

namespace mbcn {

CVector random_vector(size_t dim, Rng &rng) {
    std::normal_distribution<double> normal;
    CVector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        double re = normal(rng);
        double im = normal(rng);
        v[i] = cdouble(re, im);
    }
    return v;
}

CMatrix haar_unitary(int dim, Rng &rng) {
    std::normal_distribution<double> normal;
    CMatrix z(dim, dim);
    for (int c = 0; c < dim; ++c) {
        for (int r = 0; r < dim; ++r) {
            double re = normal(rng);
            double im = normal(rng);
            z(r, c) = cdouble(re, im) / std::sqrt(2.0);
        }
    }
    Eigen::HouseholderQR<CMatrix> qr(z);
    CMatrix q = qr.householderQ();
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        cdouble d = r(i, i);
        double a = std::abs(d);
        q.col(i) *= a > 0 ? d / a : cdouble(1);
    }
    return q;
}

}  // namespace mbcn
