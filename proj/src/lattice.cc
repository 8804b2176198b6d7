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

#include "mbcn/lattice.h"

#include <sstream>

#include "mbcn/error.h"

namespace mbcn {

std::string_view boundary_name(Boundary boundary) {
    switch (boundary) {
        case Boundary::Open:
            return "open";
        case Boundary::CylinderX:
            return "cylinder-x";
        case Boundary::Torus:
            return "torus";
    }
    return "open";
}

Boundary parse_boundary(std::string_view text) {
    if (text == "open") {
        return Boundary::Open;
    }
    if (text == "cylinder-x" || text == "cylinder") {
        return Boundary::CylinderX;
    }
    if (text == "torus") {
        return Boundary::Torus;
    }
    throw Error(ErrorKind::InvalidSpec, "unknown boundary '" + std::string(text) + "'");
}

LatticeGeometry::LatticeGeometry(int n_x, int n_y, Boundary boundary) : n_x(n_x), n_y(n_y), boundary(boundary) {
    if (n_x < 1 || n_y < 1) {
        throw Error(ErrorKind::InvalidSpec, "lattice dimensions must be positive");
    }
    if (n_x * n_y > kMaxSites) {
        throw Error(ErrorKind::Capacity, "lattice has more than 64 sites");
    }
}

Region::Region(const LatticeGeometry &geometry, Coord origin, int extent_x, int extent_y)
    : origin_(origin), extent_x_(extent_x), extent_y_(extent_y) {
    if (extent_x < 1 || extent_y < 1) {
        throw Error(ErrorKind::InvalidSpec, "region extents must be positive");
    }
    if (origin.x < 0 || origin.y < 0 || origin.x + extent_x > geometry.n_x || origin.y + extent_y > geometry.n_y) {
        throw Error(ErrorKind::InvalidSpec, "region " + describe() + " does not fit inside the lattice");
    }
    for (int y = origin.y; y < origin.y + extent_y; ++y) {
        for (int x = origin.x; x < origin.x + extent_x; ++x) {
            int site = geometry.index(x, y);
            sites_.push_back(site);
            mask_ |= Config{1} << site;
        }
    }
}

std::string Region::describe() const {
    std::ostringstream out;
    out << "(" << origin_.x << "," << origin_.y << ")+" << extent_x_ << "x" << extent_y_;
    return out.str();
}

Region whole_lattice(const LatticeGeometry &geometry) {
    return Region(geometry, {0, 0}, geometry.n_x, geometry.n_y);
}

}  // namespace mbcn
