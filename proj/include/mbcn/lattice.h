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

#ifndef MBCN_LATTICE_H
#define MBCN_LATTICE_H

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mbcn {

/// Occupation bitmask over linear site indices. Bit i set means site i holds a boson.
using Config = uint64_t;

constexpr int kMaxSites = 64;

enum class Boundary { Open, CylinderX, Torus };

std::string_view boundary_name(Boundary boundary);
Boundary parse_boundary(std::string_view text);

struct Coord {
    int x;
    int y;
    bool operator==(const Coord &) const = default;
};

/// Rectangular n_x by n_y square lattice. Sites are linearized row-major with x
/// running fastest: index = y * n_x + x.
struct LatticeGeometry {
    int n_x = 1;
    int n_y = 1;
    Boundary boundary = Boundary::Open;

    LatticeGeometry() = default;
    LatticeGeometry(int n_x, int n_y, Boundary boundary);

    int n_sites() const {
        return n_x * n_y;
    }
    int index(int x, int y) const {
        return y * n_x + x;
    }
    int index(Coord c) const {
        return index(c.x, c.y);
    }
    Coord coord(int index) const {
        return {index % n_x, index / n_x};
    }
    bool periodic_x() const {
        return boundary != Boundary::Open;
    }
    bool periodic_y() const {
        return boundary == Boundary::Torus;
    }
};

/// Axis-aligned block of sites. The site list is in the lattice's linear order,
/// which is also the order used for restricted occupation patterns.
class Region {
   public:
    Region() = default;
    Region(const LatticeGeometry &geometry, Coord origin, int extent_x, int extent_y);

    Coord origin() const {
        return origin_;
    }
    int extent_x() const {
        return extent_x_;
    }
    int extent_y() const {
        return extent_y_;
    }
    int size() const {
        return static_cast<int>(sites_.size());
    }
    const std::vector<int> &sites() const {
        return sites_;
    }
    Config mask() const {
        return mask_;
    }
    bool contains(int site) const {
        return (mask_ >> site) & 1;
    }
    bool overlaps(const Region &other) const {
        return (mask_ & other.mask_) != 0;
    }
    std::string describe() const;

   private:
    Coord origin_{0, 0};
    int extent_x_ = 0;
    int extent_y_ = 0;
    std::vector<int> sites_;
    Config mask_ = 0;
};

/// Region covering the whole lattice.
Region whole_lattice(const LatticeGeometry &geometry);

}  // namespace mbcn

#endif
