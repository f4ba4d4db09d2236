#pragma once

#include "veerweave/numeric.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace veerweave {

// Raised on malformed input documents (syntax, ranges, bad bijections,
// inconsistent gluings). Semantic failures go into ValidationReport instead.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when an operation is invoked on input violating its preconditions.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Vertex-label bijection {0,1,2,3} -> {0,1,2,3}.
struct Perm4 {
    std::array<int, 4> map{0, 1, 2, 3};

    int operator[](int i) const { return map[static_cast<std::size_t>(i)]; }

    bool is_bijection() const {
        std::array<bool, 4> seen{};
        for (int i = 0; i < 4; ++i) {
            int m = map[static_cast<std::size_t>(i)];
            if (m < 0 || m > 3 || seen[static_cast<std::size_t>(m)]) return false;
            seen[static_cast<std::size_t>(m)] = true;
        }
        return true;
    }

    bool odd() const {
        int inv = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (map[static_cast<std::size_t>(i)] > map[static_cast<std::size_t>(j)]) ++inv;
        return inv % 2 == 1;
    }

    Perm4 inverse() const {
        Perm4 r;
        for (int i = 0; i < 4; ++i) r.map[static_cast<std::size_t>(map[static_cast<std::size_t>(i)])] = i;
        return r;
    }

    bool operator==(const Perm4& o) const { return map == o.map; }
};

struct Gluing {
    int tet = -1;
    int face = -1;
    Perm4 perm;  // label map, source labels -> target labels; perm[source face] == target face
};

using VertexPair = std::array<int, 2>;  // sorted

inline VertexPair make_pair_sorted(int a, int b) {
    return a < b ? VertexPair{a, b} : VertexPair{b, a};
}

inline VertexPair complement_pair(const VertexPair& p) {
    VertexPair r{-1, -1};
    int k = 0;
    for (int v = 0; v < 4; ++v)
        if (v != p[0] && v != p[1]) r[static_cast<std::size_t>(k++)] = v;
    return r;
}

struct Tetrahedron {
    int id = -1;
    VertexPair top_edge{0, 1};
    std::array<Gluing, 4> gluings;

    VertexPair bottom_edge() const { return complement_pair(top_edge); }

    // Face i is opposite vertex i. The two faces containing the top edge are
    // the ones opposite the bottom-edge vertices; those are the top faces,
    // cooriented outward. Angles: pi on top/bottom vertex pairs, 0 on the
    // four equatorial pairs (stored implicitly).
    bool is_top_face(int face) const {
        VertexPair b = bottom_edge();
        return face == b[0] || face == b[1];
    }
    bool is_pi_pair(const VertexPair& p) const {
        return p == top_edge || p == bottom_edge();
    }
};

// One corner of the cyclic link of an edge class: tetrahedron `tet` meets the
// edge along vertex pair `pair`; the walk enters through face `enter` and
// leaves through face `exit`. ends[0]/ends[1] are the vertex labels carrying
// the two ends of the edge at this corner (end 0 is consistent along the walk).
struct EdgeCorner {
    int tet = -1;
    VertexPair pair{-1, -1};
    int enter = -1;
    int exit = -1;
    std::array<int, 2> ends{-1, -1};
    bool is_pi = false;
};

struct EdgeClass {
    int id = -1;
    std::vector<EdgeCorner> corners;        // cyclic walk order
    std::vector<int> faces_between;         // face class between corner i and i+1 (size = degree)
    std::vector<bool> walk_cooriented;      // faces_between[i] cooriented along the walk?
    int degree() const { return static_cast<int>(corners.size()); }

    // Filled during validation (valid only if the relevant checks passed).
    int top_of_tet = -1;     // unique tet having this edge as its top edge
    int bottom_of_tet = -1;  // unique tet having this edge as its bottom edge
    int pi_corner_top = -1;     // corner index whose pair is its tet's top edge
    int pi_corner_bottom = -1;  // corner index whose pair is its tet's bottom edge
    int veer = -1;  // 0 = red, 1 = blue (assigned by derive_veers)
};

struct FaceClass {
    int id = -1;
    // slot = (tet, face index); slot_top is the instance that is a top face of
    // its tetrahedron, slot_bottom the other one (set when coorientations are
    // consistent). below/above are the tetrahedra on the two sides of the
    // coorientation: the coorientation points out of `below` into `above`.
    std::array<int, 2> tets{-1, -1};
    std::array<int, 2> faces{-1, -1};
    int below = -1;
    int above = -1;
};

struct CheckResult {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool valid = false;

    const CheckResult* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

// Edge veer colors.
inline constexpr int kRed = 0;
inline constexpr int kBlue = 1;

class VeeringTriangulation {
  public:
    std::vector<Tetrahedron> tets;
    std::vector<FaceClass> faces;     // 2N face classes
    std::vector<EdgeClass> edges;     // edge classes (orbit count; N when valid)
    ValidationReport report;

    int num_tets() const { return static_cast<int>(tets.size()); }
    int num_faces() const { return static_cast<int>(faces.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }
    bool validated() const { return report.valid; }

    int face_class_of(int tet, int face) const { return face_class_[slot(tet, face)]; }
    int edge_class_of(int tet, const VertexPair& pair) const;
    // index of (tet,face) within its face class slot list (0 or 1)
    int face_slot_index(int tet, int face) const;

    void require_valid(const char* op) const {
        if (!report.valid) throw InputError(std::string(op) + ": triangulation failed validation");
    }

    static int slot(int tet, int face) { return 4 * tet + face; }

    // internals used by builders
    std::vector<int> face_class_;                       // slot -> face class id
    std::map<std::pair<int, VertexPair>, int> edge_of_; // (tet,pair) -> edge class id
};

// Parse the UTF-8 ".vtri" JSON document. Structural checks only; semantic
// validation is validate().
VeeringTriangulation parse_triangulation(const std::string& text);

// Canonical serialization; parse(serialize(t)) reproduces the structure.
std::string serialize_triangulation(const VeeringTriangulation& tri);

// Run all semantic checks and store the report on the object.
ValidationReport validate(VeeringTriangulation& tri);

// Per-tetrahedron veer constraints. With the even vertex ordering
// (b0,b1,t0,t1), the equatorial pairs {b0,t0},{b1,t1} share a color and the
// pairs {b0,t1},{b1,t0} share the opposite color.
struct VeerConstraints {
    // per tet: edge classes of the even pair and of the odd pair
    std::vector<std::array<int, 2>> even_pair;
    std::vector<std::array<int, 2>> odd_pair;
};

VeerConstraints veer_constraints(const VeeringTriangulation& tri);

// True iff `colors` (edge -> {kRed,kBlue}) satisfies the un-calibrated
// same/different constraint system.
bool satisfies_veer_constraints(const VeeringTriangulation& tri, const std::vector<int>& colors);

// Solve the veer 2-coloring. Calibration: the even-ordered equatorial pair is
// red (see fixtures/README for the provenance of this choice). Throws
// InputError("taut but not veering") when the system is unsatisfiable.
std::vector<int> derive_veers(const VeeringTriangulation& tri);

// The two fans of face incidences at an edge, each listed from the
// top-edge pi-corner (the tetrahedron below the edge) toward the bottom-edge
// pi-corner. Entries are positions into edge.faces_between.
struct EdgeFans {
    std::vector<int> fan_a;
    std::vector<int> fan_b;
};

EdgeFans edge_fans(const VeeringTriangulation& tri, int edge_id);

}  // namespace veerweave
