#include "veerweave/triangulation.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>
#include <sstream>

namespace veerweave {

using nlohmann::json;

int VeeringTriangulation::edge_class_of(int tet, const VertexPair& pair) const {
    auto it = edge_of_.find({tet, pair});
    if (it == edge_of_.end()) throw InputError("unknown (tet, vertex pair)");
    return it->second;
}

int VeeringTriangulation::face_slot_index(int tet, int face) const {
    const FaceClass& fc = faces[static_cast<std::size_t>(face_class_of(tet, face))];
    for (int k = 0; k < 2; ++k)
        if (fc.tets[static_cast<std::size_t>(k)] == tet && fc.faces[static_cast<std::size_t>(k)] == face) return k;
    throw InputError("face slot not found in its class");
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

void build_face_classes(VeeringTriangulation& tri) {
    int n = tri.num_tets();
    tri.face_class_.assign(static_cast<std::size_t>(4 * n), -1);
    int next = 0;
    for (int t = 0; t < n; ++t) {
        for (int f = 0; f < 4; ++f) {
            int s = VeeringTriangulation::slot(t, f);
            if (tri.face_class_[static_cast<std::size_t>(s)] >= 0) continue;
            const Gluing& g = tri.tets[static_cast<std::size_t>(t)].gluings[static_cast<std::size_t>(f)];
            FaceClass fc;
            fc.id = next;
            fc.tets = {t, g.tet};
            fc.faces = {f, g.face};
            tri.face_class_[static_cast<std::size_t>(s)] = next;
            tri.face_class_[static_cast<std::size_t>(VeeringTriangulation::slot(g.tet, g.face))] = next;
            tri.faces.push_back(fc);
            ++next;
        }
    }
}

// Walk the link of each edge. Corners of one edge are visited cyclically:
// from corner (tet, {i,j}) leaving through face g (one of the complementary
// labels), the gluing carries us to (tet', {p[i],p[j]}) entered through
// face p[g]; we leave through the image of the other complementary label.
void build_edge_classes(VeeringTriangulation& tri) {
    tri.edges.clear();
    tri.edge_of_.clear();
    std::set<std::pair<int, VertexPair>> seen;
    for (int t0 = 0; t0 < tri.num_tets(); ++t0) {
        for (int a = 0; a < 4; ++a) {
            for (int b = a + 1; b < 4; ++b) {
                VertexPair start_pair{a, b};
                if (seen.count({t0, start_pair})) continue;
                EdgeClass e;
                e.id = static_cast<int>(tri.edges.size());

                VertexPair comp = complement_pair(start_pair);
                int start_exit = comp[0];
                int start_enter = comp[1];

                int t = t0;
                std::array<int, 2> ends{a, b};
                int enter = start_enter;
                int exit = start_exit;
                while (true) {
                    EdgeCorner c;
                    c.tet = t;
                    c.pair = make_pair_sorted(ends[0], ends[1]);
                    c.enter = enter;
                    c.exit = exit;
                    c.ends = ends;
                    c.is_pi = tri.tets[static_cast<std::size_t>(t)].is_pi_pair(c.pair);
                    e.corners.push_back(c);
                    seen.insert({t, c.pair});
                    tri.edge_of_[{t, c.pair}] = e.id;
                    e.faces_between.push_back(tri.face_class_of(t, exit));
                    e.walk_cooriented.push_back(tri.tets[static_cast<std::size_t>(t)].is_top_face(exit));

                    const Gluing& g = tri.tets[static_cast<std::size_t>(t)].gluings[static_cast<std::size_t>(exit)];
                    std::array<int, 2> nends{g.perm[ends[0]], g.perm[ends[1]]};
                    int nenter = g.perm[exit];
                    int nt = g.tet;
                    VertexPair npair = make_pair_sorted(nends[0], nends[1]);
                    VertexPair ncomp = complement_pair(npair);
                    int nexit = (ncomp[0] == nenter) ? ncomp[1] : ncomp[0];
                    t = nt;
                    ends = nends;
                    enter = nenter;
                    exit = nexit;
                    if (t == t0 && make_pair_sorted(ends[0], ends[1]) == start_pair && enter == start_enter) break;
                    if (e.corners.size() > static_cast<std::size_t>(24 * tri.num_tets()))
                        fail("edge walk does not close; inconsistent gluings");
                }
                tri.edges.push_back(std::move(e));
            }
        }
    }
}

struct ParityDSU {
    // union-find with parity: par[i] relative color of i vs its parent
    std::vector<int> parent, rank_, par;
    explicit ParityDSU(int n) : parent(static_cast<std::size_t>(n)), rank_(static_cast<std::size_t>(n), 0), par(static_cast<std::size_t>(n), 0) {
        for (int i = 0; i < n; ++i) parent[static_cast<std::size_t>(i)] = i;
    }
    std::pair<int, int> find(int x) {
        if (parent[static_cast<std::size_t>(x)] == x) return {x, 0};
        auto [r, p] = find(parent[static_cast<std::size_t>(x)]);
        parent[static_cast<std::size_t>(x)] = r;
        par[static_cast<std::size_t>(x)] ^= p;
        return {r, par[static_cast<std::size_t>(x)]};
    }
    // returns false on contradiction; rel = required parity between a and b
    bool unite(int a, int b, int rel) {
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        if (ra == rb) return (pa ^ pb) == rel;
        if (rank_[static_cast<std::size_t>(ra)] < rank_[static_cast<std::size_t>(rb)]) {
            std::swap(ra, rb);
            std::swap(pa, pb);
        }
        parent[static_cast<std::size_t>(rb)] = ra;
        par[static_cast<std::size_t>(rb)] = pa ^ pb ^ rel;
        if (rank_[static_cast<std::size_t>(ra)] == rank_[static_cast<std::size_t>(rb)]) ++rank_[static_cast<std::size_t>(ra)];
        return true;
    }
};

}  // namespace

VeeringTriangulation parse_triangulation(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        fail(std::string("JSON syntax error: ") + e.what());
    }
    if (!doc.is_object()) fail("document is not a JSON object");
    if (!doc.contains("tets") || !doc["tets"].is_number_integer()) fail("missing integer field 'tets'");
    int n = doc["tets"].get<int>();
    if (n <= 0) fail("'tets' must be positive");
    if (!doc.contains("top_edges") || !doc["top_edges"].is_array() || doc["top_edges"].size() != static_cast<std::size_t>(n))
        fail("'top_edges' must list one vertex pair per tetrahedron");
    if (!doc.contains("gluings") || !doc["gluings"].is_array() || doc["gluings"].size() != static_cast<std::size_t>(n))
        fail("'gluings' must list four gluings per tetrahedron");

    VeeringTriangulation tri;
    tri.tets.resize(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        Tetrahedron& tet = tri.tets[static_cast<std::size_t>(t)];
        tet.id = t;
        const json& te = doc["top_edges"][static_cast<std::size_t>(t)];
        if (!te.is_array() || te.size() != 2 || !te[0].is_number_integer() || !te[1].is_number_integer())
            fail("top_edges[" + std::to_string(t) + "] is not a vertex pair");
        int u = te[0].get<int>(), v = te[1].get<int>();
        if (u < 0 || u > 3 || v < 0 || v > 3 || u == v)
            fail("top_edges[" + std::to_string(t) + "] is not a pair of distinct labels in 0..3");
        tet.top_edge = make_pair_sorted(u, v);

        const json& gl = doc["gluings"][static_cast<std::size_t>(t)];
        if (!gl.is_array() || gl.size() != 4) fail("gluings[" + std::to_string(t) + "] must have 4 entries");
        for (int f = 0; f < 4; ++f) {
            const json& e = gl[static_cast<std::size_t>(f)];
            if (!e.is_array() || e.size() != 3) fail("gluing entry must be [tet, face, perm]");
            if (!e[0].is_number_integer() || !e[1].is_number_integer() || !e[2].is_array() || e[2].size() != 4)
                fail("gluing entry must be [tet, face, [p0,p1,p2,p3]]");
            Gluing g;
            g.tet = e[0].get<int>();
            g.face = e[1].get<int>();
            if (g.tet < 0 || g.tet >= n) fail("gluing target tet id out of range");
            if (g.face < 0 || g.face > 3) fail("gluing target face index out of range");
            for (int k = 0; k < 4; ++k) {
                if (!e[2][static_cast<std::size_t>(k)].is_number_integer()) fail("gluing permutation entries must be integers");
                g.perm.map[static_cast<std::size_t>(k)] = e[2][static_cast<std::size_t>(k)].get<int>();
            }
            if (!g.perm.is_bijection())
                fail("gluing of tet " + std::to_string(t) + " face " + std::to_string(f) + ": vertex map is not a bijection");
            if (g.perm[f] != g.face)
                fail("gluing of tet " + std::to_string(t) + " face " + std::to_string(f) +
                     ": vertex map does not carry the face onto the target face");
            if (g.tet == t && g.face == f) fail("face glued to itself");
            tet.gluings[static_cast<std::size_t>(f)] = g;
        }
    }

    // gluings must pair faces off mutually (else some face is glued twice)
    for (int t = 0; t < n; ++t) {
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = tri.tets[static_cast<std::size_t>(t)].gluings[static_cast<std::size_t>(f)];
            const Gluing& back = tri.tets[static_cast<std::size_t>(g.tet)].gluings[static_cast<std::size_t>(g.face)];
            if (back.tet != t || back.face != f)
                fail("duplicate gluing: tet " + std::to_string(g.tet) + " face " + std::to_string(g.face) +
                     " is claimed by more than one face");
            if (!(back.perm == g.perm.inverse()))
                fail("inconsistent gluing: maps across tet " + std::to_string(t) + " face " + std::to_string(f) +
                     " are not mutually inverse");
        }
    }

    build_face_classes(tri);
    build_edge_classes(tri);
    return tri;
}

std::string serialize_triangulation(const VeeringTriangulation& tri) {
    json doc;
    doc["tets"] = tri.num_tets();
    json tops = json::array();
    json gls = json::array();
    for (const Tetrahedron& t : tri.tets) {
        tops.push_back({t.top_edge[0], t.top_edge[1]});
        json row = json::array();
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = t.gluings[static_cast<std::size_t>(f)];
            row.push_back({g.tet, g.face, {g.perm[0], g.perm[1], g.perm[2], g.perm[3]}});
        }
        gls.push_back(row);
    }
    doc["top_edges"] = tops;
    doc["gluings"] = gls;
    return doc.dump();
}

VeerConstraints veer_constraints(const VeeringTriangulation& tri) {
    VeerConstraints vc;
    for (const Tetrahedron& t : tri.tets) {
        VertexPair bot = t.bottom_edge();
        VertexPair top = t.top_edge;
        int b0 = bot[0], b1 = bot[1], t0 = top[0], t1 = top[1];
        // make (b0,b1,t0,t1) an even permutation of (0,1,2,3)
        Perm4 q;
        q.map = {b0, b1, t0, t1};
        if (q.odd()) std::swap(t0, t1);
        vc.even_pair.push_back({tri.edge_class_of(t.id, make_pair_sorted(b0, t0)),
                                tri.edge_class_of(t.id, make_pair_sorted(b1, t1))});
        vc.odd_pair.push_back({tri.edge_class_of(t.id, make_pair_sorted(b0, t1)),
                               tri.edge_class_of(t.id, make_pair_sorted(b1, t0))});
    }
    return vc;
}

bool satisfies_veer_constraints(const VeeringTriangulation& tri, const std::vector<int>& colors) {
    VeerConstraints vc = veer_constraints(tri);
    for (std::size_t t = 0; t < vc.even_pair.size(); ++t) {
        int e0 = colors[static_cast<std::size_t>(vc.even_pair[t][0])];
        int e1 = colors[static_cast<std::size_t>(vc.even_pair[t][1])];
        int o0 = colors[static_cast<std::size_t>(vc.odd_pair[t][0])];
        int o1 = colors[static_cast<std::size_t>(vc.odd_pair[t][1])];
        if (e0 != e1 || o0 != o1 || e0 == o0) return false;
    }
    return true;
}

std::vector<int> derive_veers(const VeeringTriangulation& tri) {
    // Calibrated system: every even-ordered equatorial pair is red, every odd
    // pair blue. Solving with literals is a direct assignment plus a
    // consistency sweep; the parity DSU handles the un-calibrated part of the
    // relabeling-invariance argument for free.
    VeerConstraints vc = veer_constraints(tri);
    std::vector<int> colors(static_cast<std::size_t>(tri.num_edges()), -1);
    auto assign = [&](int e, int c) {
        int& cur = colors[static_cast<std::size_t>(e)];
        if (cur == -1) {
            cur = c;
            return true;
        }
        return cur == c;
    };
    for (std::size_t t = 0; t < vc.even_pair.size(); ++t) {
        bool ok = assign(vc.even_pair[t][0], kRed) && assign(vc.even_pair[t][1], kRed) &&
                  assign(vc.odd_pair[t][0], kBlue) && assign(vc.odd_pair[t][1], kBlue);
        if (!ok) throw InputError("taut but not veering: veer constraint system is unsatisfiable");
    }
    // Edges never appearing in an equatorial position would be uncolored;
    // that cannot happen on taut-valid input (every edge has 0-corners once
    // degree > 2), but keep the output total.
    for (int& c : colors)
        if (c == -1) c = kRed;
    return colors;
}

EdgeFans edge_fans(const VeeringTriangulation& tri, int edge_id) {
    const EdgeClass& e = tri.edges[static_cast<std::size_t>(edge_id)];
    if (e.pi_corner_top < 0 || e.pi_corner_bottom < 0)
        throw InputError("edge_fans: edge lacks the two pi-corners (triangulation not validated)");
    EdgeFans fans;
    int d = e.degree();
    // fan A: faces from the top-edge pi-corner forward to the bottom-edge one
    for (int i = e.pi_corner_top; i != e.pi_corner_bottom; i = (i + 1) % d) fans.fan_a.push_back(i);
    for (int i = e.pi_corner_bottom; i != e.pi_corner_top; i = (i + 1) % d) fans.fan_b.push_back(i);
    return fans;
}

ValidationReport validate(VeeringTriangulation& tri) {
    ValidationReport rep;
    auto add = [&rep](const std::string& name, bool ok, const std::string& detail) {
        rep.checks.push_back({name, ok, ok ? "" : detail});
    };

    // orientability: every gluing's 4-label extension is odd
    {
        bool ok = true;
        std::string detail;
        for (const Tetrahedron& t : tri.tets)
            for (int f = 0; f < 4; ++f)
                if (!t.gluings[static_cast<std::size_t>(f)].perm.odd() && ok) {
                    ok = false;
                    detail = "gluing of tet " + std::to_string(t.id) + " face " + std::to_string(f) +
                             " extends to an even permutation";
                }
        add("orientability", ok, detail);
    }

    // cell counts forced by chi = 0
    add("edge_count", tri.num_edges() == tri.num_tets(),
        "expected " + std::to_string(tri.num_tets()) + " edges, found " + std::to_string(tri.num_edges()));

    // taut angle sums: exactly two pi-corners per edge
    {
        bool ok = true;
        std::string detail;
        for (const EdgeClass& e : tri.edges) {
            int pis = 0;
            for (const EdgeCorner& c : e.corners) pis += c.is_pi ? 1 : 0;
            if (pis != 2 && ok) {
                ok = false;
                detail = "edge " + std::to_string(e.id) + " has " + std::to_string(pis) + " pi-corners";
            }
        }
        add("angle_sums", ok, detail);
    }

    // each edge is the top edge of exactly one tet and the bottom of exactly one
    {
        bool ok = true;
        std::string detail;
        for (EdgeClass& e : tri.edges) {
            int tops = 0, bots = 0;
            for (std::size_t i = 0; i < e.corners.size(); ++i) {
                const EdgeCorner& c = e.corners[i];
                const Tetrahedron& t = tri.tets[static_cast<std::size_t>(c.tet)];
                if (c.pair == t.top_edge) {
                    ++tops;
                    e.top_of_tet = c.tet;
                    e.pi_corner_top = static_cast<int>(i);
                }
                if (c.pair == t.bottom_edge()) {
                    ++bots;
                    e.bottom_of_tet = c.tet;
                    e.pi_corner_bottom = static_cast<int>(i);
                }
            }
            if ((tops != 1 || bots != 1) && ok) {
                ok = false;
                detail = "edge " + std::to_string(e.id) + " is a top edge " + std::to_string(tops) +
                         " times and a bottom edge " + std::to_string(bots) + " times";
            }
        }
        add("top_bottom_uniqueness", ok, detail);
    }

    // each face class has one top-face instance and one bottom-face instance
    {
        bool ok = true;
        std::string detail;
        for (FaceClass& fc : tri.faces) {
            bool top0 = tri.tets[static_cast<std::size_t>(fc.tets[0])].is_top_face(fc.faces[0]);
            bool top1 = tri.tets[static_cast<std::size_t>(fc.tets[1])].is_top_face(fc.faces[1]);
            if (top0 == top1) {
                if (ok) {
                    ok = false;
                    detail = "face " + std::to_string(fc.id) + " is a " + (top0 ? "top" : "bottom") +
                             " face of both adjacent tetrahedra";
                }
            } else {
                fc.below = top0 ? fc.tets[0] : fc.tets[1];
                fc.above = top0 ? fc.tets[1] : fc.tets[0];
            }
        }
        add("coorientation", ok, detail);
    }

    // fan coherence: walking from the top-edge pi-corner to the bottom-edge
    // pi-corner, faces point along the walk; on the return arc, against it.
    {
        bool ok = rep.find("angle_sums")->passed && rep.find("top_bottom_uniqueness")->passed;
        std::string detail = ok ? "" : "skipped: taut structure invalid";
        if (ok) {
            for (const EdgeClass& e : tri.edges) {
                int d = e.degree();
                for (int i = e.pi_corner_top; i != e.pi_corner_bottom; i = (i + 1) % d)
                    if (!e.walk_cooriented[static_cast<std::size_t>(i)] && ok) {
                        ok = false;
                        detail = "edge " + std::to_string(e.id) + ": fan A face not cooriented toward the top";
                    }
                for (int i = e.pi_corner_bottom; i != e.pi_corner_top; i = (i + 1) % d)
                    if (e.walk_cooriented[static_cast<std::size_t>(i)] && ok) {
                        ok = false;
                        detail = "edge " + std::to_string(e.id) + ": fan B face not cooriented toward the top";
                    }
            }
        }
        add("fan_coherence", ok, detail);
    }

    // veer 2-coloring
    {
        bool prereq = true;
        for (const CheckResult& c : rep.checks) prereq = prereq && c.passed;
        bool ok = prereq;
        std::string detail = prereq ? "" : "skipped: earlier checks failed";
        if (prereq) {
            try {
                std::vector<int> colors = derive_veers(tri);
                for (std::size_t i = 0; i < colors.size(); ++i)
                    tri.edges[i].veer = colors[i];
            } catch (const InputError& e) {
                ok = false;
                detail = e.what();
            }
        }
        add("veer_colorability", ok, detail);
    }

    rep.valid = true;
    for (const CheckResult& c : rep.checks) rep.valid = rep.valid && c.passed;
    tri.report = rep;
    return rep;
}

}  // namespace veerweave
