#include "catch_amalgamated.hpp"

#include <cmath>
#include <map>

#include "alevor/meshgen.hpp"
#include "alevor/spacetime.hpp"
#include "alevor/topology.hpp"
#include "oracles.hpp"

using namespace alevor;

namespace {

struct SteppedMesh {
    GeneratorSet gen_n, gen_np1;
    Triangulation tri_n, tri_np1;
    Tessellation tess_n, tess_np1;
    std::vector<TopologyEvent> events;

    SpaceTimeTiling tile(double dt) const {
        return build_spacetime_tiling(tri_n, tess_n, tri_np1, tess_np1,
                                      gen_n.position, gen_np1.position, events, dt);
    }
};

SteppedMesh advance_positions(const GeneratorSet& gen, const Rect& dom_n,
                              const Rect& dom_np1, double dt) {
    SteppedMesh s;
    s.gen_n = gen;
    s.gen_n.domain = dom_n;
    s.gen_np1 = gen;
    s.gen_np1.domain = dom_np1;
    for (int i = 0; i < gen.size(); ++i)
        s.gen_np1.position[i] = gen.position[i] + gen.velocity[i] * dt;
    s.tri_n = delaunay_triangulate(s.gen_n);
    s.tri_np1 = delaunay_triangulate(s.gen_np1);
    s.tess_n = dual_tessellation(s.tri_n, s.gen_n, dom_n);
    s.tess_np1 = dual_tessellation(s.tri_np1, s.gen_np1, dom_np1);
    s.events = diff_connectivity(s.tri_n, s.tri_np1);
    return s;
}

void check_face_bookkeeping(const SpaceTimeTiling& t) {
    // interior faces referenced by exactly two volumes with opposite signs;
    // wall faces by one; sliver faces once by a cell and once by the sliver
    std::vector<int> refs(t.faces.size(), 0);
    std::vector<double> signsum(t.faces.size(), 0.0);
    for (const SpaceTimeVolume& cv : t.cells) {
        REQUIRE(cv.faces.size() == cv.face_sign.size());
        for (std::size_t i = 0; i < cv.faces.size(); ++i) {
            refs[cv.faces[i]] += 1;
            signsum[cv.faces[i]] += cv.face_sign[i];
        }
    }
    std::vector<int> sliver_refs(t.faces.size(), 0);
    for (const SliverVolume& s : t.slivers)
        for (const int f : s.faces) sliver_refs[f] += 1;

    for (std::size_t f = 0; f < t.faces.size(); ++f) {
        const SpaceTimeFace& face = t.faces[f];
        switch (face.other.kind) {
            case VolumeRef::Kind::Cell:
                CHECK(refs[f] == 2);
                CHECK(signsum[f] == 0.0);
                break;
            case VolumeRef::Kind::Wall:
                CHECK(refs[f] == 1);
                CHECK(sliver_refs[f] == 0);
                break;
            case VolumeRef::Kind::Sliver:
                CHECK(refs[f] == 1);
                CHECK(sliver_refs[f] == 1);
                break;
        }
        double min_norm = 2.0, max_norm = 0.0, area = 0.0;
        face_quadrature(face, t.dt, 3, [&](Vec3, double w, Vec3 n) {
            min_norm = std::min(min_norm, n.norm());
            max_norm = std::max(max_norm, n.norm());
            area += w;
        });
        CHECK_THAT(min_norm, Catch::Matchers::WithinAbs(1.0, 1e-13));
        CHECK_THAT(max_norm, Catch::Matchers::WithinAbs(1.0, 1e-13));
        CHECK(area > 0.0);
    }
}

} // namespace

TEST_CASE("diff_connectivity: identical triangulations yield no events") {
    const Rect domain{0, 0, 6, 6};
    const GeneratorSet gen = make_lattice_generators(domain, 6, 6, 0.2, 11);
    const Triangulation a = delaunay_triangulate(gen);
    const Triangulation b = delaunay_triangulate(gen);
    CHECK(diff_connectivity(a, b).empty());
}

TEST_CASE("diff_connectivity: single constructed flip") {
    const Rect domain{-1, -1, 3, 3};
    GeneratorSet a;
    a.domain = domain;
    for (const Vec2 p : {Vec2{0, 0}, Vec2{1, 0}, Vec2{1, 1}, Vec2{0, 1}}) {
        a.position.push_back(p);
        a.velocity.push_back({0, 0});
        a.is_boundary.push_back(false);
    }
    GeneratorSet b = a;
    b.position[2] = {1.4, 1.4}; // pull one corner outward along the diagonal
    const Triangulation ta = delaunay_triangulate(a);
    const Triangulation tb = delaunay_triangulate(b);
    const auto events = diff_connectivity(ta, tb);
    REQUIRE(events.size() == 1);
    CHECK(events[0].quad == std::array<int, 4>{0, 1, 2, 3});
    CHECK(events[0].old_diag == std::pair<int, int>{0, 2});
    CHECK(events[0].new_diag == std::pair<int, int>{1, 3});

    SECTION("swapped arguments give the inverse flip") {
        const auto rev = diff_connectivity(tb, ta);
        REQUIRE(rev.size() == 1);
        CHECK(rev[0].old_diag == std::pair<int, int>{1, 3});
        CHECK(rev[0].new_diag == std::pair<int, int>{0, 2});
    }
}

TEST_CASE("diff_connectivity: non-elementary changes are rejected") {
    // hand-built connectivities: a 4-triangle fan versus a 2-triangle cover
    Triangulation a, b;
    a.tri = {{4, 0, 1}, {4, 1, 2}, {4, 2, 3}, {4, 3, 0}};
    b.tri = {{0, 1, 2}, {0, 2, 3}};
    a.adj.assign(a.tri.size(), {-1, -1, -1});
    b.adj.assign(b.tri.size(), {-1, -1, -1});
    CHECK_THROWS_AS(diff_connectivity(a, b), NonElementaryChange);
}

TEST_CASE("diff_connectivity: lattice step equals the brute-force edge diff") {
    const Rect domain{0, 0, 6, 6};
    GeneratorSet gen = make_lattice_generators(domain, 10, 10, 0.2, 21);
    SplitMix64 rng(99);
    for (int i = 0; i < gen.size(); ++i) {
        if (gen.is_boundary[i]) continue;
        gen.velocity[i] = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    }
    // search a dt that produces at least one elementary event
    for (double dt : {0.3, 0.22, 0.15, 0.1, 0.075, 0.05}) {
        SteppedMesh s;
        try {
            s = advance_positions(gen, domain, domain, dt);
        } catch (const NonElementaryChange&) {
            continue;
        }
        if (s.events.empty()) continue;
        // oracle: removed/added edge sets pair up via shared quadrilaterals
        const auto en = s.tri_n.edge_set();
        const auto enp = s.tri_np1.edge_set();
        std::vector<std::pair<int, int>> removed, added;
        std::set_difference(en.begin(), en.end(), enp.begin(), enp.end(),
                            std::back_inserter(removed));
        std::set_difference(enp.begin(), enp.end(), en.begin(), en.end(),
                            std::back_inserter(added));
        REQUIRE(s.events.size() == removed.size());
        REQUIRE(s.events.size() == added.size());
        for (const TopologyEvent& ev : s.events) {
            CHECK(std::binary_search(removed.begin(), removed.end(), ev.old_diag));
            CHECK(std::binary_search(added.begin(), added.end(), ev.new_diag));
            const std::array<int, 4> q{ev.old_diag.first, ev.old_diag.second,
                                       ev.new_diag.first, ev.new_diag.second};
            auto qs = q;
            std::sort(qs.begin(), qs.end());
            CHECK(qs == ev.quad);
        }
        return; // one hit suffices
    }
    FAIL("no timestep produced an elementary topology change");
}

TEST_CASE("tiling: static mesh gives right prisms with exact measure") {
    const Rect domain{0, 0, 5, 5};
    const GeneratorSet gen = make_lattice_generators(domain, 5, 5, 0.2, 5);
    const double dt = 0.37;
    const SteppedMesh s = advance_positions(gen, domain, domain, dt);
    REQUIRE(s.events.empty());
    const SpaceTimeTiling t = s.tile(dt);
    CHECK_THAT(t.total_volume, Catch::Matchers::WithinRel(domain.area() * dt, 1e-13));
    for (const SpaceTimeVolume& cv : t.cells) {
        CHECK_THAT(cv.volume,
                   Catch::Matchers::WithinRel(s.tess_n.cells[cv.cell].area * dt, 1e-12));
    }
    check_face_bookkeeping(t);
}

TEST_CASE("tiling: uniform translation tilts lateral normals") {
    const Rect domain{0, 0, 4, 4};
    GeneratorSet gen = make_lattice_generators(domain, 4, 4, 0.15, 9);
    const Vec2 V{0.8, -0.45};
    for (int i = 0; i < gen.size(); ++i) gen.velocity[i] = V;
    const double dt = 0.2;
    const Rect dom2 = domain.shifted(V * dt);
    const SteppedMesh s = advance_positions(gen, domain, dom2, dt);
    REQUIRE(s.events.empty());
    const SpaceTimeTiling t = s.tile(dt);
    CHECK_THAT(t.total_volume, Catch::Matchers::WithinRel(domain.area() * dt, 1e-13));
    // volumes match the static case cell by cell
    for (const SpaceTimeVolume& cv : t.cells)
        CHECK_THAT(cv.volume,
                   Catch::Matchers::WithinRel(s.tess_n.cells[cv.cell].area * dt, 1e-12));
    // unit normal satisfies n_t = -(V . n_sp) at every quadrature point
    for (const SpaceTimeFace& f : t.faces) {
        face_quadrature(f, dt, 3, [&](Vec3, double, Vec3 n) {
            CHECK_THAT(n.t, Catch::Matchers::WithinAbs(-(V.x * n.x + V.y * n.y), 1e-12));
        });
    }
    check_face_bookkeeping(t);
}

TEST_CASE("tiling: minimal flip creates exactly one analytic sliver") {
    const Rect domain{0, 0, 3, 2};
    GeneratorSet gen;
    gen.domain = domain;
    auto add = [&](Vec2 p, bool bnd) {
        gen.position.push_back(p);
        gen.velocity.push_back({0, 0});
        gen.is_boundary.push_back(bnd);
    };
    add({0, 0}, true);
    add({3, 0}, true);
    add({3, 2}, true);
    add({0, 2}, true);
    add({1.2, 0.9}, false);
    add({1.8, 1.15}, false);
    // slide one interior generator until exactly one diagonal flips
    const double dt = 0.125;
    gen.velocity[5] = Vec2{0.6, 0.0} / dt;

    const SteppedMesh s = advance_positions(gen, domain, domain, dt);
    REQUIRE(s.events.size() == 1);
    const SpaceTimeTiling t = s.tile(dt);
    REQUIRE(t.slivers.size() == 1);
    const SliverVolume& sl = t.slivers[0];

    // independent tetra volume from the 4 space-time vertices
    const Vec3 v0(sl.p1, 0.0), v1(sl.p2, 0.0), v2(sl.q1, dt), v3(sl.q2, dt);
    const double vol =
        std::abs((v1 - v0).cross(v2 - v0).dot(v3 - v0)) / 6.0;
    CHECK(vol > 0.0);
    CHECK_THAT(sl.volume, Catch::Matchers::WithinRel(vol, 1e-13));

    // zero spatial measure at both levels: bottom and top are proper segments
    CHECK((sl.p2 - sl.p1).norm() > 0.0);
    CHECK((sl.q2 - sl.q1).norm() > 0.0);
    CHECK_THAT(sl.bottom_mid.x, Catch::Matchers::WithinAbs(0.5 * (sl.p1.x + sl.p2.x), 1e-15));

    // closed tiling including the sliver
    CHECK_THAT(t.total_volume, Catch::Matchers::WithinRel(domain.area() * dt, 1e-12));
    check_face_bookkeeping(t);

    SECTION("sliver faces carry the adjacent cells") {
        std::set<int> adj;
        for (const int f : sl.faces) {
            REQUIRE(t.faces[f].other.kind == VolumeRef::Kind::Sliver);
            adj.insert(t.faces[f].owner.idx);
        }
        CHECK(adj == std::set<int>{sl.cells_n[0], sl.cells_n[1], sl.cells_np1[0],
                                   sl.cells_np1[1]});
    }
}

TEST_CASE("tiling: jittered lattice step with flips stays closed") {
    const Rect domain{0, 0, 6, 6};
    GeneratorSet gen = make_lattice_generators(domain, 10, 10, 0.2, 21);
    SplitMix64 rng(99);
    for (int i = 0; i < gen.size(); ++i) {
        if (gen.is_boundary[i]) continue;
        gen.velocity[i] = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    }
    for (double dt : {0.3, 0.22, 0.15, 0.1, 0.075, 0.05}) {
        SteppedMesh s;
        try {
            s = advance_positions(gen, domain, domain, dt);
        } catch (const NonElementaryChange&) {
            continue;
        }
        if (s.events.empty()) continue;
        SpaceTimeTiling t;
        try {
            t = s.tile(dt);
        } catch (const MeshTangling&) {
            continue;
        }
        CHECK(t.slivers.size() == s.events.size());
        CHECK_THAT(t.total_volume, Catch::Matchers::WithinRel(domain.area() * dt, 1e-12));
        check_face_bookkeeping(t);
        return;
    }
    FAIL("no timestep produced a clean flip step");
}

TEST_CASE("quadrature: x*t over the unit right prism") {
    SubPrism p;
    p.bot = {Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}};
    p.top = p.bot;
    double integral = 0.0;
    subprism_quadrature(p, 1.0, 3, [&](Vec3 x, double w) { integral += w * x.x * x.t; });
    CHECK_THAT(integral, Catch::Matchers::WithinRel(1.0 / 12.0, 1e-14)); // (1/6)*(1/2)
}

TEST_CASE("quadrature: constants integrate to the exact measure") {
    SubPrism p;
    p.bot = {Vec2{0.2, 0.1}, Vec2{1.4, 0.3}, Vec2{0.5, 1.2}};
    p.top = {Vec2{0.35, 0.05}, Vec2{1.3, 0.55}, Vec2{0.4, 1.05}};
    const double dt = 0.73;
    for (int N = 0; N <= 3; ++N) {
        double vol = 0.0;
        subprism_quadrature(p, dt, quadrature_degree(N), [&](Vec3, double w) { vol += w; });
        // independent slice-based oracle
        oracles::Poly3 one;
        one.terms.push_back({0, 0, 0, 1.0});
        const double ref = oracles::integrate_poly_over_prism_slices(
            one, {Vec3(p.bot[0], 0), Vec3(p.bot[1], 0), Vec3(p.bot[2], 0)},
            {Vec3(p.top[0], dt), Vec3(p.top[1], dt), Vec3(p.top[2], dt)});
        CHECK_THAT(vol, Catch::Matchers::WithinRel(ref, 1e-13));
        CHECK_THAT(subprism_volume(p, dt), Catch::Matchers::WithinRel(ref, 1e-13));
    }
}

TEST_CASE("quadrature: degenerate sub-prism keeps positive measure") {
    SubPrism p;
    p.bot = {Vec2{0, 0}, Vec2{1, 0}, Vec2{0.4, 0.9}};
    p.top = {Vec2{0.05, -0.02}, Vec2{0.55, 0.4}, Vec2{0.55, 0.4}}; // top edge collapsed
    const double dt = 0.41;
    double vol = 0.0;
    subprism_quadrature(p, dt, 3, [&](Vec3, double w) { vol += w; });
    CHECK(vol > 0.0);
    oracles::Poly3 one;
    one.terms.push_back({0, 0, 0, 1.0});
    const double ref = oracles::integrate_poly_over_prism_slices(
        one, {Vec3(p.bot[0], 0), Vec3(p.bot[1], 0), Vec3(p.bot[2], 0)},
        {Vec3(p.top[0], dt), Vec3(p.top[1], dt), Vec3(p.top[2], dt)});
    CHECK_THAT(vol, Catch::Matchers::WithinRel(ref, 1e-12));
}

TEST_CASE("quadrature: random polynomials over a sliver match the exact oracle") {
    SliverVolume s;
    s.p1 = {0.2, 0.35};
    s.p2 = {0.9, 0.55};
    s.q1 = {0.45, 0.1};
    s.q2 = {0.6, 0.95};
    const double dt = 0.3;
    SplitMix64 rng(4242);
    for (int N = 0; N <= 3; ++N) {
        const int deg = 2 * N + 1;
        oracles::Poly3 poly;
        for (int i = 0; i <= deg; ++i)
            for (int j = 0; i + j <= deg; ++j)
                for (int k = 0; i + j + k <= deg; ++k)
                    poly.terms.push_back({i, j, k, rng.uniform(-1, 1)});
        double integral = 0.0;
        sliver_quadrature(s, dt, quadrature_degree(N),
                          [&](Vec3 x, double w) { integral += w * poly.eval(x); });
        const double ref = oracles::integrate_poly_over_tet(
            poly, {Vec3(s.p1, 0), Vec3(s.p2, 0), Vec3(s.q1, dt), Vec3(s.q2, dt)});
        CHECK_THAT(integral, Catch::Matchers::WithinAbs(ref, 1e-12 * (1.0 + std::abs(ref))));
    }
}

TEST_CASE("quadrature: polynomial exactness on sub-prisms to degree 2N+1") {
    SubPrism p;
    p.bot = {Vec2{0.1, 0.2}, Vec2{1.1, 0.15}, Vec2{0.45, 1.3}};
    p.top = {Vec2{0.2, 0.28}, Vec2{1.02, 0.4}, Vec2{0.6, 1.16}};
    const double dt = 0.52;
    SplitMix64 rng(31337);
    for (int N = 0; N <= 3; ++N) {
        const int deg = 2 * N + 1;
        oracles::Poly3 poly;
        for (int i = 0; i <= deg; ++i)
            for (int j = 0; i + j <= deg; ++j)
                for (int k = 0; i + j + k <= deg; ++k)
                    poly.terms.push_back({i, j, k, rng.uniform(-1, 1)});
        double integral = 0.0;
        subprism_quadrature(p, dt, quadrature_degree(N),
                            [&](Vec3 x, double w) { integral += w * poly.eval(x); });
        const double ref = oracles::integrate_poly_over_prism_slices(
            poly, {Vec3(p.bot[0], 0), Vec3(p.bot[1], 0), Vec3(p.bot[2], 0)},
            {Vec3(p.top[0], dt), Vec3(p.top[1], dt), Vec3(p.top[2], dt)});
        CHECK_THAT(integral, Catch::Matchers::WithinAbs(ref, 1e-12 * (1.0 + std::abs(ref))));
    }
}

TEST_CASE("quadrature: unsupported degree rejected") {
    CHECK_THROWS_AS(quadrature_degree(4), UnsupportedDegree);
    CHECK_THROWS_AS(quadrature_degree(-1), UnsupportedDegree);
}

TEST_CASE("tiling: debug dump lists volumes and pairings") {
    const Rect domain{0, 0, 3, 3};
    const GeneratorSet gen = make_lattice_generators(domain, 3, 3);
    const SteppedMesh s = advance_positions(gen, domain, domain, 0.1);
    const SpaceTimeTiling t = s.tile(0.1);
    std::string dump;
    dump_tiling(t, dump);
    CHECK(dump.find("tiling dt=") == 0);
    CHECK(dump.find("cell 0 ") != std::string::npos);
    CHECK(dump.find("face 0 ") != std::string::npos);
}
