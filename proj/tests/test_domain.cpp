#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <set>

#include "cardylab/domain.hpp"
#include "oracles.hpp"

using namespace cardylab;

TEST_CASE("marked triangle construction") {
  const MarkedTriangle t = make_marked_triangle({0, 0}, {1, 0}, {0.5, 0.8}, 0.3);
  CHECK(t.diameter() > 0.9);
  CHECK(t.x_param == 0.3);

  CHECK_THROWS_AS(make_marked_triangle({0, 0}, {1, 0}, {2, 0}, 0.5), precondition_error);
  CHECK_THROWS_AS(make_marked_triangle({0, 0}, {1, 0}, {0.5, 0.8}, 0.0), precondition_error);
  CHECK_THROWS_AS(make_marked_triangle({0, 0}, {1, 0}, {0.5, 0.8}, 1.0), precondition_error);
}

TEST_CASE("point-in-triangle with metric tolerance") {
  const Vec2 a{0, 0}, b{1, 0}, c{0.5, 1.0};
  CHECK(point_in_triangle({0.5, 0.3}, a, b, c, 0.0));
  CHECK(point_in_triangle({0.5, 0.0}, a, b, c, 1e-9));
  CHECK(!point_in_triangle({0.5, -1e-6}, a, b, c, 1e-9));
  CHECK(point_in_triangle({0.5, -1e-6}, a, b, c, 1e-5));
  CHECK(!point_in_triangle({2.0, 0.5}, a, b, c, 1e-9));
  // Orientation must not matter.
  CHECK(point_in_triangle({0.5, 0.3}, a, c, b, 0.0));
}

TEST_CASE("standard triangle snaps the base point to a lattice site") {
  const LatticeSpec tri = make_spec(Family::TriangularK, 0.1, 1.0);
  const MarkedTriangle t = standard_triangle(tri, 0.37);
  CHECK(t.x_param_requested == 0.37);
  CHECK(t.x_param == Catch::Approx(0.4).epsilon(0).margin(1e-15));
  CHECK(t.x.x == Catch::Approx(0.4).epsilon(0).margin(1e-15));
  CHECK(t.x.y == 0.0);
  CHECK(t.alpha.x == 0.0);
  CHECK(t.beta.x == Catch::Approx(1.0).epsilon(0).margin(1e-15));
  CHECK(t.gamma.y == Catch::Approx(std::sqrt(3.0) / 2.0).epsilon(0).margin(1e-15));

  // Snapping onto a corner is rejected.
  CHECK_THROWS_AS(standard_triangle(tri, 0.01), precondition_error);
  CHECK_THROWS_AS(standard_triangle(tri, 0.999), precondition_error);
  // No standard triangle for the plain square lattice.
  CHECK_THROWS_AS(standard_triangle(make_spec(Family::Square, 0.1), 0.5),
                  precondition_error);
}

TEST_CASE("standard triangle for the diagonal square lattice") {
  const double delta = 0.125;  // mesh of the coupled triangulation
  const LatticeSpec sne = make_spec(Family::SquareNE, delta / std::numbers::sqrt2);
  const MarkedTriangle t = standard_triangle(sne, 0.25);
  const double c = 1.0 / std::numbers::sqrt2;
  CHECK(t.beta.x == Catch::Approx(c).epsilon(0).margin(1e-15));
  CHECK(t.beta.y == Catch::Approx(c).epsilon(0).margin(1e-15));
  CHECK(t.gamma.x == 0.0);
  CHECK(t.gamma.y == Catch::Approx(c).epsilon(0).margin(1e-15));
  CHECK(t.x_param == Catch::Approx(0.25).epsilon(0).margin(1e-15));
  // x lies on the diagonal at a lattice site.
  CHECK(t.x.x == Catch::Approx(t.x.y).epsilon(0).margin(1e-15));
}

TEST_CASE("six-site classification is fully pinned") {
  const LatticeSpec spec = make_spec(Family::TriangularK, 0.5, 1.0);
  const MarkedTriangle dom = standard_triangle(spec, 0.5);
  const SiteClassification cls = classify(spec, dom);

  REQUIRE(cls.size() == 6);
  // Row-major order and labels, frozen by hand: the base row crosses the
  // arcs ax | bc at the snapped point, the apex and right mid-edge sit on
  // the far arc, the left mid-edge on the near one.
  const std::vector<Site> want_sites = {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {0, 2}};
  const std::vector<int> want_labels = {
      static_cast<int>(Arc::ax), static_cast<int>(Arc::ax), static_cast<int>(Arc::bc),
      static_cast<int>(Arc::ca), static_cast<int>(Arc::bc), static_cast<int>(Arc::bc)};
  for (std::size_t v = 0; v < 6; ++v) {
    CHECK(cls.sites[v] == want_sites[v]);
    CHECK(static_cast<int>(cls.label[v]) == want_labels[v]);
  }
  CHECK(cls.arc_sites[static_cast<int>(Arc::ax)].size() == 2);
  CHECK(cls.arc_sites[static_cast<int>(Arc::xb)].empty());
  CHECK(cls.arc_sites[static_cast<int>(Arc::bc)].size() == 3);
  CHECK(cls.arc_sites[static_cast<int>(Arc::ca)].size() == 1);

  // Adjacency: the interior-free micro domain still forms one component in
  // which (1,0) touches everything except the apex.
  const auto degree = [&cls](std::int32_t v) {
    return cls.adj_offsets[v + 1] - cls.adj_offsets[v];
  };
  CHECK(degree(cls.find(Site{1, 0})) == 4);
  CHECK(degree(cls.find(Site{0, 2})) == 2);
}

TEST_CASE("every boundary site of a standard triangle lies exactly on an arc") {
  for (const double k : {1.0, 2.0}) {
    const LatticeSpec spec = make_spec(Family::TriangularK, 0.1, k);
    const MarkedTriangle dom = standard_triangle(spec, 0.3);
    const SiteClassification cls = classify(spec, dom);
    const double diam = dom.diameter();
    for (std::size_t v = 0; v < cls.size(); ++v) {
      if (cls.label[v] == kInterior) continue;
      const auto seg = dom.arc_segment(static_cast<Arc>(cls.label[v]));
      const double d = dist_point_segment(embed(spec, cls.sites[v]), seg.first, seg.second);
      CHECK(d <= 1e-12 * diam);
    }
  }
}

TEST_CASE("corner sites take the fixed tie-break labels") {
  const LatticeSpec spec = make_spec(Family::TriangularK, 0.1, 1.0);
  const MarkedTriangle dom = standard_triangle(spec, 0.5);
  const SiteClassification cls = classify(spec, dom);
  // alpha and the snapped base point open the near arc; beta and the apex
  // belong to the far arc.
  CHECK(cls.label[cls.find(Site{0, 0})] == static_cast<std::int8_t>(Arc::ax));
  CHECK(cls.label[cls.find(Site{5, 0})] == static_cast<std::int8_t>(Arc::ax));
  CHECK(cls.label[cls.find(Site{10, 0})] == static_cast<std::int8_t>(Arc::bc));
  CHECK(cls.label[cls.find(Site{0, 10})] == static_cast<std::int8_t>(Arc::bc));
  // Just inside the base row next to the snap point, the arc flips.
  CHECK(cls.label[cls.find(Site{4, 0})] == static_cast<std::int8_t>(Arc::ax));
  CHECK(cls.label[cls.find(Site{6, 0})] == static_cast<std::int8_t>(Arc::xb));
}

TEST_CASE("classification structure is invariant under vertical stretch") {
  // The same index set, adjacency, and arc labels must come out for any k:
  // this is the combinatorial identity that makes coupled runs exact.
  const LatticeSpec base = make_spec(Family::TriangularK, 0.1, 1.0);
  const SiteClassification ref = classify(base, standard_triangle(base, 0.3));
  for (const double k : {0.6, 2.0, 5.0}) {
    const LatticeSpec spec = make_spec(Family::TriangularK, 0.1, k);
    const SiteClassification cls = classify(spec, standard_triangle(spec, 0.3));
    INFO("k = " << k);
    CHECK(compare_structure(ref, cls).empty());
  }
}

TEST_CASE("reindexed diagonal square classification matches the triangulation") {
  const double delta = 0.1;
  const LatticeSpec sne = make_spec(Family::SquareNE, delta / std::numbers::sqrt2);
  const LatticeSpec tri = make_spec(Family::TriangularK, delta, 1.0 / std::numbers::sqrt2);
  const MarkedTriangle dom_tri = standard_triangle(tri, 0.25);
  const SiteClassification native = classify(sne, standard_triangle(sne, 0.25));
  const SiteClassification mapped = reindex_sites(native, sne_to_tri_index, tri, dom_tri);
  const SiteClassification direct = classify(tri, dom_tri);
  CHECK(compare_structure(mapped, direct).empty());
}

TEST_CASE("structure comparison reports the first difference") {
  const LatticeSpec spec = make_spec(Family::TriangularK, 0.1, 1.0);
  const SiteClassification a = classify(spec, standard_triangle(spec, 0.3));
  const SiteClassification b = classify(spec, standard_triangle(spec, 0.5));
  const std::string msg = compare_structure(a, b);
  CHECK(!msg.empty());

  const LatticeSpec coarse = make_spec(Family::TriangularK, 0.2, 1.0);
  const SiteClassification c = classify(coarse, standard_triangle(coarse, 0.5));
  CHECK(compare_structure(a, c).find("site count") != std::string::npos);
}

TEST_CASE("reindexing rejects non-injective site maps") {
  const LatticeSpec spec = make_spec(Family::TriangularK, 0.5, 1.0);
  const MarkedTriangle dom = standard_triangle(spec, 0.5);
  const SiteClassification cls = classify(spec, dom);
  CHECK_THROWS_AS(reindex_sites(cls, [](Site) { return Site{0, 0}; }, spec, dom),
                  precondition_error);
}

TEST_CASE("degenerate discretizations are rejected") {
  // A triangle placed away from any lattice site has nothing to classify.
  const LatticeSpec spec = make_spec(Family::TriangularK, 1.0, 1.0);
  const MarkedTriangle off = make_marked_triangle({10.3, 10.31}, {10.42, 10.3},
                                                  {10.35, 10.42}, 0.5);
  CHECK_THROWS_AS(classify(spec, off), precondition_error);
}

TEST_CASE("refining the mesh grows the site count roughly fourfold") {
  std::size_t prev = 0;
  for (const double delta : {0.2, 0.1, 0.05}) {
    const LatticeSpec spec = make_spec(Family::TriangularK, delta, 1.0);
    const SiteClassification cls = classify(spec, standard_triangle(spec, 0.5));
    if (prev > 0) {
      CHECK(cls.size() > 3 * prev);
      CHECK(cls.size() < 5 * prev);
    }
    prev = cls.size();
  }
}

TEST_CASE("arc sites agree with labels") {
  const LatticeSpec spec = make_spec(Family::TriangularK, 0.05, 1.0);
  const SiteClassification cls = classify(spec, standard_triangle(spec, 0.25));
  std::size_t labelled = 0;
  for (int arc = 0; arc < 4; ++arc) {
    for (const std::int32_t v : cls.arc_sites[arc]) {
      CHECK(static_cast<int>(cls.label[v]) == arc);
      ++labelled;
    }
  }
  std::size_t boundary = 0;
  for (std::size_t v = 0; v < cls.size(); ++v) {
    if (cls.label[v] != kInterior) ++boundary;
  }
  CHECK(labelled == boundary);
  CHECK(boundary < cls.size());  // interior is non-empty at this mesh
}
