#pragma once

// Lattice families and their planar embeddings.
//
// All families share one integer index scheme (i: column, j: row) so that
// estimates on different families can be coupled site-for-site:
//
//   Square, SquareNE    (i, j) -> (delta * i, delta * j)
//   triangular families (i, j) -> (delta * (i + j/2), delta * h(k) * j)
//
// where h(k) = sqrt(k^2 - 1/4) is the row height of the isosceles cell with
// base delta and legs k*delta. TriangularK is the full triangulation; TriNE,
// TriNW and TriH keep only two of its three edge directions. SquareNE is the
// square lattice plus north-east diagonals; rotating its embedding by -pi/4
// carries it exactly onto the k = 1/sqrt(2) triangular embedding.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <queue>
#include <span>
#include <string_view>
#include <vector>

#include "cardylab/errors.hpp"
#include "cardylab/geom.hpp"

namespace cardylab {

struct Site {
  std::int32_t i = 0;
  std::int32_t j = 0;

  friend constexpr bool operator==(Site, Site) = default;
};

// Canonical site order used everywhere a deterministic ordering is needed.
constexpr bool row_major_less(Site a, Site b) {
  return a.j != b.j ? a.j < b.j : a.i < b.i;
}

enum class Family { Square, TriangularK, SquareNE, TriNE, TriNW, TriH };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Square: return "Square";
    case Family::TriangularK: return "TriangularK";
    case Family::SquareNE: return "SquareNE";
    case Family::TriNE: return "TriNE";
    case Family::TriNW: return "TriNW";
    case Family::TriH: return "TriH";
  }
  return "?";
}

inline std::optional<Family> family_from_name(std::string_view name) {
  if (name == "Square") return Family::Square;
  if (name == "TriangularK") return Family::TriangularK;
  if (name == "SquareNE") return Family::SquareNE;
  if (name == "TriNE") return Family::TriNE;
  if (name == "TriNW") return Family::TriNW;
  if (name == "TriH") return Family::TriH;
  return std::nullopt;
}

constexpr bool triangular_embedding(Family f) {
  return f == Family::TriangularK || f == Family::TriNE || f == Family::TriNW ||
         f == Family::TriH;
}

// Row height of the unit-base isosceles cell; defined for k > 1/2 only.
inline double unit_row_height(double k) {
  if (!(k > 0.5)) throw precondition_error("lattice: aspect ratio k must exceed 1/2");
  return std::sqrt(k * k - 0.25);
}

// Vertical factor taking the equilateral embedding to the k-embedding:
// s(k) = 2 h(k) / sqrt(3); s(1) = 1.
inline double stretch_factor(double k) {
  return 2.0 * unit_row_height(k) / std::numbers::sqrt3;
}

struct LatticeFamily {
  Family tag = Family::TriangularK;
  double k = 1.0;  // leg/base ratio; only TriangularK varies it
};

inline LatticeFamily make_family(Family tag, double k = 1.0) {
  if (tag == Family::TriangularK) {
    if (!(k > 0.5)) throw precondition_error("lattice: aspect ratio k must exceed 1/2");
    return {tag, k};
  }
  return {tag, 1.0};
}

struct LatticeSpec {
  LatticeFamily family;
  double delta = 1.0;

  double row_height() const { return delta * unit_row_height(family.k); }
};

inline LatticeSpec make_spec(Family tag, double delta, double k = 1.0) {
  if (!(delta > 0.0)) throw precondition_error("lattice: mesh delta must be positive");
  return {make_family(tag, k), delta};
}

inline Vec2 embed(const LatticeSpec& spec, Site s) {
  const double d = spec.delta;
  if (triangular_embedding(spec.family.tag)) {
    return {d * (s.i + 0.5 * s.j), d * unit_row_height(spec.family.k) * s.j};
  }
  return {d * s.i, d * s.j};
}

// Edge offsets; every set is closed under negation.
inline std::span<const Site> neighbor_offsets(Family f) {
  static constexpr Site square[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  static constexpr Site triangular[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {-1, 1}, {1, -1}};
  static constexpr Site square_ne[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}};
  static constexpr Site tri_ne[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  static constexpr Site tri_nw[] = {{1, 0}, {-1, 0}, {-1, 1}, {1, -1}};
  static constexpr Site tri_h[] = {{0, 1}, {0, -1}, {-1, 1}, {1, -1}};
  switch (f) {
    case Family::Square: return square;
    case Family::TriangularK: return triangular;
    case Family::SquareNE: return square_ne;
    case Family::TriNE: return tri_ne;
    case Family::TriNW: return tri_nw;
    case Family::TriH: return tri_h;
  }
  return {};
}

// Linear map sending the equilateral embedding onto the k-embedding,
// index-for-index: diag(1, s(k)).
inline LinearMap family_map(double k) { return LinearMap::diagonal(1.0, stretch_factor(k)); }

// Rotation by -pi/4. Applied to the SquareNE embedding of mesh d it yields
// the TriangularK(k = 1/sqrt(2)) embedding of mesh d*sqrt(2), site-for-site
// under the index bijection below.
inline LinearMap rotation_map() {
  constexpr double inv_sqrt2 = 0.7071067811865475244;
  return {inv_sqrt2, inv_sqrt2, -inv_sqrt2, inv_sqrt2};
}

// Index bijection realising that rotation: SquareNE (i, j) corresponds to
// triangular (i, j - i).
constexpr Site sne_to_tri_index(Site s) { return {s.i, s.j - s.i}; }
constexpr Site tri_to_sne_index(Site s) { return {s.i, s.j + s.i}; }

// ---------------------------------------------------------------------------
// Graph requirement checks on a finite index window.

struct PeriodCheck {
  Vec2 vector;
  bool is_period = false;
};

struct GraphRequirementsReport {
  int window_radius = 0;
  std::size_t window_sites = 0;
  int degree = 0;
  int degree_bound = 6;
  bool degree_bounded = false;   // requirement (1)
  bool offsets_symmetric = false;
  double max_edge_length = 0.0;
  double edge_length_bound = 0.0;
  bool locally_finite = false;   // requirement (2)
  double sites_per_unit_area = 0.0;
  bool window_connected = false;  // requirement (3)
  std::vector<PeriodCheck> period_checks;

  bool requirements_met() const {
    return degree_bounded && offsets_symmetric && locally_finite && window_connected;
  }
};

// True when the embedded vertex set has a site at p (up to 1e-9 * delta).
inline bool has_site_at(const LatticeSpec& spec, Vec2 p) {
  double fi = 0.0, fj = 0.0;
  if (triangular_embedding(spec.family.tag)) {
    fj = p.y / spec.row_height();
    fi = p.x / spec.delta - 0.5 * fj;
  } else {
    fi = p.x / spec.delta;
    fj = p.y / spec.delta;
  }
  if (std::abs(fi) > 2e9 || std::abs(fj) > 2e9) return false;
  const Site s{static_cast<std::int32_t>(std::llround(fi)),
               static_cast<std::int32_t>(std::llround(fj))};
  return norm(embed(spec, s) - p) <= 1e-9 * spec.delta;
}

inline GraphRequirementsReport validate_graph_requirements(
    const LatticeSpec& spec, int window_radius,
    const std::vector<Vec2>& period_vectors = {}) {
  if (window_radius < 2) {
    throw precondition_error("validate_graph_requirements: window radius must be >= 2");
  }

  GraphRequirementsReport rep;
  rep.window_radius = window_radius;

  const auto offsets = neighbor_offsets(spec.family.tag);
  rep.degree = static_cast<int>(offsets.size());
  rep.degree_bounded = rep.degree <= rep.degree_bound;

  rep.offsets_symmetric = true;
  for (const Site o : offsets) {
    bool found = false;
    for (const Site q : offsets) {
      if (q.i == -o.i && q.j == -o.j) { found = true; break; }
    }
    if (!found) rep.offsets_symmetric = false;
  }

  const double k = spec.family.k;
  switch (spec.family.tag) {
    case Family::Square: rep.edge_length_bound = spec.delta; break;
    case Family::SquareNE: rep.edge_length_bound = spec.delta * std::numbers::sqrt2; break;
    default: rep.edge_length_bound = spec.delta * std::max(1.0, k); break;
  }
  for (const Site o : offsets) {
    rep.max_edge_length = std::max(rep.max_edge_length, norm(embed(spec, o)));
  }
  rep.locally_finite = rep.max_edge_length <= rep.edge_length_bound * (1.0 + 1e-12);

  // Site density per unit embedded area = 1 / |det(embedding basis)|.
  const Vec2 e1 = embed(spec, {1, 0});
  const Vec2 e2 = embed(spec, {0, 1});
  rep.sites_per_unit_area = 1.0 / std::abs(cross(e1, e2));

  // Connectivity of the index window under the family's offsets.
  const int R = window_radius;
  const int side = 2 * R + 1;
  rep.window_sites = static_cast<std::size_t>(side) * side;
  std::vector<std::uint8_t> seen(rep.window_sites, 0);
  const auto cell = [&](Site s) { return (s.j + R) * side + (s.i + R); };
  std::vector<Site> stack{{-R, -R}};
  seen[cell({-R, -R})] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Site v = stack.back();
    stack.pop_back();
    for (const Site o : offsets) {
      const Site u{v.i + o.i, v.j + o.j};
      if (u.i < -R || u.i > R || u.j < -R || u.j > R) continue;
      if (seen[cell(u)]) continue;
      seen[cell(u)] = 1;
      ++reached;
      stack.push_back(u);
    }
  }
  rep.window_connected = reached == rep.window_sites;

  // Translation periods of the embedded vertex set, sampled on the window.
  for (const Vec2 v : period_vectors) {
    bool period = true;
    for (int j = -R; j <= R && period; ++j) {
      for (int i = -R; i <= R && period; ++i) {
        const Vec2 p = embed(spec, {i, j});
        if (!has_site_at(spec, p + v) || !has_site_at(spec, p - v)) period = false;
      }
    }
    rep.period_checks.push_back({v, period});
  }

  return rep;
}

}  // namespace cardylab
