#pragma once

// Marked triangular domains and their lattice discretizations.
//
// A marked triangle (alpha, beta, gamma; x on the open base alpha-beta)
// splits its boundary into four arcs: ax, xb, bc, ca. classify() collects
// the lattice sites inside the closed triangle, builds their adjacency, and
// labels every boundary site (a site with at least one neighbor embedded
// outside) with its nearest arc. Crossing events run from ax to bc.

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cardylab/errors.hpp"
#include "cardylab/geom.hpp"
#include "cardylab/lattice.hpp"

namespace cardylab {

enum class Arc : std::int8_t { ax = 0, xb = 1, bc = 2, ca = 3 };

inline constexpr std::int8_t kInterior = -1;

inline const char* arc_name(Arc a) {
  switch (a) {
    case Arc::ax: return "ax";
    case Arc::xb: return "xb";
    case Arc::bc: return "bc";
    case Arc::ca: return "ca";
  }
  return "?";
}

struct MarkedTriangle {
  Vec2 alpha, beta, gamma;
  Vec2 x;                          // marked point on the open segment alpha-beta
  double x_param = 0.0;            // position of x along alpha->beta, in (0, 1)
  double x_param_requested = 0.0;  // before snapping (equal for exact domains)

  double diameter() const {
    return std::max({norm(beta - alpha), norm(gamma - beta), norm(alpha - gamma)});
  }

  std::pair<Vec2, Vec2> arc_segment(Arc a) const {
    switch (a) {
      case Arc::ax: return {alpha, x};
      case Arc::xb: return {x, beta};
      case Arc::bc: return {beta, gamma};
      case Arc::ca: return {gamma, alpha};
    }
    return {alpha, alpha};
  }
};

// Builds a marked triangle with x placed at the exact parameter (no lattice
// snapping). Rejects degenerate (collinear) corners.
inline MarkedTriangle make_marked_triangle(Vec2 alpha, Vec2 beta, Vec2 gamma,
                                           double x_param) {
  MarkedTriangle t{alpha, beta, gamma, {}, x_param, x_param};
  const double diam = t.diameter();
  if (!(std::abs(cross(beta - alpha, gamma - alpha)) > 1e-12 * diam * diam)) {
    throw precondition_error("marked triangle: degenerate (collinear) corners");
  }
  if (!(x_param > 0.0 && x_param < 1.0)) {
    throw precondition_error("marked triangle: x must lie strictly between alpha and beta");
  }
  t.x = alpha + x_param * (beta - alpha);
  return t;
}

// Standard domain of a lattice family, with x snapped to the nearest lattice
// site on the base:
//
//   triangular families: alpha = (0,0), beta = (1,0), gamma = (1/2, h(k));
//                        base sites at multiples of delta
//   SquareNE:            alpha = (0,0), beta = (c,c), gamma = (0,c) with
//                        c = 1/sqrt(2); base sites (m, m) at arc parameter
//                        m * delta * sqrt(2)
//
// Square has no standard marked triangle.
inline MarkedTriangle standard_triangle(const LatticeSpec& spec, double x_param) {
  if (!(x_param > 0.0 && x_param < 1.0)) {
    throw precondition_error("standard_triangle: x must lie in (0, 1)");
  }
  if (spec.family.tag == Family::Square) {
    throw precondition_error("standard_triangle: the Square family has no marked triangle");
  }

  MarkedTriangle t;
  double step = 0.0;  // base arc length between consecutive base sites
  if (spec.family.tag == Family::SquareNE) {
    constexpr double c = 0.7071067811865475244;
    t.alpha = {0.0, 0.0};
    t.beta = {c, c};
    t.gamma = {0.0, c};
    step = spec.delta * std::numbers::sqrt2;
  } else {
    t.alpha = {0.0, 0.0};
    t.beta = {1.0, 0.0};
    t.gamma = {0.5, unit_row_height(spec.family.k)};
    step = spec.delta;
  }

  const auto m_max = static_cast<long long>(std::floor(1.0 / step + 1e-9));
  auto m = std::llround(x_param / step);
  if (m > m_max) m = m_max;
  if (m < 1 || std::abs(m * step - 1.0) < 1e-12) {
    throw precondition_error(
        "standard_triangle: snapping x to the lattice collides with a corner");
  }

  t.x_param_requested = x_param;
  t.x_param = m * step;
  const Site base_site{static_cast<std::int32_t>(m),
                       spec.family.tag == Family::SquareNE ? static_cast<std::int32_t>(m) : 0};
  t.x = embed(spec, base_site);  // exact lattice coordinates
  return t;
}

// ---------------------------------------------------------------------------

struct SiteClassification {
  LatticeSpec spec;
  MarkedTriangle domain;
  std::vector<Site> sites;                 // row-major order (j, then i)
  std::vector<std::int32_t> adj_offsets;   // CSR adjacency, sorted per site
  std::vector<std::int32_t> adj;
  std::vector<std::int8_t> label;          // kInterior or Arc value
  std::array<std::vector<std::int32_t>, 4> arc_sites;

  std::int32_t find(Site s) const {
    auto it = std::lower_bound(sites.begin(), sites.end(), s, row_major_less);
    if (it == sites.end() || !(*it == s)) return -1;
    return static_cast<std::int32_t>(it - sites.begin());
  }

  std::size_t size() const { return sites.size(); }
};

namespace detail {

inline std::string site_str(Site s) {
  return "(" + std::to_string(s.i) + ", " + std::to_string(s.j) + ")";
}

}  // namespace detail

// Discretizes the domain on the given lattice. Throws precondition_error if
// no site falls inside ("mesh too coarse") or if the in-domain sites are
// disconnected ("degenerate discretization").
inline SiteClassification classify(const LatticeSpec& spec, const MarkedTriangle& dom) {
  const double diam = dom.diameter();
  if (!(std::abs(cross(dom.beta - dom.alpha, dom.gamma - dom.alpha)) >
        1e-12 * diam * diam)) {
    throw precondition_error("classify: degenerate domain");
  }
  const double tol = 1e-9 * diam;

  SiteClassification cls;
  cls.spec = spec;
  cls.domain = dom;

  const double xmin = std::min({dom.alpha.x, dom.beta.x, dom.gamma.x}) - tol;
  const double xmax = std::max({dom.alpha.x, dom.beta.x, dom.gamma.x}) + tol;
  const double ymin = std::min({dom.alpha.y, dom.beta.y, dom.gamma.y}) - tol;
  const double ymax = std::max({dom.alpha.y, dom.beta.y, dom.gamma.y}) + tol;

  const bool tri = triangular_embedding(spec.family.tag);
  const double d = spec.delta;
  const double row_h = tri ? spec.row_height() : d;

  const auto j_lo = static_cast<std::int32_t>(std::floor(ymin / row_h));
  const auto j_hi = static_cast<std::int32_t>(std::ceil(ymax / row_h));
  for (std::int32_t j = j_lo; j <= j_hi; ++j) {
    const double shift = tri ? 0.5 * j : 0.0;
    const auto i_lo = static_cast<std::int32_t>(std::floor(xmin / d - shift));
    const auto i_hi = static_cast<std::int32_t>(std::ceil(xmax / d - shift));
    for (std::int32_t i = i_lo; i <= i_hi; ++i) {
      const Site s{i, j};
      if (point_in_triangle(embed(spec, s), dom.alpha, dom.beta, dom.gamma, tol)) {
        cls.sites.push_back(s);
      }
    }
  }

  if (cls.sites.empty()) {
    throw precondition_error("classify: mesh too coarse, no lattice site inside the domain");
  }

  // Adjacency (CSR) plus boundary detection. A neighbor absent from the site
  // list is embedded outside the closed triangle, because the enumeration
  // above covers the whole triangle.
  const auto offsets = neighbor_offsets(spec.family.tag);
  const auto n = static_cast<std::int32_t>(cls.sites.size());
  cls.adj_offsets.assign(static_cast<std::size_t>(n) + 1, 0);
  cls.adj.reserve(static_cast<std::size_t>(n) * offsets.size());
  std::vector<std::uint8_t> boundary(n, 0);
  std::vector<std::int32_t> nbrs;
  for (std::int32_t v = 0; v < n; ++v) {
    nbrs.clear();
    for (const Site o : offsets) {
      const Site u{cls.sites[v].i + o.i, cls.sites[v].j + o.j};
      const std::int32_t idx = cls.find(u);
      if (idx >= 0) nbrs.push_back(idx); else boundary[v] = 1;
    }
    std::sort(nbrs.begin(), nbrs.end());
    cls.adj.insert(cls.adj.end(), nbrs.begin(), nbrs.end());
    cls.adj_offsets[v + 1] = static_cast<std::int32_t>(cls.adj.size());
  }

  // The in-domain sites must form one connected component.
  {
    std::vector<std::uint8_t> seen(n, 0);
    std::vector<std::int32_t> stack{0};
    seen[0] = 1;
    std::int32_t reached = 1;
    while (!stack.empty()) {
      const std::int32_t v = stack.back();
      stack.pop_back();
      for (std::int32_t e = cls.adj_offsets[v]; e < cls.adj_offsets[v + 1]; ++e) {
        const std::int32_t u = cls.adj[e];
        if (!seen[u]) {
          seen[u] = 1;
          ++reached;
          stack.push_back(u);
        }
      }
    }
    if (reached != n) {
      throw precondition_error(
          "classify: degenerate discretization, in-domain sites are disconnected");
    }
  }

  // Boundary labels: nearest arc, ties broken ax > bc > xb > ca.
  static constexpr Arc priority[] = {Arc::ax, Arc::bc, Arc::xb, Arc::ca};
  const double tie_tol = 1e-12 * diam;
  cls.label.assign(n, kInterior);
  for (std::int32_t v = 0; v < n; ++v) {
    if (!boundary[v]) continue;
    const Vec2 p = embed(spec, cls.sites[v]);
    double dist[4];
    double dmin = 0.0;
    for (int a = 0; a < 4; ++a) {
      const auto [s0, s1] = dom.arc_segment(static_cast<Arc>(a));
      dist[a] = dist_point_segment(p, s0, s1);
      dmin = a == 0 ? dist[a] : std::min(dmin, dist[a]);
    }
    for (const Arc a : priority) {
      if (dist[static_cast<int>(a)] <= dmin + tie_tol) {
        cls.label[v] = static_cast<std::int8_t>(a);
        break;
      }
    }
  }

  for (std::int32_t v = 0; v < n; ++v) {
    if (cls.label[v] != kInterior) cls.arc_sites[cls.label[v]].push_back(v);
  }
  return cls;
}

// Relabels every site through an index bijection (e.g. the SquareNE-to-
// triangular rotation) and restores canonical ordering. The structure is
// unchanged; only the naming of sites differs, so a reindexed classification
// can be coupled against one built natively in the target index scheme.
template <typename IndexFn>
SiteClassification reindex_sites(const SiteClassification& cls, IndexFn&& fn,
                                 LatticeSpec new_spec, MarkedTriangle new_domain) {
  const auto n = static_cast<std::int32_t>(cls.sites.size());
  std::vector<Site> mapped(static_cast<std::size_t>(n));
  for (std::int32_t v = 0; v < n; ++v) mapped[v] = fn(cls.sites[v]);

  std::vector<std::int32_t> order(static_cast<std::size_t>(n));
  for (std::int32_t v = 0; v < n; ++v) order[v] = v;
  std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
    return row_major_less(mapped[a], mapped[b]);
  });
  for (std::int32_t v = 0; v + 1 < n; ++v) {
    if (mapped[order[v]] == mapped[order[v + 1]]) {
      throw precondition_error("reindex_sites: index map is not injective at " +
                               detail::site_str(mapped[order[v]]));
    }
  }

  std::vector<std::int32_t> rank(static_cast<std::size_t>(n));
  for (std::int32_t v = 0; v < n; ++v) rank[order[v]] = v;

  SiteClassification out;
  out.spec = new_spec;
  out.domain = new_domain;
  out.sites.resize(static_cast<std::size_t>(n));
  out.label.resize(static_cast<std::size_t>(n));
  out.adj_offsets.assign(static_cast<std::size_t>(n) + 1, 0);
  out.adj.resize(cls.adj.size());
  std::int32_t pos = 0;
  for (std::int32_t v = 0; v < n; ++v) {
    const std::int32_t src = order[v];
    out.sites[v] = mapped[src];
    out.label[v] = cls.label[src];
    for (std::int32_t e = cls.adj_offsets[src]; e < cls.adj_offsets[src + 1]; ++e) {
      out.adj[pos++] = rank[cls.adj[e]];
    }
    std::sort(out.adj.begin() + out.adj_offsets[v], out.adj.begin() + pos);
    out.adj_offsets[v + 1] = pos;
  }
  for (std::int32_t v = 0; v < n; ++v) {
    if (out.label[v] != kInterior) out.arc_sites[out.label[v]].push_back(v);
  }
  return out;
}

// Empty string when the two classifications have identical site index sets,
// adjacency and labels; otherwise a description naming the first difference.
inline std::string compare_structure(const SiteClassification& a,
                                     const SiteClassification& b) {
  const std::size_t n = std::min(a.sites.size(), b.sites.size());
  if (a.sites.size() != b.sites.size()) {
    return "site counts differ (" + std::to_string(a.sites.size()) + " vs " +
           std::to_string(b.sites.size()) + ")";
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!(a.sites[v] == b.sites[v])) {
      return "site sets differ, first differing site " + detail::site_str(a.sites[v]) +
             " vs " + detail::site_str(b.sites[v]);
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (a.label[v] != b.label[v]) {
      const auto show = [](std::int8_t l) {
        return l == kInterior ? std::string("interior")
                              : std::string(arc_name(static_cast<Arc>(l)));
      };
      return "labels differ at site " + detail::site_str(a.sites[v]) + ": " +
             show(a.label[v]) + " vs " + show(b.label[v]);
    }
  }
  if (a.adj_offsets != b.adj_offsets || a.adj != b.adj) {
    for (std::size_t v = 0; v < n; ++v) {
      const auto a0 = a.adj_offsets[v], a1 = a.adj_offsets[v + 1];
      const auto b0 = b.adj_offsets[v], b1 = b.adj_offsets[v + 1];
      if (a1 - a0 != b1 - b0 ||
          !std::equal(a.adj.begin() + a0, a.adj.begin() + a1, b.adj.begin() + b0)) {
        return "adjacency differs at site " + detail::site_str(a.sites[v]);
      }
    }
  }
  return {};
}

}  // namespace cardylab
