#include "npin/goal_region.hpp"

#include "npin/overloaded.hpp"

#include <algorithm>
#include <limits>

namespace npin {

bool GoalRegion::contains(Vec2 p) const {
    return std::visit(overloaded{
                          [&](const GoalDisk& g) { return npin::distance(p, g.center) <= g.radius; },
                          [&](const GoalLine& g) { return p.y >= g.line_y; },
                          [&](const GoalPolygon& g) { return point_in_convex(g.vertices, p); },
                          [&](const GoalRectExterior& g) {
                              return !(p.x > g.rect.lo.x && p.x < g.rect.hi.x && p.y > g.rect.lo.y &&
                                       p.y < g.rect.hi.y);
                          },
                      },
                      shape_);
}

Vec2 GoalRegion::nearest_point(Vec2 p) const {
    if (contains(p)) {
        return p;
    }
    return std::visit(overloaded{
                          [&](const GoalDisk& g) {
                              const Vec2 d = p - g.center;
                              return g.center + normalized(d) * g.radius;
                          },
                          [&](const GoalLine& g) { return Vec2{p.x, g.line_y}; },
                          [&](const GoalPolygon& g) {
                              Vec2 best = g.vertices.front();
                              double best_d = std::numeric_limits<double>::infinity();
                              for (std::size_t i = 0, n = g.vertices.size(); i < n; ++i) {
                                  const Vec2 q =
                                      closest_point_on_segment(p, g.vertices[i], g.vertices[(i + 1) % n]);
                                  const double d = npin::distance(p, q);
                                  if (d < best_d) {
                                      best_d = d;
                                      best = q;
                                  }
                              }
                              return best;
                          },
                          [&](const GoalRectExterior& g) {
                              // p is strictly inside: project onto the closest edge.
                              const double to_left = p.x - g.rect.lo.x;
                              const double to_right = g.rect.hi.x - p.x;
                              const double to_bottom = p.y - g.rect.lo.y;
                              const double to_top = g.rect.hi.y - p.y;
                              const double m = std::min({to_left, to_right, to_bottom, to_top});
                              if (m == to_left) return Vec2{g.rect.lo.x, p.y};
                              if (m == to_right) return Vec2{g.rect.hi.x, p.y};
                              if (m == to_bottom) return Vec2{p.x, g.rect.lo.y};
                              return Vec2{p.x, g.rect.hi.y};
                          },
                      },
                      shape_);
}

std::string GoalRegion::kind() const {
    return std::visit(overloaded{
                          [](const GoalDisk&) { return std::string("disk"); },
                          [](const GoalLine&) { return std::string("line"); },
                          [](const GoalPolygon&) { return std::string("polygon"); },
                          [](const GoalRectExterior&) { return std::string("rect_exterior"); },
                      },
                      shape_);
}

}  // namespace npin
