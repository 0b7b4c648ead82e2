#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace npin {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
    constexpr bool operator==(const Vec2&) const = default;
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
// cross(w, v) for scalar angular velocity w
constexpr Vec2 cross(double w, Vec2 v) { return {-w * v.y, w * v.x}; }
constexpr Vec2 perp(Vec2 v) { return {-v.y, v.x}; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
inline Vec2 normalized(Vec2 v) {
    const double n = norm(v);
    return n > 0.0 ? v / n : Vec2{};
}
inline Vec2 rotate(Vec2 v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}
inline Vec2 unit_from_angle(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    Vec2 position() const { return {x, y}; }
    Vec2 heading() const { return unit_from_angle(theta); }
    Vec2 to_world(Vec2 local) const { return position() + rotate(local, theta); }
    Vec2 to_local(Vec2 world) const { return rotate(world - position(), -theta); }
    bool operator==(const Pose&) const = default;
};

struct Aabb {
    Vec2 lo;
    Vec2 hi;

    bool overlaps(const Aabb& o, double margin = 0.0) const {
        return lo.x <= o.hi.x + margin && o.lo.x <= hi.x + margin &&
               lo.y <= o.hi.y + margin && o.lo.y <= hi.y + margin;
    }
    bool contains(Vec2 p) const { return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y; }
    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
    double area() const { return width() * height(); }
    Vec2 center() const { return (lo + hi) * 0.5; }
};

class GeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

double signed_area(std::span<const Vec2> pts);
Vec2 polygon_centroid(std::span<const Vec2> pts);
bool is_convex_ccw(std::span<const Vec2> pts);
Aabb bounds_of(std::span<const Vec2> pts);

/// Point inside (or on the boundary of) a CCW convex polygon.
bool point_in_convex(std::span<const Vec2> poly, Vec2 p, double eps = 1e-12);

/// Intersection polygon of two CCW convex polygons (Sutherland-Hodgman).
std::vector<Vec2> clip_convex(std::span<const Vec2> subject, std::span<const Vec2> clip);
double convex_overlap_area(std::span<const Vec2> a, std::span<const Vec2> b);

/// Separating-axis test; touching polygons (zero-area contact) do not count as overlapping.
bool convex_overlap(std::span<const Vec2> a, std::span<const Vec2> b, double eps = 1e-9);

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);
Vec2 closest_point_on_segment(Vec2 p, Vec2 a, Vec2 b);

/// Convex polygon in its own frame: CCW, at least three vertices, positive area.
/// Vertices are re-centred so the centroid sits at the origin.
class ConvexPolygon {
public:
    ConvexPolygon() = default;
    explicit ConvexPolygon(std::vector<Vec2> vertices);

    static ConvexPolygon rectangle(double length, double width);

    const std::vector<Vec2>& vertices() const { return vertices_; }
    std::size_t size() const { return vertices_.size(); }
    double area() const { return area_; }
    /// Polar moment of area about the centroid, per unit density.
    double second_moment() const { return second_moment_; }
    double circumradius() const { return circumradius_; }
    double inradius() const { return inradius_; }
    /// Offset applied to the input vertices to centre them (input centroid).
    Vec2 input_centroid() const { return input_centroid_; }

    std::vector<Vec2> transformed(const Pose& pose) const;
    /// Largest extent along a unit direction in the body frame.
    double support(Vec2 dir) const;

private:
    std::vector<Vec2> vertices_;
    double area_ = 0.0;
    double second_moment_ = 0.0;
    double circumradius_ = 0.0;
    double inradius_ = 0.0;
    Vec2 input_centroid_;
};

}  // namespace npin
