#include "npin/geometry.hpp"

#include <algorithm>
#include <limits>

namespace npin {

double normalize_angle(double angle) {
    if (!std::isfinite(angle)) {
        return angle;
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double a = std::fmod(angle, two_pi);
    if (a <= -std::numbers::pi) {
        a += two_pi;
    } else if (a > std::numbers::pi) {
        a -= two_pi;
    }
    return a;
}

double signed_area(std::span<const Vec2> pts) {
    double twice = 0.0;
    for (std::size_t i = 0, n = pts.size(); i < n; ++i) {
        twice += cross(pts[i], pts[(i + 1) % n]);
    }
    return 0.5 * twice;
}

Vec2 polygon_centroid(std::span<const Vec2> pts) {
    // Shift by the first vertex to keep the accumulation well conditioned.
    const Vec2 ref = pts.empty() ? Vec2{} : pts[0];
    double twice_area = 0.0;
    Vec2 acc;
    for (std::size_t i = 0, n = pts.size(); i < n; ++i) {
        const Vec2 p = pts[i] - ref;
        const Vec2 q = pts[(i + 1) % n] - ref;
        const double c = cross(p, q);
        twice_area += c;
        acc += (p + q) * c;
    }
    if (twice_area == 0.0) {
        return ref;
    }
    return ref + acc / (3.0 * twice_area);
}

bool is_convex_ccw(std::span<const Vec2> pts) {
    const std::size_t n = pts.size();
    if (n < 3) {
        return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = pts[i];
        const Vec2 b = pts[(i + 1) % n];
        const Vec2 c = pts[(i + 2) % n];
        if (cross(b - a, c - b) <= 0.0) {
            return false;
        }
    }
    // A star polygon can have all left turns; its winding then exceeds one turn.
    double turning = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e0 = pts[(i + 1) % n] - pts[i];
        const Vec2 e1 = pts[(i + 2) % n] - pts[(i + 1) % n];
        turning += std::atan2(cross(e0, e1), dot(e0, e1));
    }
    return std::abs(turning - 2.0 * std::numbers::pi) < 1e-6;
}

Aabb bounds_of(std::span<const Vec2> pts) {
    Aabb box{{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()},
             {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}};
    for (const Vec2& p : pts) {
        box.lo.x = std::min(box.lo.x, p.x);
        box.lo.y = std::min(box.lo.y, p.y);
        box.hi.x = std::max(box.hi.x, p.x);
        box.hi.y = std::max(box.hi.y, p.y);
    }
    return box;
}

bool point_in_convex(std::span<const Vec2> poly, Vec2 p, double eps) {
    for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[(i + 1) % n];
        if (cross(b - a, p - a) < -eps) {
            return false;
        }
    }
    return !poly.empty();
}

std::vector<Vec2> clip_convex(std::span<const Vec2> subject, std::span<const Vec2> clip) {
    std::vector<Vec2> output(subject.begin(), subject.end());
    for (std::size_t i = 0, n = clip.size(); i < n && !output.empty(); ++i) {
        const Vec2 a = clip[i];
        const Vec2 b = clip[(i + 1) % n];
        const auto side = [&](Vec2 p) { return cross(b - a, p - a); };
        std::vector<Vec2> input;
        input.swap(output);
        for (std::size_t j = 0, m = input.size(); j < m; ++j) {
            const Vec2 cur = input[j];
            const Vec2 prev = input[(j + m - 1) % m];
            const double sc = side(cur);
            const double sp = side(prev);
            if (sc >= 0.0) {
                if (sp < 0.0) {
                    output.push_back(prev + (cur - prev) * (sp / (sp - sc)));
                }
                output.push_back(cur);
            } else if (sp >= 0.0) {
                output.push_back(prev + (cur - prev) * (sp / (sp - sc)));
            }
        }
    }
    return output;
}

double convex_overlap_area(std::span<const Vec2> a, std::span<const Vec2> b) {
    const auto inter = clip_convex(a, b);
    if (inter.size() < 3) {
        return 0.0;
    }
    return std::max(0.0, signed_area(inter));
}

namespace {

// Largest gap between projections of a and b on the normals of a's edges.
double max_separation(std::span<const Vec2> a, std::span<const Vec2> b) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, n = a.size(); i < n; ++i) {
        const Vec2 edge = a[(i + 1) % n] - a[i];
        const Vec2 normal = normalized(Vec2{edge.y, -edge.x});
        double min_b = std::numeric_limits<double>::infinity();
        for (const Vec2& v : b) {
            min_b = std::min(min_b, dot(normal, v - a[i]));
        }
        best = std::max(best, min_b);
    }
    return best;
}

}  // namespace

bool convex_overlap(std::span<const Vec2> a, std::span<const Vec2> b, double eps) {
    return max_separation(a, b) < -eps && max_separation(b, a) < -eps;
}

Vec2 closest_point_on_segment(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) {
        return a;
    }
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return a + ab * t;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    return distance(p, closest_point_on_segment(p, a, b));
}

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) {
    for (const Vec2& v : vertices) {
        if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
            throw GeometryError("polygon vertex is not finite");
        }
    }
    if (vertices.size() < 3) {
        throw GeometryError("polygon needs at least 3 vertices, got " + std::to_string(vertices.size()));
    }
    const double area = signed_area(vertices);
    if (!(area > 1e-12)) {
        throw GeometryError("polygon has zero area or clockwise winding");
    }
    if (!is_convex_ccw(vertices)) {
        throw GeometryError("polygon is not convex");
    }
    input_centroid_ = polygon_centroid(vertices);
    if (norm(input_centroid_) > 1e-12) {
        for (Vec2& v : vertices) {
            v -= input_centroid_;
        }
    } else {
        // Already centred (e.g. reloaded from a snapshot): keep vertices bit-exact.
        input_centroid_ = {};
    }
    vertices_ = std::move(vertices);
    area_ = signed_area(vertices_);

    double moment = 0.0;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 p = vertices_[i];
        const Vec2 q = vertices_[(i + 1) % n];
        moment += cross(p, q) * (dot(p, p) + dot(p, q) + dot(q, q));
    }
    second_moment_ = moment / 12.0;

    inradius_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        circumradius_ = std::max(circumradius_, norm(vertices_[i]));
        const Vec2 a = vertices_[i];
        const Vec2 b = vertices_[(i + 1) % n];
        // Distance from centroid to the supporting line of each edge.
        inradius_ = std::min(inradius_, cross(b - a, -a) / norm(b - a));
    }
}

ConvexPolygon ConvexPolygon::rectangle(double length, double width) {
    const double hl = 0.5 * length, hw = 0.5 * width;
    return ConvexPolygon({{-hl, -hw}, {hl, -hw}, {hl, hw}, {-hl, hw}});
}

std::vector<Vec2> ConvexPolygon::transformed(const Pose& pose) const {
    std::vector<Vec2> out;
    out.reserve(vertices_.size());
    const double c = std::cos(pose.theta), s = std::sin(pose.theta);
    for (const Vec2& v : vertices_) {
        out.push_back({pose.x + c * v.x - s * v.y, pose.y + s * v.x + c * v.y});
    }
    return out;
}

double ConvexPolygon::support(Vec2 dir) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const Vec2& v : vertices_) {
        best = std::max(best, dot(v, dir));
    }
    return best;
}

}  // namespace npin
