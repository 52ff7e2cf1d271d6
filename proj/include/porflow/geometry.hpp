#pragma once

#include <array>
#include <cmath>
#include <span>

namespace porflow {

/// Small fixed-size point/vector type. 2D meshes leave z at zero.
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

/// Unsigned measure of a simplex given its vertices: length (2 points),
/// triangle area (3 points) or tetrahedron volume (4 points).
inline double simplex_measure(std::span<const Vec3> v) {
    switch (v.size()) {
        case 2:
            return distance(v[0], v[1]);
        case 3:
            return 0.5 * norm(cross(v[1] - v[0], v[2] - v[0]));
        case 4:
            return std::abs(dot(v[1] - v[0], cross(v[2] - v[0], v[3] - v[0]))) / 6.0;
        default:
            return 0.0;
    }
}

inline Vec3 barycentre(std::span<const Vec3> v) {
    Vec3 c;
    for (const Vec3& p : v) c = c + p;
    return (1.0 / static_cast<double>(v.size())) * c;
}

/// Largest pairwise vertex distance; the diameter for simplices.
inline double diameter(std::span<const Vec3> v) {
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j) d = std::max(d, distance(v[i], v[j]));
    return d;
}

}  // namespace porflow
