#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace speclab {

/// A directed line segment or circular arc in the base coordinate plane, parametrized
/// on s in [0, 1].
struct Segment {
    enum class Kind { Line, Arc } kind = Kind::Line;
    std::complex<double> a{0.0, 0.0}, b{0.0, 0.0};  // line endpoints
    std::complex<double> center{0.0, 0.0};          // arc data
    double radius = 0.0, theta0 = 0.0, theta1 = 0.0;

    static Segment line(std::complex<double> from, std::complex<double> to) {
        Segment s;
        s.kind = Kind::Line;
        s.a = from;
        s.b = to;
        return s;
    }
    static Segment arc(std::complex<double> c, double r, double t0, double t1) {
        Segment s;
        s.kind = Kind::Arc;
        s.center = c;
        s.radius = r;
        s.theta0 = t0;
        s.theta1 = t1;
        return s;
    }

    std::complex<double> point(double s) const {
        if (kind == Kind::Line) return a + s * (b - a);
        return center + std::polar(radius, theta0 + s * (theta1 - theta0));
    }
    std::complex<double> tangent(double s) const {
        if (kind == Kind::Line) return b - a;
        const double th = theta0 + s * (theta1 - theta0);
        return std::complex<double>(0.0, 1.0) * std::polar(radius, th) * (theta1 - theta0);
    }
    std::complex<double> start() const { return point(0.0); }
    std::complex<double> end() const { return point(1.0); }
    double length() const {
        return kind == Kind::Line ? std::abs(b - a) : radius * std::abs(theta1 - theta0);
    }
    Segment reversed() const {
        Segment s = *this;
        if (kind == Kind::Line) std::swap(s.a, s.b);
        else std::swap(s.theta0, s.theta1);
        return s;
    }
};

/// Ordered chain of segments; consecutive segments share endpoints.
struct Contour {
    std::vector<Segment> segments;

    bool empty() const { return segments.empty(); }
    std::complex<double> start() const { return segments.front().start(); }
    std::complex<double> end() const { return segments.back().end(); }
    void append(const Segment& s) { segments.push_back(s); }
    void append(const Contour& other) {
        segments.insert(segments.end(), other.segments.begin(), other.segments.end());
    }
    Contour reversed() const {
        Contour c;
        for (auto it = segments.rbegin(); it != segments.rend(); ++it) c.segments.push_back(it->reversed());
        return c;
    }
    double length() const {
        double l = 0.0;
        for (const auto& s : segments) l += s.length();
        return l;
    }
};

}  // namespace speclab
