#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "loggrowth/padic.hpp"

/*
 * Log-growth Newton polygons: lower-convex piecewise-linear graphs over
 * integer abscissas, right-anchored at (mu, 0).  The comparison that
 * matters downstream is "P lies above Q", which for convex graphs with a
 * common x-range reduces to exact rational height comparisons at the
 * vertex abscissas of both polygons.
 */

namespace loggrowth {

struct Vertex {
    std::int64_t x;
    Rational y;

    friend bool operator==(const Vertex&, const Vertex&) = default;
};

class NewtonPolygon {
public:
    NewtonPolygon() = default;

    /// Validates: abscissas natural and strictly increasing, slopes
    /// non-decreasing (lower convexity), final height zero.
    explicit NewtonPolygon(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
        if (vertices_.empty()) return;
        if (vertices_.front().x < 0)
            throw std::invalid_argument("NewtonPolygon: abscissas must be natural numbers");
        Rational prev_slope;
        bool have_prev = false;
        for (std::size_t i = 1; i < vertices_.size(); ++i) {
            const auto& a = vertices_[i - 1];
            const auto& b = vertices_[i];
            if (b.x <= a.x)
                throw std::invalid_argument("NewtonPolygon: abscissas must strictly increase");
            Rational slope = (b.y - a.y) / Rational(b.x - a.x);
            if (have_prev && slope < prev_slope)
                throw std::invalid_argument("NewtonPolygon: slopes must be non-decreasing");
            prev_slope = std::move(slope);
            have_prev = true;
        }
        if (vertices_.back().y != 0)
            throw std::invalid_argument("NewtonPolygon: right endpoint must have height 0");
    }

    const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
    bool empty() const noexcept { return vertices_.empty(); }

    Vertex left_endpoint() const {
        if (vertices_.empty()) throw std::domain_error("NewtonPolygon: empty polygon has no endpoint");
        return vertices_.front();
    }

    Vertex right_endpoint() const {
        if (vertices_.empty()) throw std::domain_error("NewtonPolygon: empty polygon has no endpoint");
        return vertices_.back();
    }

    /// Slope multiset, ascending, one entry per unit of width.
    std::vector<Rational> slopes() const {
        std::vector<Rational> out;
        for (std::size_t i = 1; i < vertices_.size(); ++i) {
            const auto& a = vertices_[i - 1];
            const auto& b = vertices_[i];
            Rational slope = (b.y - a.y) / Rational(b.x - a.x);
            for (std::int64_t j = a.x; j < b.x; ++j) out.push_back(slope);
        }
        return out;
    }

    /// Merges collinear vertices; used for display and for equality.
    NewtonPolygon normalized() const {
        if (vertices_.size() < 3) return *this;
        std::vector<Vertex> out;
        out.push_back(vertices_.front());
        for (std::size_t i = 1; i + 1 < vertices_.size(); ++i) {
            const auto& a = out.back();
            const auto& b = vertices_[i];
            const auto& c = vertices_[i + 1];
            // b is redundant iff (a,b,c) are collinear
            if ((b.y - a.y) * Rational(c.x - b.x) == (c.y - b.y) * Rational(b.x - a.x)) continue;
            out.push_back(b);
        }
        out.push_back(vertices_.back());
        return NewtonPolygon(std::move(out));
    }

    friend bool operator==(const NewtonPolygon& a, const NewtonPolygon& b) {
        return a.normalized().vertices_ == b.normalized().vertices_;
    }
    friend bool operator!=(const NewtonPolygon& a, const NewtonPolygon& b) { return !(a == b); }

private:
    std::vector<Vertex> vertices_;
};

/// Height of the polygon's graph at abscissa x (must lie within the x-range).
inline Rational height_at(const NewtonPolygon& P, std::int64_t x) {
    const auto& vs = P.vertices();
    if (vs.empty() || x < vs.front().x || x > vs.back().x)
        throw std::invalid_argument("height_at: abscissa outside the polygon's x-range");
    for (std::size_t i = 1; i < vs.size(); ++i) {
        if (x > vs[i].x) continue;
        const auto& a = vs[i - 1];
        const auto& b = vs[i];
        return a.y + (b.y - a.y) * Rational(x - a.x) / Rational(b.x - a.x);
    }
    return vs.front().y; // single-vertex polygon, x == vs.front().x
}

/// P_sigma: vertices (0,-sigma), (1,-sigma), (2,0); slope multiset {0, sigma}.
inline NewtonPolygon p_sigma(const Rational& sigma) {
    if (sigma < 0) throw std::invalid_argument("p_sigma: sigma must be >= 0");
    return NewtonPolygon({Vertex{0, -sigma}, Vertex{1, -sigma}, Vertex{2, Rational(0)}});
}

/*
 * Builds the polygon with the given slope multiset, right-anchored at
 * (mu, 0): the largest slope is consumed on the rightmost unit segment.
 */
inline NewtonPolygon from_slopes(std::vector<Rational> slopes, std::uint64_t mu) {
    if (slopes.size() != mu)
        throw std::invalid_argument("from_slopes: need exactly mu slopes");
    for (const auto& s : slopes)
        if (s < 0) throw std::invalid_argument("from_slopes: slopes must be >= 0");
    std::sort(slopes.begin(), slopes.end());
    std::vector<Vertex> vs(mu + 1);
    vs[mu] = Vertex{static_cast<std::int64_t>(mu), Rational(0)};
    for (std::uint64_t i = mu; i-- > 0;)
        vs[i] = Vertex{static_cast<std::int64_t>(i), vs[i + 1].y - slopes[i]};
    return NewtonPolygon(std::move(vs));
}

/*
 * True iff P's graph is >= Q's graph pointwise.  Both graphs are convex
 * piecewise-linear with the same x-range, so checking the inequality at
 * every vertex abscissa of either polygon is sufficient.
 */
inline bool lies_above(const NewtonPolygon& P, const NewtonPolygon& Q) {
    if (P.empty() && Q.empty()) return true;
    if (P.empty() || Q.empty() ||
        P.vertices().front().x != Q.vertices().front().x ||
        P.vertices().back().x != Q.vertices().back().x)
        throw std::invalid_argument("lies_above: polygons must share their x-range");
    std::vector<std::int64_t> xs;
    for (const auto& v : P.vertices()) xs.push_back(v.x);
    for (const auto& v : Q.vertices()) xs.push_back(v.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (std::int64_t x : xs)
        if (height_at(P, x) < height_at(Q, x)) return false;
    return true;
}

} // namespace loggrowth
