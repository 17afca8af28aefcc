#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

#include "loggrowth/newton_polygon.hpp"

using namespace loggrowth;

namespace {

std::vector<Rational> random_slopes(std::mt19937_64& rng, std::uint64_t mu) {
    std::uniform_int_distribution<std::int64_t> num(0, 12), den(1, 8);
    std::vector<Rational> s;
    s.reserve(mu);
    for (std::uint64_t i = 0; i < mu; ++i) s.emplace_back(num(rng), den(rng));
    return s;
}

} // namespace

TEST_CASE("polygon construction validates its invariants") {
    REQUIRE_NOTHROW(NewtonPolygon({Vertex{0, Rational(-1)}, Vertex{2, Rational(0)}}));
    REQUIRE_NOTHROW(NewtonPolygon{}); // empty is allowed
    REQUIRE_NOTHROW(NewtonPolygon({Vertex{3, Rational(0)}})); // single right anchor

    // abscissas must increase
    REQUIRE_THROWS_AS(NewtonPolygon({Vertex{1, Rational(-1)}, Vertex{1, Rational(0)}}),
                      std::invalid_argument);
    // convexity: slopes must not decrease
    REQUIRE_THROWS_AS(NewtonPolygon({Vertex{0, Rational(-2)}, Vertex{1, Rational(0)}, Vertex{2, Rational(0)}}),
                      std::invalid_argument);
    // right endpoint pinned at height 0
    REQUIRE_THROWS_AS(NewtonPolygon({Vertex{0, Rational(0)}, Vertex{1, Rational(1)}}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(NewtonPolygon({Vertex{-1, Rational(-1)}, Vertex{0, Rational(0)}}),
                      std::invalid_argument);
}

TEST_CASE("p_sigma") {
    auto P = p_sigma(Rational(1, 2));
    REQUIRE(P.vertices() ==
            std::vector<Vertex>{{0, Rational(-1, 2)}, {1, Rational(-1, 2)}, {2, Rational(0)}});

    auto P0 = p_sigma(Rational(0));
    REQUIRE(P0.vertices() ==
            std::vector<Vertex>{{0, Rational(0)}, {1, Rational(0)}, {2, Rational(0)}});

    REQUIRE(p_sigma(Rational(3, 4)).slopes() == std::vector<Rational>{Rational(0), Rational(3, 4)});

    REQUIRE_THROWS_AS(p_sigma(Rational(-1, 2)), std::invalid_argument);
}

TEST_CASE("from_slopes") {
    REQUIRE(from_slopes({Rational(0), Rational(1) - Rational(1, 4)}, 2) == p_sigma(Rational(3, 4)));
    REQUIRE(from_slopes({Rational(0), Rational(0)}, 2) ==
            NewtonPolygon({Vertex{0, Rational(0)}, Vertex{2, Rational(0)}}));

    auto P = from_slopes({Rational(1, 4), Rational(3, 4)}, 2);
    REQUIRE(P.vertices() ==
            std::vector<Vertex>{{0, Rational(-1)}, {1, Rational(-3, 4)}, {2, Rational(0)}});
    REQUIRE(P.left_endpoint() == Vertex{0, Rational(-1)});

    REQUIRE_THROWS_AS(from_slopes({Rational(1)}, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(from_slopes({Rational(-1), Rational(1)}, 2), std::invalid_argument);
}

TEST_CASE("left_endpoint") {
    REQUIRE(p_sigma(Rational(1, 2)).left_endpoint() == Vertex{0, Rational(-1, 2)});
    REQUIRE(p_sigma(Rational(0)).left_endpoint() == Vertex{0, Rational(0)});
    REQUIRE_THROWS_AS(NewtonPolygon{}.left_endpoint(), std::domain_error);
}

TEST_CASE("slopes round-trip through from_slopes") {
    std::mt19937_64 rng(1234);
    for (int i = 0; i < 200; ++i) {
        std::uint64_t mu = 1 + (rng() % 6);
        auto s = random_slopes(rng, mu);
        std::sort(s.begin(), s.end());
        auto P = from_slopes(s, mu);
        REQUIRE(P.slopes() == s);
        REQUIRE(P.right_endpoint() == Vertex{static_cast<std::int64_t>(mu), Rational(0)});
        // reconstruction from the expanded slope list is the identity
        REQUIRE(from_slopes(P.slopes(), mu) == P);
    }
}

TEST_CASE("normalization merges collinear vertices and drives equality") {
    auto flat3 = p_sigma(Rational(0)); // three collinear vertices
    REQUIRE(flat3.normalized().vertices() ==
            std::vector<Vertex>{{0, Rational(0)}, {2, Rational(0)}});
    REQUIRE(flat3 == NewtonPolygon({Vertex{0, Rational(0)}, Vertex{2, Rational(0)}}));
    REQUIRE(flat3 != p_sigma(Rational(1, 3)));

    // normalization preserves the graph
    auto P = from_slopes({Rational(1, 2), Rational(1, 2), Rational(2, 3)}, 3);
    auto N = P.normalized();
    REQUIRE(N.vertices().size() == 3); // the two slope-1/2 segments merge
    for (std::int64_t x = 0; x <= 3; ++x) REQUIRE(height_at(N, x) == height_at(P, x));
}

TEST_CASE("height_at interpolates") {
    auto P = from_slopes({Rational(1, 4), Rational(3, 4)}, 2);
    REQUIRE(height_at(P, 0) == Rational(-1));
    REQUIRE(height_at(P, 1) == Rational(-3, 4));
    REQUIRE(height_at(P, 2) == Rational(0));
    REQUIRE_THROWS_AS(height_at(P, 3), std::invalid_argument);
    REQUIRE_THROWS_AS(height_at(P, -1), std::invalid_argument);
}

TEST_CASE("lies_above on pinned polygons") {
    auto Phalf = p_sigma(Rational(1, 2));
    auto P34 = p_sigma(Rational(3, 4));

    REQUIRE(lies_above(Phalf, Phalf));
    REQUIRE(lies_above(P34, P34));

    // smaller sigma sits higher, strictly so away from the shared right anchor
    REQUIRE(lies_above(Phalf, P34));
    REQUIRE_FALSE(lies_above(P34, Phalf));
    REQUIRE(height_at(Phalf, 0) > height_at(P34, 0));
    REQUIRE(height_at(Phalf, 1) > height_at(P34, 1));
    REQUIRE(height_at(Phalf, 2) == height_at(P34, 2));

    REQUIRE_THROWS_AS(lies_above(Phalf, from_slopes({Rational(1)}, 1)), std::invalid_argument);
    REQUIRE(lies_above(NewtonPolygon{}, NewtonPolygon{}));
    REQUIRE_THROWS_AS(lies_above(NewtonPolygon{}, Phalf), std::invalid_argument);
}

TEST_CASE("smaller sigma lies above on random rational pairs") {
    std::mt19937_64 rng(987);
    std::uniform_int_distribution<std::int64_t> num(0, 30), den(31, 60);
    int done = 0;
    while (done < 100) {
        Rational a(num(rng), den(rng)), b(num(rng), den(rng));
        if (a == b) continue;
        if (a > b) std::swap(a, b); // a < b < 1
        REQUIRE(lies_above(p_sigma(a), p_sigma(b)));
        REQUIRE_FALSE(lies_above(p_sigma(b), p_sigma(a)));
        ++done;
    }
}

TEST_CASE("lies_above is a partial order on random polygons") {
    std::mt19937_64 rng(55501);
    const std::uint64_t mu = 4;
    std::vector<NewtonPolygon> polys;
    for (int i = 0; i < 40; ++i) polys.push_back(from_slopes(random_slopes(rng, mu), mu));

    for (const auto& P : polys) REQUIRE(lies_above(P, P));

    for (const auto& P : polys)
        for (const auto& Q : polys) {
            if (lies_above(P, Q) && lies_above(Q, P)) {
                // antisymmetry: mutual domination forces equal graphs
                for (std::int64_t x = 0; x <= static_cast<std::int64_t>(mu); ++x)
                    REQUIRE(height_at(P, x) == height_at(Q, x));
                REQUIRE(P == Q);
            }
            for (const auto& R : polys)
                if (lies_above(P, Q) && lies_above(Q, R)) REQUIRE(lies_above(P, R));
        }
}
