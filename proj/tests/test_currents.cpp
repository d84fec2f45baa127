#include "georom/currents.hpp"
#include "georom/sampling.hpp"
#include "georom/shapes.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace georom;

namespace {

Shape unit_square(double shift_x = 0.0, double shift_y = 0.0) {
    Shape s;
    s.points.resize(4, 2);
    s.points << shift_x, shift_y, shift_x + 1, shift_y, shift_x + 1, shift_y + 1, shift_x, shift_y + 1;
    s.seg_tags = {BoundaryTag::wall, BoundaryTag::wall, BoundaryTag::wall, BoundaryTag::inlet};
    return s;
}

// naive oracle, plain double loop over segment pairs
double brute_inner(const CurrentsShape& a, const CurrentsShape& b, double lambda) {
    double acc = 0.0;
    for (int i = 0; i < a.n_segments(); ++i)
        for (int j = 0; j < b.n_segments(); ++j) {
            const double r2 = (a.centers.row(i) - b.centers.row(j)).squaredNorm();
            acc += std::exp(-r2 / lambda) * a.tau.row(i).dot(b.tau.row(j));
        }
    return acc;
}

} // namespace

TEST_CASE("kernel basics") {
    const Point2 x(1.0, 2.0), y(1.5, 2.5);
    CHECK(kernel_eval(x, x, 0.7) == 1.0);
    CHECK(kernel_eval(Point2(0, 0), Point2(1, 0), 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int i = 0; i < 50; ++i) {
        const Point2 a(u(rng), u(rng)), b(u(rng), u(rng));
        const double lam = 0.1 + std::abs(u(rng));
        CHECK(kernel_eval(a, b, lam) == kernel_eval(b, a, lam));
        CHECK(kernel_eval(a, b, lam) > 0.0);
        CHECK(kernel_eval(a, b, lam) <= 1.0);
    }
}

TEST_CASE("single unit segment self inner product") {
    CurrentsShape a;
    a.centers.resize(1, 2);
    a.centers << 0.0, 0.0;
    a.tau.resize(1, 2);
    a.tau << 1.0, 0.0;
    CHECK(currents_inner_product(a, a, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("two parallel unit segments: closed form exp(-d^2)") {
    for (double d : {0.25, 0.5, 1.0, 2.0}) {
        CurrentsShape a, b;
        a.centers.resize(1, 2);
        a.centers << 0.0, 0.0;
        a.tau.resize(1, 2);
        a.tau << 1.0, 0.0;
        b = a;
        b.centers << 0.0, d;
        CHECK(currents_inner_product(a, b, 1.0) == doctest::Approx(std::exp(-d * d)).epsilon(1e-14));
    }
}

TEST_CASE("orientation reversal negates the inner product") {
    const CurrentsShape a(unit_square());
    CurrentsShape b(unit_square(0.2, 0.1));
    const double ip = currents_inner_product(a, b, 1.0);
    b.tau = -b.tau;
    CHECK(currents_inner_product(a, b, 1.0) == doctest::Approx(-ip).epsilon(1e-14));
}

TEST_CASE("dissimilarity: identity, positivity, symmetry of arguments") {
    const CurrentsShape a(unit_square());
    CHECK(currents_dissimilarity(a, a, 0.8) == 0.0);
    const CurrentsShape b(unit_square(0.3, -0.2));
    const double dab = currents_dissimilarity(a, b, 0.8);
    CHECK(dab > 0.0);
    CHECK(currents_dissimilarity(b, a, 0.8) == doctest::Approx(dab).epsilon(1e-14));
}

TEST_CASE("dissimilarity positivity over random stenosis pairs") {
    const auto samples = latin_hypercube(8, {{0.8, 2}, {6, 14}, {0.8, 2}, {6, 14}}, 5);
    for (int i = 0; i + 1 < samples.rows(); i += 2) {
        const CurrentsShape a(generate_stenosis_shape(
            StenosisParams{samples(i, 0), samples(i, 1), samples(i, 2), samples(i, 3)}, 48));
        const CurrentsShape b(generate_stenosis_shape(
            StenosisParams{samples(i + 1, 0), samples(i + 1, 1), samples(i + 1, 2), samples(i + 1, 3)}, 48));
        for (double lam : {0.25, 1.0, 4.0}) CHECK(currents_dissimilarity(a, b, lam) >= 0.0);
    }
}

TEST_CASE("translation covariance") {
    const CurrentsShape a(unit_square());
    const CurrentsShape b(unit_square(0.4, 0.15));
    const CurrentsShape at(unit_square(3.7, -2.2));
    const CurrentsShape bt(unit_square(0.4 + 3.7, 0.15 - 2.2));
    CHECK(std::abs(currents_inner_product(a, b, 1.3) - currents_inner_product(at, bt, 1.3)) < 1e-12);
    CHECK(std::abs(currents_dissimilarity(a, b, 1.3) - currents_dissimilarity(at, bt, 1.3)) < 1e-12);
}

TEST_CASE("refinement stability: self inner product change shrinks with h") {
    // splitting every segment changes <a,a> by O(h^2); the change must shrink
    // under successive refinement
    auto circle = [](int n) {
        Shape s;
        s.points.resize(n, 2);
        for (int i = 0; i < n; ++i) {
            const double t = 2.0 * M_PI * i / n;
            s.points.row(i) << std::cos(t), std::sin(t);
        }
        s.seg_tags.assign(static_cast<size_t>(n), BoundaryTag::wall);
        return s;
    };
    const double i16 = currents_inner_product(CurrentsShape(circle(16)), CurrentsShape(circle(16)), 1.0);
    const double i32 = currents_inner_product(CurrentsShape(circle(32)), CurrentsShape(circle(32)), 1.0);
    const double i64 = currents_inner_product(CurrentsShape(circle(64)), CurrentsShape(circle(64)), 1.0);
    const double i128 = currents_inner_product(CurrentsShape(circle(128)), CurrentsShape(circle(128)), 1.0);
    const double d1 = std::abs(i32 - i16);
    const double d2 = std::abs(i64 - i32);
    const double d3 = std::abs(i128 - i64);
    CHECK(d2 < d1);
    CHECK(d3 < d2);
    CHECK(d3 < 0.3 * d2); // roughly quadratic
}

TEST_CASE("vectorised path matches naive double loop") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int rep = 0; rep < 5; ++rep) {
        CurrentsShape a, b;
        const int na = 3 + rep, nb = 10 - rep;
        a.centers.resize(na, 2);
        a.tau.resize(na, 2);
        b.centers.resize(nb, 2);
        b.tau.resize(nb, 2);
        for (int i = 0; i < na; ++i) {
            a.centers.row(i) << u(rng), u(rng);
            a.tau.row(i) << u(rng), u(rng);
        }
        for (int i = 0; i < nb; ++i) {
            b.centers.row(i) << u(rng), u(rng);
            b.tau.row(i) << u(rng), u(rng);
        }
        const double fast = currents_inner_product(a, b, 0.9);
        const double slow = brute_inner(a, b, 0.9);
        CHECK(std::abs(fast - slow) <= 1e-14 * std::max(1.0, std::abs(slow)));
    }
}

TEST_CASE("dissimilarity gradient value matches plain dissimilarity") {
    const Shape ref = unit_square();
    const Shape tar = unit_square(0.2, -0.1);
    const CurrentsShape target(tar);
    Points grad;
    const double d = currents_dissimilarity_gradient(ref.points, target, 1.0, grad);
    CHECK(d == doctest::Approx(currents_dissimilarity(CurrentsShape(ref), target, 1.0)).epsilon(1e-13));
    CHECK(grad.rows() == 4);
}

TEST_CASE("dissimilarity gradient vs central finite differences") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    Shape base = unit_square();
    for (int i = 0; i < 4; ++i) base.points.row(i) += Eigen::RowVector2d(u(rng), u(rng));
    const CurrentsShape target(unit_square(0.1, 0.05));

    Points grad;
    currents_dissimilarity_gradient(base.points, target, 0.7, grad);
    const double h = 1e-6;
    for (int i = 0; i < 4; ++i)
        for (int c = 0; c < 2; ++c) {
            Points plus = base.points, minus = base.points;
            plus(i, c) += h;
            minus(i, c) -= h;
            Points dummy;
            const double fp = currents_dissimilarity_gradient(plus, target, 0.7, dummy);
            const double fm = currents_dissimilarity_gradient(minus, target, 0.7, dummy);
            const double fd = (fp - fm) / (2 * h);
            CHECK(grad(i, c) == doctest::Approx(fd).epsilon(1e-6));
        }
}
