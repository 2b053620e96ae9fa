#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"
#include "tdnns/assembly.hpp"
#include "tdnns/interpolation.hpp"
#include "tdnns/norms.hpp"

using namespace tdnns;

namespace {

constexpr double kPi = std::numbers::pi;

double max_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Samples random points of random cells and reports the worst deviation.
template <class F>
double worst_over_cells(const Mesh& m, unsigned seed, F deviation) {
    std::mt19937 rng(seed);
    double worst = 0.0;
    for (int c = 0; c < static_cast<int>(m.num_cells()); ++c)
        for (int t = 0; t < 3; ++t)
            worst = std::max(worst, deviation(c, testing::random_point_in_reference(rng)));
    return worst;
}

TensorField trig_stress() {
    return {[](const Vec3& x) {
        const double s = std::sin(kPi * x[0]) * std::cos(kPi * x[1]);
        return SymTensor3(s, x[2] * x[2], std::exp(x[0] * x[1]), std::cos(x[2] + x[0]), 0.3 * s, x[1]);
    }};
}

} // namespace

TEST_CASE("W interpolant reproduces polynomials of degree k+1") {
    const Mesh m = testing::two_cell_mesh(3);
    for (int k = 1; k <= 2; ++k) {
        const DofMap w(m, Space::W, k + 1);
        const ScalarField p = k == 1 ? ScalarField{[](const Vec3& x) { return 1 + x[0] * x[1] - 2 * x[2] * x[2] + x[0]; }, nullptr}
                                     : ScalarField{[](const Vec3& x) { return x[0] * x[0] * x[1] + std::pow(x[2], 3) - x[1]; }, nullptr};
        const Eigen::VectorXd c = interpolate_w(m, w, p);
        const double err = worst_over_cells(m, 1, [&](int cell, const Vec3& r) {
            const ElementTransform xf = element_transform(m, cell);
            return std::abs(evaluate_fe(w.basis(cell), xf, w.cell_dofs(cell), c, r)[0] - p.value(xf.map(r)));
        });
        CHECK(err < 1e-12);
        const Eigen::VectorXd one = interpolate_w(m, w, {[](const Vec3&) { return 1.0; }, nullptr});
        const double err1 = worst_over_cells(m, 2, [&](int cell, const Vec3& r) {
            return std::abs(evaluate_fe(w.basis(cell), element_transform(m, cell), w.cell_dofs(cell), one, r)[0] - 1.0);
        });
        CHECK(err1 < 1e-13);
    }
}

TEST_CASE("V interpolant reproduces (P^k)^3") {
    const Mesh m = testing::two_cell_mesh(1);
    for (int k = 1; k <= 2; ++k) {
        const DofMap v(m, Space::V, k);
        const Mat3 a = (Mat3() << 1, -2, 0.5, 0.3, 0, 1, -1, 1, 2).finished();
        const VectorField f{[&](const Vec3& x) {
                                Vec3 r = a * x + Vec3(0.1, 0.2, -0.3);
                                if (k == 2)
                                    r += Vec3(x[0] * x[1], x[2] * x[2], -x[0] * x[2]);
                                return r;
                            },
                            nullptr};
        const Eigen::VectorXd c = interpolate_v(m, v, f);
        const double err = worst_over_cells(m, 3, [&](int cell, const Vec3& r) {
            const ElementTransform xf = element_transform(m, cell);
            return (evaluate_fe(v.basis(cell), xf, v.cell_dofs(cell), c, r) - f.value(xf.map(r))).norm();
        });
        CHECK(err < 1e-12);
    }
}

TEST_CASE("interpolants commute with the gradient") {
    const ScalarField w{[](const Vec3& x) { return x[0] * x[0] * x[1] + std::pow(x[2], 3); },
                        [](const Vec3& x) { return Vec3(2 * x[0] * x[1], x[0] * x[0], 3 * x[2] * x[2]); }};
    const VectorField gw{w.gradient, [](const Vec3& x) {
                             Mat3 h = Mat3::Zero();
                             h(0, 0) = 2 * x[1];
                             h(0, 1) = h(1, 0) = 2 * x[0];
                             h(2, 2) = 6 * x[2];
                             return h;
                         }};
    for (const Mesh& m : {testing::two_cell_mesh(2), build_structured_cube(2, {CubeFace::XMin})})
        for (int k = 1; k <= 2; ++k) {
            const SpaceSet s(m, k);
            const Eigen::VectorXd lhs = interpolate_v(m, s.v, gw);
            const Eigen::VectorXd rhs = gradient_embedding(m, s.v, s.w) * interpolate_w(m, s.w, w);
            CHECK(max_diff(lhs, rhs) < 1e-11);
        }
}

TEST_CASE("discrete functions are reproduced by their interpolants") {
    for (unsigned variant : {0u, 4u}) {
        const Mesh m = variant == 0 ? build_structured_cube(1, {CubeFace::XMin}) : testing::two_cell_mesh(variant);
        for (int k = 1; k <= 2; ++k) {
            const SpaceSet s(m, k);
            const Eigen::VectorXd cs = testing::random_vector(s.sigma.size(), 7 + variant);
            CHECK(max_diff(interpolate_sigma(m, s.sigma, testing::as_tensor_field(m, s.sigma, cs)), cs) < 1e-10);
            const Eigen::VectorXd cv = testing::random_vector(s.v.size(), 8 + variant);
            CHECK(max_diff(interpolate_v(m, s.v, testing::as_vector_field(m, s.v, cv)), cv) < 1e-10);
            const Eigen::VectorXd cw = testing::random_vector(s.w.size(), 9 + variant);
            CHECK(max_diff(interpolate_w(m, s.w, testing::as_scalar_field(m, s.w, cw)), cw) < 1e-10);
        }
    }
}

TEST_CASE("constant identity stress is interpolated exactly") {
    const Mesh m = testing::two_cell_mesh(5);
    for (int k = 1; k <= 2; ++k) {
        const DofMap s(m, Space::Sigma, k);
        const Eigen::VectorXd c = interpolate_sigma(m, s, {[](const Vec3&) { return SymTensor3(1, 1, 1, 0, 0, 0); }});
        const double err = worst_over_cells(m, 4, [&](int cell, const Vec3& r) {
            const Eigen::VectorXd e = evaluate_fe(s.basis(cell), element_transform(m, cell), s.cell_dofs(cell), c, r);
            return (e - (Eigen::VectorXd(6) << 1, 1, 1, 0, 0, 0).finished()).cwiseAbs().maxCoeff();
        });
        CHECK(err < 1e-12);
    }
}

TEST_CASE("stress interpolation error is orthogonal to discrete gradients") {
    const TensorField f = trig_stress();
    for (int k = 1; k <= 2; ++k)
        for (const Mesh& m : {build_structured_cube(2, {CubeFace::XMin, CubeFace::ZMax}), testing::two_cell_mesh(6)}) {
            const SpaceSet s(m, k);
            const int degree = data_quadrature_degree(k) + 2;
            const Eigen::VectorXd pi = interpolate_sigma(m, s.sigma, f, degree);
            const Eigen::VectorXd exact = b_field_against_gradients(m, f, s.w, degree);
            const Eigen::VectorXd discrete = Eigen::MatrixXd(assemble_gradient_coupling(m, s.sigma, s.w)).transpose() * pi;
            // holds for every W_h function, not only those vanishing on Gamma_D
            CHECK(max_diff(exact, discrete) <= 1e-10 * std::max(1.0, exact.cwiseAbs().maxCoeff()));
        }
}

TEST_CASE("interpolation is a projection") {
    const Mesh m = build_structured_cube(1, {CubeFace::XMin});
    const VectorField v{[](const Vec3& x) { return Vec3(std::sin(x[1] + 1), std::exp(x[0]) * x[2], std::cos(3 * x[0] * x[1])); },
                        nullptr};
    const ScalarField w{[](const Vec3& x) { return std::sin(2 * x[0]) * std::cos(x[1] - x[2]); }, nullptr};
    for (int k = 1; k <= 2; ++k) {
        const SpaceSet s(m, k);
        const Eigen::VectorXd cs = interpolate_sigma(m, s.sigma, trig_stress());
        CHECK(max_diff(interpolate_sigma(m, s.sigma, testing::as_tensor_field(m, s.sigma, cs)), cs) < 1e-12);
        const Eigen::VectorXd cv = interpolate_v(m, s.v, v);
        CHECK(max_diff(interpolate_v(m, s.v, testing::as_vector_field(m, s.v, cv)), cv) < 1e-12);
        const Eigen::VectorXd cw = interpolate_w(m, s.w, w);
        CHECK(max_diff(interpolate_w(m, s.w, testing::as_scalar_field(m, s.w, cw)), cw) < 1e-12);
    }
}
