#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "support.hpp"
#include "tdnns/interpolation.hpp"
#include "tdnns/norms.hpp"

using namespace tdnns;

namespace {

constexpr double kPi = std::numbers::pi;

TensorField smooth_stress() {
    return {[](const Vec3& x) {
        const double s = std::sin(kPi * x[0]) * std::sin(kPi * x[1]) * std::sin(kPi * x[2]);
        return SymTensor3(s, 2 * s, x[0] * x[1], std::cos(kPi * x[2]), 0.5, s * x[0]);
    }};
}

// Largest generalized eigenvalue of (face Gram, L2 Gram).
double face_domination(int n, int k) {
    const Mesh m = build_structured_cube(n, all_cube_faces());
    const DofMap s(m, Space::Sigma, k);
    const Eigen::MatrixXd face = Eigen::MatrixXd(sigma_face_gram(m, s));
    const Eigen::MatrixXd l2 = Eigen::MatrixXd(sigma_l2_gram(m, s));
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(face, l2, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

} // namespace

TEST_CASE("zero field has zero norms") {
    const Mesh m = build_structured_cube(1, {CubeFace::XMin});
    const SpaceSet s(m, 1);
    const SigmaNorm sn(m, s.sigma, s.w);
    const NormReport r = sn.of_coefficients(Eigen::VectorXd::Zero(s.sigma.size()));
    CHECK(r.sigma_h_norm == 0.0);
    CHECK(sn.of_difference(nullptr, {}, 4).sigma_h_norm == 0.0);
    CHECK(hcurl_norm(m, s.v, Eigen::VectorXd::Zero(s.v.size()), nullptr, 4).total == 0.0);
    CHECK(broken_h1_norm(m, s.v, Eigen::VectorXd::Zero(s.v.size()), nullptr, 4).total == 0.0);
    CHECK(h1_norm(m, s.w, Eigen::VectorXd::Zero(s.w.size()), nullptr, 4).total == 0.0);
}

TEST_CASE("stress norm parts combine as a sum of squares") {
    const Mesh m = build_structured_cube(2, {CubeFace::XMin, CubeFace::YMax});
    for (int k = 1; k <= 2; ++k) {
        const SpaceSet s(m, k);
        const SigmaNorm sn(m, s.sigma, s.w);
        const NormReport r = sn.of_coefficients(testing::random_vector(s.sigma.size(), 3));
        CHECK(r.sigma_h_norm * r.sigma_h_norm ==
              doctest::Approx(r.l2_sigma * r.l2_sigma + r.face_term * r.face_term + r.dual_term * r.dual_term)
                  .epsilon(1e-13));
        CHECK(r.dual_term > 0.0);
        CHECK(r.dual_residual <= 1e-12);
    }
}

TEST_CASE("coefficient and field routes agree on discrete functions") {
    const Mesh m = testing::two_cell_mesh(2);
    const SpaceSet s(m, 2);
    const SigmaNorm sn(m, s.sigma, s.w);
    const Eigen::VectorXd c = testing::random_vector(s.sigma.size(), 4);
    const NormReport a = sn.of_coefficients(c);
    const NormReport b = sn.of_difference(nullptr, c, 6);
    CHECK(a.l2_sigma == doctest::Approx(b.l2_sigma).epsilon(1e-12));
    CHECK(a.face_term == doctest::Approx(b.face_term).epsilon(1e-12));
    CHECK(a.dual_term == doctest::Approx(b.dual_term).epsilon(1e-10));
    // field minus its own coefficients
    const TensorField f = testing::as_tensor_field(m, s.sigma, c);
    const NormReport z = sn.of_difference(&f, c, 4);
    CHECK(z.l2_sigma < 1e-12);
    CHECK(z.dual_term < 1e-10);
}

TEST_CASE("dual term vanishes on the kernel of B") {
    const Mesh m = build_structured_cube(1, {CubeFace::XMin, CubeFace::ZMax});
    for (int k = 1; k <= 2; ++k) {
        const SpaceSet s(m, k);
        const SigmaNorm sn(m, s.sigma, s.w);
        const Eigen::MatrixXd b = Eigen::MatrixXd(submatrix(assemble_B(m, s.sigma, s.v), s.v.free_dofs(), s.sigma.free_dofs()));
        const Eigen::MatrixXd kernel = Eigen::FullPivLU<Eigen::MatrixXd>(b).kernel();
        REQUIRE(kernel.cols() > 0);
        for (int j = 0; j < std::min<int>(5, static_cast<int>(kernel.cols())); ++j) {
            Eigen::VectorXd full = Eigen::VectorXd::Zero(s.sigma.size());
            for (std::size_t i = 0; i < s.sigma.free_dofs().size(); ++i)
                full[s.sigma.free_dofs()[i]] = kernel(static_cast<Eigen::Index>(i), j);
            const NormReport r = sn.of_coefficients(full);
            CHECK(r.dual_term <= 1e-10 * r.l2_sigma);
        }
    }
}

TEST_CASE("dual term of the interpolation error is negligible") {
    const TensorField f = smooth_stress();
    const Mesh m = build_structured_cube(2, {CubeFace::XMin});
    for (int k = 1; k <= 2; ++k) {
        const SpaceSet s(m, k);
        const SigmaNorm sn(m, s.sigma, s.w);
        const int degree = data_quadrature_degree(k) + 2;
        const NormReport err = sn.of_difference(&f, interpolate_sigma(m, s.sigma, f, degree), degree);
        const NormReport ref = sn.of_difference(&f, {}, degree);
        CHECK(err.dual_term <= 1e-9 * ref.l2_sigma);
        CHECK(err.l2_sigma > 0.0);
        CHECK(err.dual_residual <= 1e-12);
    }
}

TEST_CASE("dual solve residual") {
    const Mesh m = build_structured_cube(2, {CubeFace::ZMin});
    const SpaceSet s(m, 2);
    const SigmaNorm sn(m, s.sigma, s.w);
    double res = 1.0;
    const double d = sn.dual(testing::random_vector(static_cast<int>(sn.stiffness().rows()), 6), &res);
    CHECK(d > 0.0);
    CHECK(res <= 1e-12);
}

TEST_CASE("H(curl) norm examples on the unit cube") {
    const Mesh m = build_structured_cube(2, {CubeFace::XMin});
    for (int k = 1; k <= 2; ++k) {
        const SpaceSet s(m, k);
        const VectorField e1{[](const Vec3&) { return Vec3(1, 0, 0); }, [](const Vec3&) { return Mat3::Zero().eval(); }};
        CHECK(hcurl_norm(m, s.v, interpolate_v(m, s.v, e1), nullptr, 4).total == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(hcurl_norm(m, s.v, {}, &e1, 4).total == doctest::Approx(1.0).epsilon(1e-12));

        const VectorField vx{[](const Vec3& x) { return Vec3(0, x[0], 0); }, [](const Vec3&) {
                                 Mat3 j = Mat3::Zero();
                                 j(1, 0) = 1.0;
                                 return j;
                             }};
        const HCurlReport r = hcurl_norm(m, s.v, interpolate_v(m, s.v, vx), nullptr, 4);
        CHECK(r.l2 * r.l2 == doctest::Approx(1.0 / 3).epsilon(1e-12));
        CHECK(r.curl == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.total * r.total == doctest::Approx(4.0 / 3).epsilon(1e-12));
        CHECK(hcurl_norm(m, s.v, {}, &vx, 4).total * hcurl_norm(m, s.v, {}, &vx, 4).total ==
              doctest::Approx(4.0 / 3).epsilon(1e-12));

        const Eigen::VectorXd grad = gradient_embedding(m, s.v, s.w) * testing::random_vector(s.w.size(), 8);
        const HCurlReport g = hcurl_norm(m, s.v, grad, nullptr, 4);
        CHECK(g.curl <= 1e-11 * g.l2);
    }
}

TEST_CASE("broken H1 norm") {
    SUBCASE("a smooth field has no jumps and no strain error") {
        const Mesh m = build_structured_cube(2, {CubeFace::XMin});
        const Mat3 g = (Mat3() << 1, 2, 0, 0, -1, 3, 1, 0, 2).finished();
        const VectorField f{[g](const Vec3& x) { return Vec3(g * x); }, [g](const Vec3&) { return g; }};
        const SpaceSet s(m, 1);
        const Eigen::VectorXd c = interpolate_v(m, s.v, f);
        const BrokenH1Report own = broken_h1_norm(m, s.v, c, nullptr, 4);
        CHECK(own.jump <= 1e-12);
        CHECK(own.strain == doctest::Approx(sym(g).norm()).epsilon(1e-12));
        CHECK(broken_h1_norm(m, s.v, c, &f, 4).total <= 1e-12);
    }
    SUBCASE("rigid motions have zero strain") {
        const Mesh m = testing::two_cell_mesh(3);
        const Vec3 a(0.3, -1, 2), b(1, 0.5, -0.25);
        const VectorField rigid{[a, b](const Vec3& x) { return Vec3(a + b.cross(x)); }, nullptr};
        for (int k = 1; k <= 2; ++k) {
            const DofMap v(m, Space::V, k);
            const BrokenH1Report r = broken_h1_norm(m, v, interpolate_v(m, v, rigid), nullptr, 4);
            CHECK(r.strain <= 1e-12);
            CHECK(r.jump <= 1e-12);
        }
    }
    SUBCASE("jump term matches hand quadrature on the shared face") {
        const Mesh m = testing::two_cell_mesh(2);
        const DofMap v(m, Space::V, 1);
        const Eigen::VectorXd c = testing::random_vector(v.size(), 12);
        int f = 0;
        while (m.is_boundary_face(f))
            ++f;
        const auto [c0, c1] = m.face_cells(f);
        const ElementTransform x0 = element_transform(m, c0), x1 = element_transform(m, c1);
        const auto& fv = m.face(f);
        const Vec3 a = m.vertex(fv[0]), b = m.vertex(fv[1]), d = m.vertex(fv[2]);
        const TriRule& rule = tri_rule(4);
        const double area2 = (b - a).cross(d - a).norm();
        double acc = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Vec3 x = a + rule.points[q][0] * (b - a) + rule.points[q][1] * (d - a);
            const Vec3 jump = evaluate_fe(v.basis(c0), x0, v.cell_dofs(c0), c, x0.map_back(x)) -
                              evaluate_fe(v.basis(c1), x1, v.cell_dofs(c1), c, x1.map_back(x));
            acc += rule.weights[q] * area2 * std::pow(jump.dot(m.face_normal(f)), 2);
        }
        const double expected = std::sqrt(acc / face_jump_measure(m, f));
        CHECK(expected > 1e-3);
        CHECK(broken_h1_norm(m, v, c, nullptr, 4).jump == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("H1 norm of W functions") {
    const Mesh m = build_structured_cube(1, {CubeFace::XMin});
    const DofMap w(m, Space::W, 2);
    const ScalarField f{[](const Vec3& x) { return x[0] + 2 * x[1]; }, [](const Vec3&) { return Vec3(1, 2, 0); }};
    const Eigen::VectorXd c = interpolate_w(m, w, f);
    const H1Report r = h1_norm(m, w, c, nullptr, 4);
    // int (x + 2y)^2 = 1/3 + 4/3 + 2*2*(1/4) = 8/3
    CHECK(r.l2 * r.l2 == doctest::Approx(8.0 / 3).epsilon(1e-12));
    CHECK(r.gradient * r.gradient == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(h1_norm(m, w, c, &f, 4).total <= 1e-12);
}

TEST_CASE("face terms are dominated by the L2 term uniformly under refinement") {
    for (int k = 1; k <= 2; ++k) {
        const double c1 = face_domination(1, k);
        const double c2 = face_domination(2, k);
        MESSAGE("k=" << k << " face/L2 constant: n=1 " << c1 << ", n=2 " << c2);
        CHECK(c1 > 0.0);
        CHECK(c2 <= 1.5 * c1);
    }
}

TEST_CASE("broken H1 versus H(curl) ratio (diagnostic)") {
    const Mesh m = build_structured_cube(2, {CubeFace::XMin});
    const DofMap v(m, Space::V, 1);
    double lo = 1e300, hi = 0.0;
    for (unsigned seed = 0; seed < 5; ++seed) {
        const Eigen::VectorXd c = testing::random_vector(v.size(), 70 + seed);
        const double ratio = broken_h1_norm(m, v, c, nullptr, 4).total / hcurl_norm(m, v, c, nullptr, 4).total;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    MESSAGE("broken H1 / H(curl) over random V_h functions: min " << lo << ", max " << hi);
    CHECK(lo > 0.0);
}
