#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "support.hpp"
#include "tdnns/interpolation.hpp"
#include "tdnns/norms.hpp"
#include "tdnns/solver.hpp"

using namespace tdnns;

namespace {

const MaterialLaw kMaterial{1.0, 0.3};

struct Linear {
    Mat3 g;
    SymTensor3 sigma;
    LoadData load;
    VectorField u;
    TensorField s;
};

Linear linear_solution(const Mat3& g, const Vec3& shift) {
    Linear l;
    l.g = g;
    l.sigma = kMaterial.stiffness(SymTensor3::from_matrix(sym(g)));
    const SymTensor3 sig = l.sigma;
    l.load.body_force = [](const Vec3&) { return Vec3::Zero().eval(); };
    l.load.displacement = [g, shift](const Vec3& x) { return Vec3(g * x + shift); };
    l.load.traction = [sig](const Vec3&, const Vec3& n) { return Vec3(sig.to_matrix() * n); };
    l.u = {l.load.displacement, [g](const Vec3&) { return g; }};
    l.s = {[sig](const Vec3&) { return sig; }};
    return l;
}

struct Errors {
    double sigma;
    double u;
};

Errors solve_and_measure(const Mesh& m, int k, const Linear& l, SaddleSolution* out = nullptr) {
    const SpaceSet s(m, k);
    const SaddleSystem sys = assemble_system(m, kMaterial, l.load, s.sigma, s.v);
    const SaddleSolution sol = solve_saddle(sys);
    if (out)
        *out = sol;
    const SigmaNorm sn(m, s.sigma, s.w);
    return {sn.of_difference(&l.s, sys.expand_sigma(sol.sigma), 4).sigma_h_norm,
            hcurl_norm(m, s.v, sys.expand_v(sol.u), &l.u, 4).total};
}

} // namespace

TEST_CASE("patch test: linear displacement with constant stress is reproduced") {
    const Linear l = linear_solution((Mat3() << 1, 2, 0, 0, 0, 3, 1, -1, 0).finished(), Vec3::Zero());
    const std::vector<std::set<CubeFace>> bcs = {all_cube_faces(), {CubeFace::XMin, CubeFace::YMin, CubeFace::ZMin, CubeFace::ZMax},
                                                 {CubeFace::XMax}};
    for (const auto& bc : bcs)
        for (int k = 1; k <= 2; ++k)
            for (int n = 1; n <= 2; ++n) {
                CAPTURE(k);
                CAPTURE(n);
                SaddleSolution sol;
                const Errors e = solve_and_measure(build_structured_cube(n, bc), k, l, &sol);
                CHECK(e.sigma + e.u <= 1e-9);
                CHECK(sol.relative_residual <= 1e-10);
            }
    // irregular numbering exercises non-identity rank patterns
    const Errors e = solve_and_measure(testing::two_cell_mesh(4), 2, l);
    CHECK(e.sigma + e.u <= 1e-9);
}

TEST_CASE("zero data gives the zero solution") {
    const Mesh m = build_structured_cube(2, {CubeFace::XMin, CubeFace::YMax});
    const SpaceSet s(m, 1);
    LoadData d;
    d.body_force = [](const Vec3&) { return Vec3::Zero().eval(); };
    d.displacement = d.body_force;
    d.traction = [](const Vec3&, const Vec3&) { return Vec3::Zero().eval(); };
    const SaddleSolution sol = solve_saddle(assemble_system(m, kMaterial, d, s.sigma, s.v));
    CHECK(sol.sigma.norm() == 0.0);
    CHECK(sol.u.norm() == 0.0);
}

TEST_CASE("rigid motion data produces zero stress") {
    const Vec3 a(0.5, -1, 2), b(0.3, 0.2, -0.7);
    Mat3 skew;
    skew << 0, -b[2], b[1], b[2], 0, -b[0], -b[1], b[0], 0;
    const Linear l = linear_solution(skew, a);
    CHECK(l.sigma.to_matrix().norm() < 1e-15);
    for (int k = 1; k <= 2; ++k) {
        const Errors e = solve_and_measure(build_structured_cube(2, all_cube_faces()), k, l);
        CHECK(e.sigma <= 1e-9);
        CHECK(e.u <= 1e-9);
    }
}

TEST_CASE("solution satisfies the independently assembled equations") {
    const Mesh m = build_structured_cube(2, {CubeFace::XMin, CubeFace::ZMax});
    const SpaceSet s(m, 2);
    LoadData d;
    d.body_force = [](const Vec3& x) { return Vec3(std::sin(x[0]), x[1] * x[2], 1.0); };
    d.displacement = [](const Vec3& x) { return Vec3(0.1 * x[1], 0.0, x[0] * x[0]); };
    d.traction = [](const Vec3& x, const Vec3& n) { return Vec3(n * x[2] + Vec3(0, 1, 0)); };
    const SaddleSystem sys = assemble_system(m, kMaterial, d, s.sigma, s.v);
    const SaddleSolution sol = solve_saddle(sys);
    const Eigen::VectorXd fs = sys.expand_sigma(sol.sigma), fu = sys.expand_v(sol.u);

    const SparseMatrix a = assemble_A(m, kMaterial, s.sigma);
    const SparseMatrix b = assemble_B(m, s.sigma, s.v);
    const RightHandSide r = assemble_rhs(m, d, s.sigma, s.v);
    const Eigen::VectorXd eq1 = a * fs + SparseMatrix(b.transpose()) * fu - r.sigma;
    const Eigen::VectorXd eq2 = b * fs - r.v;
    double worst1 = 0.0, worst2 = 0.0;
    for (int i : s.sigma.free_dofs())
        worst1 = std::max(worst1, std::abs(eq1[i]));
    for (int j : s.v.free_dofs())
        worst2 = std::max(worst2, std::abs(eq2[j]));
    const double scale = std::max(r.sigma.cwiseAbs().maxCoeff(), r.v.cwiseAbs().maxCoeff());
    CHECK(worst1 <= 1e-10 * scale);
    CHECK(worst2 <= 1e-10 * scale);
    CHECK(sol.relative_residual <= 1e-10);
}

TEST_CASE("saddle matrix inertia") {
    for (int k = 1; k <= 2; ++k) {
        const Mesh m = build_structured_cube(1, {CubeFace::XMin});
        const SpaceSet s(m, k);
        const Linear l = linear_solution(Mat3::Identity(), Vec3::Zero());
        const SaddleSystem sys = assemble_system(m, kMaterial, l.load, s.sigma, s.v);
        const SaddleSolution sol = solve_saddle(sys, {1e-8, 100000});
        REQUIRE(sol.inertia.has_value());
        CHECK(sol.inertia->positive == sys.num_sigma());
        CHECK(sol.inertia->negative == sys.num_v());
        CHECK(sol.inertia->zero == 0);
    }
}

TEST_CASE("symmetric inertia of known matrices") {
    Eigen::MatrixXd d = Eigen::Vector4d(1, -2, 0, 3).asDiagonal();
    Inertia i = symmetric_inertia(d);
    CHECK(i.positive == 2);
    CHECK(i.negative == 1);
    CHECK(i.zero == 1);

    Eigen::MatrixXd swap(2, 2);
    swap << 0, 1, 1, 0; // forces a 2x2 pivot
    i = symmetric_inertia(swap);
    CHECK(i.positive == 1);
    CHECK(i.negative == 1);

    const Eigen::MatrixXd r = Eigen::MatrixXd::Random(7, 7);
    const Eigen::MatrixXd sym_m = r + r.transpose();
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym_m).eigenvalues();
    i = symmetric_inertia(sym_m);
    CHECK(i.positive == (ev.array() > 0).count());
    CHECK(i.negative == (ev.array() < 0).count());
    CHECK(symmetric_inertia(Eigen::MatrixXd(0, 0)).positive == 0);
}

TEST_CASE("singular systems are reported") {
    SaddleSystem sys;
    sys.A.resize(2, 2);
    sys.B.resize(1, 2); // zero coupling: the displacement block is singular
    sys.A.insert(0, 0) = 1.0;
    sys.A.insert(1, 1) = 1.0;
    sys.rhs_sigma = Eigen::VectorXd::Ones(2);
    sys.rhs_v = Eigen::VectorXd::Ones(1);
    CHECK_THROWS_AS(solve_saddle(sys), SolverError);
}

TEST_CASE("stability constants") {
    const Mesh m = build_structured_cube(1, {CubeFace::XMin, CubeFace::YMin, CubeFace::ZMin, CubeFace::ZMax});
    const StabilityReport r = stability_constants(m, kMaterial, 1);
    CHECK(r.infsup > 0.0);
    CHECK(r.continuity >= r.infsup);
    CHECK(r.kernel_coercivity > 0.0);
    CHECK(r.kernel_dim == r.num_sigma - r.num_v);
    CHECK(r.compliance_bound == doctest::Approx(0.4));
    MESSAGE("n=1 mixed: inf-sup " << r.infsup << ", kernel coercivity " << r.kernel_coercivity << ", continuity "
                                  << r.continuity);

    // the cap names itself in the error
    try {
        stability_constants(m, kMaterial, 1, 10);
        FAIL("expected a cap error");
    } catch (const SolverError& e) {
        CHECK(std::string(e.what()).find("cap of 10") != std::string::npos);
    }
}

TEST_CASE("on the kernel of B, a(tau, tau) is bounded below by the compliance bound times the L2 norm") {
    // the dual term vanishes on the kernel, so coercivity reduces to the
    // pointwise compliance bound in L2
    const Mesh m = build_structured_cube(1, {CubeFace::XMin});
    for (int k = 1; k <= 2; ++k) {
        const SpaceSet s(m, k);
        const auto& sf = s.sigma.free_dofs();
        const Eigen::MatrixXd b = Eigen::MatrixXd(submatrix(assemble_B(m, s.sigma, s.v), s.v.free_dofs(), sf));
        const Eigen::MatrixXd z = Eigen::FullPivLU<Eigen::MatrixXd>(b).kernel();
        const Eigen::MatrixXd a = Eigen::MatrixXd(submatrix(assemble_A(m, kMaterial, s.sigma), sf, sf));
        const Eigen::MatrixXd l2 = Eigen::MatrixXd(submatrix(sigma_l2_gram(m, s.sigma), sf, sf));
        Eigen::MatrixXd za = z.transpose() * a * z, zl = z.transpose() * l2 * z;
        za = 0.5 * (za + za.transpose()).eval();
        zl = 0.5 * (zl + zl.transpose()).eval();
        const double lmin = Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd>(za, zl).eigenvalues().minCoeff();
        CHECK(lmin >= kMaterial.compliance_min_eigenvalue() * (1 - 1e-6));
    }
}
