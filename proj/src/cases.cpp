#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "tdnns/harness.hpp"

namespace tdnns {

namespace {

constexpr double kPi = std::numbers::pi;

std::set<CubeFace> mixed_dirichlet() {
    return {CubeFace::XMin, CubeFace::YMin, CubeFace::ZMin, CubeFace::ZMax};
}

ManufacturedCase linear_case(const MaterialLaw& mat, std::set<CubeFace> dirichlet, std::string name) {
    Mat3 g;
    g << 1, 2, 0,
         0, 0, 3,
         1, -1, 0;
    const SymTensor3 s = mat.stiffness(SymTensor3::from_matrix(sym(g)));
    ManufacturedCase c;
    c.name = std::move(name);
    c.material = mat;
    c.dirichlet = std::move(dirichlet);
    c.u = {[g](const Vec3& x) { return Vec3(g * x); }, [g](const Vec3&) { return g; }};
    c.sigma = {[s](const Vec3&) { return s; }};
    c.f = [](const Vec3&) { return Vec3::Zero().eval(); };
    c.w = {[](const Vec3& x) { return x[0] * x[1] + x[2] * x[2]; },
           [](const Vec3& x) { return Vec3(x[1], x[0], 2 * x[2]); }};
    return c;
}

// u_i = S for every component, S = sin(pi x) sin(pi y) sin(pi z).
ManufacturedCase trig_case(const MaterialLaw& mat, std::set<CubeFace> dirichlet, std::string name) {
    const double lam = mat.lambda();
    const double mu = mat.mu();
    auto grad_s = [](const Vec3& x) {
        const double sx = std::sin(kPi * x[0]), sy = std::sin(kPi * x[1]), sz = std::sin(kPi * x[2]);
        const double cx = std::cos(kPi * x[0]), cy = std::cos(kPi * x[1]), cz = std::cos(kPi * x[2]);
        return Vec3(kPi * cx * sy * sz, kPi * sx * cy * sz, kPi * sx * sy * cz);
    };
    ManufacturedCase c;
    c.name = std::move(name);
    c.material = mat;
    c.dirichlet = std::move(dirichlet);
    auto s_val = [](const Vec3& x) { return std::sin(kPi * x[0]) * std::sin(kPi * x[1]) * std::sin(kPi * x[2]); };
    c.u = {[s_val](const Vec3& x) { return Vec3::Constant(s_val(x)).eval(); },
           [grad_s](const Vec3& x) {
               // every row equals grad S
               return Mat3(Vec3::Ones() * grad_s(x).transpose());
           }};
    c.sigma = {[grad_s, lam, mu](const Vec3& x) {
        const Vec3 g = grad_s(x);
        const Mat3 eps = 0.5 * (Vec3::Ones() * g.transpose() + g * Vec3::Ones().transpose());
        return SymTensor3::from_matrix(lam * g.sum() * Mat3::Identity() + 2.0 * mu * eps);
    }};
    c.f = [lam, mu](const Vec3& x) {
        const double sx = std::sin(kPi * x[0]), sy = std::sin(kPi * x[1]), sz = std::sin(kPi * x[2]);
        const double cx = std::cos(kPi * x[0]), cy = std::cos(kPi * x[1]), cz = std::cos(kPi * x[2]);
        const double s = sx * sy * sz;
        const double p2 = kPi * kPi;
        Mat3 h;
        h << -p2 * s, p2 * cx * cy * sz, p2 * cx * sy * cz,
             p2 * cx * cy * sz, -p2 * s, p2 * sx * cy * cz,
             p2 * cx * sy * cz, p2 * sx * cy * cz, -p2 * s;
        // -div sigma_i = -(mu lap S + (lam + mu) sum_k d_i d_k S)
        const Vec3 row_sums = h.rowwise().sum();
        return Vec3(-(mu * (-3.0 * p2 * s) * Vec3::Ones() + (lam + mu) * row_sums));
    };
    c.w = {s_val, grad_s};
    return c;
}

} // namespace

LoadData ManufacturedCase::load() const {
    LoadData d;
    d.body_force = f;
    d.displacement = u.value;
    auto s = sigma.value;
    d.traction = [s](const Vec3& x, const Vec3& n) { return Vec3(s(x).to_matrix() * n); };
    return d;
}

double ManufacturedCase::equilibrium_defect(unsigned seed) const {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(0.05, 0.95);
    const double step = 1e-5;
    double worst = 0.0;
    for (int p = 0; p < 20; ++p) {
        const Vec3 x(dist(rng), dist(rng), dist(rng));
        Vec3 div = Vec3::Zero();
        for (int j = 0; j < 3; ++j) {
            Vec3 e = Vec3::Zero();
            e[j] = step;
            const Mat3 d = (sigma.value(x + e).to_matrix() - sigma.value(x - e).to_matrix()) / (2 * step);
            div += d.col(j);
        }
        const Vec3 fx = f(x);
        worst = std::max(worst, (-div - fx).norm() / std::max(1.0, fx.norm()));
    }
    return worst;
}

std::vector<std::string> builtin_case_names() { return {"linear", "linear-mixed", "trig", "mixed"}; }

ManufacturedCase builtin_case(const std::string& name, const MaterialLaw& material) {
    material.validate();
    ManufacturedCase c;
    if (name == "linear")
        c = linear_case(material, all_cube_faces(), name);
    else if (name == "linear-mixed")
        c = linear_case(material, mixed_dirichlet(), name);
    else if (name == "trig")
        c = trig_case(material, all_cube_faces(), name);
    else if (name == "mixed")
        c = trig_case(material, mixed_dirichlet(), name);
    else {
        std::ostringstream s;
        s << "unknown case '" << name << "'; valid cases:";
        for (const auto& n : builtin_case_names())
            s << ' ' << n;
        throw ConfigError(s.str());
    }
    const double defect = c.equilibrium_defect();
    if (!(defect <= 1e-3))
        throw std::logic_error("case '" + name + "' fails the equilibrium check");
    return c;
}

} // namespace tdnns
