#pragma once

#include <array>
#include <functional>
#include <vector>

#include "tdnns/linalg.hpp"
#include "tdnns/polynomial.hpp"

namespace tdnns {

enum class Space { Sigma, V, W };
enum class EntityKind { Vertex, Edge, Face, Interior };
/// W degrees of freedom: moment-based (commutes with the gradient and the V
/// interpolant) or plain Lagrange nodes.
enum class WVariant { Moment, Nodal };

const char* to_string(Space s);

/// The six constant reference tensors: four face tensors S^{F_1..F_4}
/// followed by the two interior tensors S^{T,1}, S^{T,2}. Face F_m
/// (m = 1, 2, 3) is {x_m = 0}; F_4 is the slanted face.
std::array<SymTensor3, 6> reference_tensors();

/// Face tensor attached to local face i (the face opposite local vertex i,
/// where local vertex 0 is the origin of the reference tetrahedron).
SymTensor3 face_tensor(int local_face);
SymTensor3 interior_tensor(int n);

/// Gradient of the reference barycentric coordinate lambda_i
/// (lambda_0 = 1 - x - y - z, lambda_i = x_i).
Vec3 barycentric_gradient(int i);

struct DofDescriptor {
    EntityKind kind;
    int entity; ///< local vertex/edge/face index, 0 for interior
    int moment; ///< index within the entity
};

/// Values and derivatives of all shape functions at one reference point.
struct ShapeValues {
    Eigen::MatrixXd value;                ///< components x shapes
    std::array<Eigen::MatrixXd, 3> deriv; ///< d/dx_j, components x shapes
    Eigen::MatrixXd hessian;              ///< scalar spaces only: 6 x shapes, pairs (00,11,22,12,02,01)
};

/// Shape functions on the reference tetrahedron, constructed as the dual
/// basis of a DOF functional set.
///
/// Entity parametrizations depend on `ranks` (the relative order of the
/// global indices of the cell's vertices): edges run from lower to higher
/// rank, faces are parametrized from their lowest-ranked vertex. Two cells
/// sharing an entity therefore evaluate identical functionals on it, which
/// makes shared DOFs agree without sign or permutation fix-ups.
class ReferenceBasis {
public:
    /// Field sampler: returns components x nfields values at a reference point.
    using Sampler = std::function<Eigen::MatrixXd(const Vec3&)>;

    ReferenceBasis(Space space, int order, std::array<int, 4> ranks, WVariant variant = WVariant::Moment);

    Space space() const { return space_; }
    /// Polynomial degree of the local space.
    int order() const { return order_; }
    int num_components() const { return ncomp_; }
    int size() const { return static_cast<int>(dofs_.size()); }
    const std::array<int, 4>& ranks() const { return ranks_; }
    WVariant variant() const { return variant_; }
    const std::vector<DofDescriptor>& dofs() const { return dofs_; }
    int dofs_on(EntityKind kind) const;
    double vandermonde_condition() const { return condition_; }
    const Eigen::MatrixXd& coefficients() const { return coeffs_; }

    ShapeValues evaluate(const Vec3& x) const;

    /// Applies every DOF functional to each of `nfields` reference fields.
    /// Smooth-field moments use quadrature of degree `quad_degree`.
    Eigen::MatrixXd apply_dofs(const Sampler& field, int nfields, int quad_degree) const;
    Eigen::VectorXd apply_dofs(const std::function<Eigen::VectorXd(const Vec3&)>& field, int quad_degree) const;

    /// Local vertices of face `f` / edge `e`, ordered by rank.
    std::array<int, 3> face_vertices(int f) const;
    std::array<int, 2> edge_vertices(int e) const;
    /// Reference point of the face parametrization (s, t) -> x.
    Vec3 face_point(int f, double s, double t) const;

private:
    void build_dofs();
    int exact_degree() const;

    Space space_;
    int order_;
    std::array<int, 4> ranks_;
    WVariant variant_;
    int ncomp_;
    Monomials mono_;
    std::vector<DofDescriptor> dofs_;
    Eigen::MatrixXd coeffs_; // rows: component * nmono + monomial
    double condition_ = 0.0;
};

inline constexpr std::array<int, 4> kIdentityRanks = {0, 1, 2, 3};

ReferenceBasis build_sigma_basis(int k, std::array<int, 4> ranks = kIdentityRanks);
ReferenceBasis build_v_basis(int k, std::array<int, 4> ranks = kIdentityRanks);
ReferenceBasis build_w_basis(int order, WVariant variant = WVariant::Moment,
                             std::array<int, 4> ranks = kIdentityRanks);

/// Shared, lazily built bases (one per space/order/variant/rank pattern).
const ReferenceBasis& cached_basis(Space space, int order, const std::array<int, 4>& ranks,
                                   WVariant variant = WVariant::Moment);

/// Raised when a DOF-Vandermonde matrix is singular.
class BasisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tdnns
