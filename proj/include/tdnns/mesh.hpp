#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tdnns/linalg.hpp"

namespace tdnns {

enum class BoundaryTag { Dirichlet, Neumann };

enum class CubeFace { XMin, XMax, YMin, YMax, ZMin, ZMax };

/// Raised when mesh data violates a structural invariant (orientation,
/// conformity, boundary tagging).
class MeshError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Local entity numbering on a tetrahedron. Local face i is opposite local
/// vertex i; its vertices are listed in increasing local order.
inline constexpr std::array<std::array<int, 2>, 6> kLocalEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
inline constexpr std::array<std::array<int, 3>, 4> kLocalFaces = {
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

struct TaggedFace {
    std::array<int, 3> vertices;
    BoundaryTag tag;
};

/// Affine tetrahedral mesh with globally numbered, oriented faces and edges.
///
/// Faces store their vertices sorted ascending; the stored unit normal points
/// out of the lower-indexed incident cell (outward on the boundary). Edges
/// store sorted vertex pairs, tangent from the lower to the higher vertex.
class Mesh {
public:
    Mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> cells,
         const std::vector<TaggedFace>& boundary);

    std::size_t num_vertices() const { return vertices_.size(); }
    std::size_t num_cells() const { return cells_.size(); }
    std::size_t num_faces() const { return faces_.size(); }
    std::size_t num_edges() const { return edges_.size(); }

    const std::vector<Vec3>& vertices() const { return vertices_; }
    const Vec3& vertex(int v) const { return vertices_[static_cast<std::size_t>(v)]; }
    const std::array<int, 4>& cell(int c) const { return cells_[static_cast<std::size_t>(c)]; }
    const std::array<int, 3>& face(int f) const { return faces_[static_cast<std::size_t>(f)]; }
    const std::array<int, 2>& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }

    const std::array<int, 4>& cell_faces(int c) const { return cell_faces_[static_cast<std::size_t>(c)]; }
    /// +1 where the cell's outward normal agrees with the stored face normal.
    const std::array<int, 4>& cell_face_signs(int c) const { return cell_face_signs_[static_cast<std::size_t>(c)]; }
    const std::array<int, 6>& cell_edges(int c) const { return cell_edges_[static_cast<std::size_t>(c)]; }
    /// +1 where the local edge direction (lower to higher local index) agrees
    /// with the global tangent.
    const std::array<int, 6>& cell_edge_signs(int c) const { return cell_edge_signs_[static_cast<std::size_t>(c)]; }

    /// Incident cells; second entry is -1 on the boundary.
    const std::array<int, 2>& face_cells(int f) const { return face_cells_[static_cast<std::size_t>(f)]; }
    bool is_boundary_face(int f) const { return face_cells(f)[1] < 0; }
    std::optional<BoundaryTag> boundary_tag(int f) const { return tags_[static_cast<std::size_t>(f)]; }
    const Vec3& face_normal(int f) const { return face_normals_[static_cast<std::size_t>(f)]; }

    double face_area(int f) const;
    double cell_volume(int c) const;

    /// Local vertex ranks of a cell: rank[i] is the position of local vertex
    /// i when the cell's four global vertex indices are sorted ascending.
    std::array<int, 4> vertex_ranks(int c) const;

    /// Faces touching a Dirichlet/Neumann region, and edges lying on one.
    std::vector<bool> faces_with_tag(BoundaryTag tag) const;
    std::vector<bool> edges_on(BoundaryTag tag) const;
    std::vector<bool> vertices_on(BoundaryTag tag) const;

    double max_cell_size() const;

    struct QualityReport {
        double min_aspect = 0.0;
        double max_aspect = 0.0;
    };
    /// Normalized aspect ratio (1 for a regular tetrahedron); diagnostic only.
    QualityReport quality() const;

private:
    std::vector<Vec3> vertices_;
    std::vector<std::array<int, 4>> cells_;
    std::vector<std::array<int, 3>> faces_;
    std::vector<std::array<int, 2>> edges_;
    std::vector<std::array<int, 4>> cell_faces_;
    std::vector<std::array<int, 4>> cell_face_signs_;
    std::vector<std::array<int, 6>> cell_edges_;
    std::vector<std::array<int, 6>> cell_edge_signs_;
    std::vector<std::array<int, 2>> face_cells_;
    std::vector<std::optional<BoundaryTag>> tags_;
    std::vector<Vec3> face_normals_;
};

/// Unit cube split into n^3 sub-cubes, each cut into six Kuhn tetrahedra.
/// Boundary faces on the listed cube faces are Dirichlet, the rest Neumann.
Mesh build_structured_cube(int n, const std::set<CubeFace>& dirichlet);

std::set<CubeFace> all_cube_faces();

/// Plain-text mesh reader/writer:
///   nv nc nb
///   x y z            (nv lines)
///   v0 v1 v2 v3      (nc lines)
///   v0 v1 v2 tag     (nb lines, tag D or N)
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const Mesh& mesh);

/// Affine map from the reference tetrahedron (0,0,0),(1,0,0),(0,1,0),(0,0,1)
/// onto a mesh cell, with its derived face and edge quantities.
struct ElementTransform {
    Vec3 origin;
    Mat3 jacobian;
    double det = 0.0;
    Mat3 inverse;
    Mat3 inverse_transpose;
    /// Measure ratio |F| / |F_ref| and outward unit normal per local face.
    std::array<double, 4> face_scale{};
    std::array<Vec3, 4> face_normal;
    /// Length ratio |E| / |E_ref| and unit tangent per local edge.
    std::array<double, 6> edge_scale{};
    std::array<Vec3, 6> edge_tangent;
    /// Spectral norm of the jacobian.
    double h = 0.0;

    Vec3 map(const Vec3& ref) const { return origin + jacobian * ref; }
    Vec3 map_back(const Vec3& x) const { return inverse * (x - origin); }
};

ElementTransform element_transform(const Mesh& mesh, int cell);
ElementTransform element_transform(const std::array<Vec3, 4>& vertices);

/// Diameter (longest edge) of a face.
double face_jump_measure(const Mesh& mesh, int face);

/// Reference-element constants.
namespace ref {
inline const std::array<Vec3, 4> vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
/// Outward unit normal of reference face i (opposite vertex i).
Vec3 face_normal(int face);
double face_area(int face);
double edge_length(int edge);
} // namespace ref

} // namespace tdnns
