#include "tdnns/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace tdnns {

namespace {

std::array<int, 3> sorted3(std::array<int, 3> a) {
    std::sort(a.begin(), a.end());
    return a;
}

double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    return (b - a).cross(c - a).dot(d - a) / 6.0;
}

} // namespace

Mesh::Mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 4>> cells,
           const std::vector<TaggedFace>& boundary)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
    const int nv = static_cast<int>(vertices_.size());
    std::map<std::array<int, 3>, int> face_index;
    std::map<std::array<int, 2>, int> edge_index;

    for (std::size_t c = 0; c < cells_.size(); ++c) {
        const auto& cv = cells_[c];
        for (int i = 0; i < 4; ++i) {
            if (cv[i] < 0 || cv[i] >= nv)
                throw MeshError("cell " + std::to_string(c) + ": vertex index out of range");
            for (int j = 0; j < i; ++j)
                if (cv[i] == cv[j])
                    throw MeshError("cell " + std::to_string(c) + ": repeated vertex");
        }
        if (signed_volume(vertex(cv[0]), vertex(cv[1]), vertex(cv[2]), vertex(cv[3])) <= 0.0)
            throw MeshError("cell " + std::to_string(c) + ": non-positive orientation");

        std::array<int, 4> cf{};
        std::array<int, 4> cfs{};
        for (int i = 0; i < 4; ++i) {
            const auto& lf = kLocalFaces[static_cast<std::size_t>(i)];
            auto key = sorted3({cv[lf[0]], cv[lf[1]], cv[lf[2]]});
            auto [it, inserted] = face_index.try_emplace(key, static_cast<int>(faces_.size()));
            if (inserted) {
                faces_.push_back(key);
                face_cells_.push_back({static_cast<int>(c), -1});
                // outward normal of the first (lowest-index) incident cell
                const Vec3& a = vertex(key[0]);
                Vec3 nrm = (vertex(key[1]) - a).cross(vertex(key[2]) - a).normalized();
                if (nrm.dot(vertex(cv[i]) - a) > 0.0)
                    nrm = -nrm;
                face_normals_.push_back(nrm);
                cfs[i] = 1;
            } else {
                auto& fc = face_cells_[static_cast<std::size_t>(it->second)];
                if (fc[1] >= 0)
                    throw MeshError("face shared by more than two cells (cell " + std::to_string(c) + ")");
                fc[1] = static_cast<int>(c);
                cfs[i] = -1;
            }
            cf[i] = it->second;
        }
        cell_faces_.push_back(cf);
        cell_face_signs_.push_back(cfs);

        std::array<int, 6> ce{};
        std::array<int, 6> ces{};
        for (int e = 0; e < 6; ++e) {
            const auto& le = kLocalEdges[static_cast<std::size_t>(e)];
            int a = cv[le[0]];
            int b = cv[le[1]];
            ces[e] = a < b ? 1 : -1;
            std::array<int, 2> key{std::min(a, b), std::max(a, b)};
            auto [it, inserted] = edge_index.try_emplace(key, static_cast<int>(edges_.size()));
            if (inserted)
                edges_.push_back(key);
            ce[e] = it->second;
        }
        cell_edges_.push_back(ce);
        cell_edge_signs_.push_back(ces);
    }

    tags_.assign(faces_.size(), std::nullopt);
    bool has_dirichlet = false;
    for (const auto& tf : boundary) {
        auto it = face_index.find(sorted3(tf.vertices));
        if (it == face_index.end())
            throw MeshError("tagged face is not a mesh face");
        const int f = it->second;
        if (!is_boundary_face(f))
            throw MeshError("tagged face " + std::to_string(f) + " is interior");
        if (tags_[static_cast<std::size_t>(f)])
            throw MeshError("boundary face " + std::to_string(f) + " tagged twice");
        tags_[static_cast<std::size_t>(f)] = tf.tag;
        has_dirichlet = has_dirichlet || tf.tag == BoundaryTag::Dirichlet;
    }
    for (std::size_t f = 0; f < faces_.size(); ++f)
        if (is_boundary_face(static_cast<int>(f)) && !tags_[f])
            throw MeshError("boundary face " + std::to_string(f) + " has no tag");
    if (!has_dirichlet)
        throw MeshError("Dirichlet boundary is empty");
}

double Mesh::face_area(int f) const {
    const auto& fv = face(f);
    return 0.5 * (vertex(fv[1]) - vertex(fv[0])).cross(vertex(fv[2]) - vertex(fv[0])).norm();
}

double Mesh::cell_volume(int c) const {
    const auto& cv = cell(c);
    return signed_volume(vertex(cv[0]), vertex(cv[1]), vertex(cv[2]), vertex(cv[3]));
}

std::array<int, 4> Mesh::vertex_ranks(int c) const {
    const auto& cv = cell(c);
    std::array<int, 4> rank{};
    for (int i = 0; i < 4; ++i) {
        int r = 0;
        for (int j = 0; j < 4; ++j)
            if (cv[j] < cv[i])
                ++r;
        rank[i] = r;
    }
    return rank;
}

std::vector<bool> Mesh::faces_with_tag(BoundaryTag tag) const {
    std::vector<bool> out(faces_.size(), false);
    for (std::size_t f = 0; f < faces_.size(); ++f)
        out[f] = tags_[f] && *tags_[f] == tag;
    return out;
}

std::vector<bool> Mesh::edges_on(BoundaryTag tag) const {
    std::vector<bool> out(edges_.size(), false);
    const auto on_face = faces_with_tag(tag);
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        for (int i = 0; i < 4; ++i) {
            if (!on_face[static_cast<std::size_t>(cell_faces_[c][i])])
                continue;
            // the three edges of local face i are those not touching vertex i
            for (int e = 0; e < 6; ++e) {
                const auto& le = kLocalEdges[static_cast<std::size_t>(e)];
                if (le[0] != i && le[1] != i)
                    out[static_cast<std::size_t>(cell_edges_[c][e])] = true;
            }
        }
    }
    return out;
}

std::vector<bool> Mesh::vertices_on(BoundaryTag tag) const {
    std::vector<bool> out(vertices_.size(), false);
    const auto on_face = faces_with_tag(tag);
    for (std::size_t f = 0; f < faces_.size(); ++f)
        if (on_face[f])
            for (int v : faces_[f])
                out[static_cast<std::size_t>(v)] = true;
    return out;
}

double Mesh::max_cell_size() const {
    double h = 0.0;
    for (std::size_t c = 0; c < cells_.size(); ++c)
        h = std::max(h, element_transform(*this, static_cast<int>(c)).h);
    return h;
}

Mesh::QualityReport Mesh::quality() const {
    QualityReport q{1e300, 0.0};
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        const auto& cv = cells_[c];
        double longest = 0.0;
        for (const auto& le : kLocalEdges)
            longest = std::max(longest, (vertex(cv[le[1]]) - vertex(cv[le[0]])).norm());
        double area = 0.0;
        for (int f : cell_faces_[c])
            area += face_area(f);
        const double inradius = 3.0 * cell_volume(static_cast<int>(c)) / area;
        const double aspect = longest / (2.0 * std::sqrt(6.0) * inradius);
        q.min_aspect = std::min(q.min_aspect, aspect);
        q.max_aspect = std::max(q.max_aspect, aspect);
    }
    return q;
}

std::set<CubeFace> all_cube_faces() {
    return {CubeFace::XMin, CubeFace::XMax, CubeFace::YMin, CubeFace::YMax, CubeFace::ZMin, CubeFace::ZMax};
}

Mesh build_structured_cube(int n, const std::set<CubeFace>& dirichlet) {
    if (n < 1)
        throw std::invalid_argument("build_structured_cube: n must be >= 1");
    if (dirichlet.empty())
        throw std::invalid_argument("build_structured_cube: Dirichlet face set must be nonempty");

    const int m = n + 1;
    auto vid = [m](int i, int j, int k) { return i + m * (j + m * k); };

    std::vector<Vec3> vertices;
    vertices.reserve(static_cast<std::size_t>(m * m * m));
    for (int k = 0; k < m; ++k)
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < m; ++i)
                vertices.emplace_back(double(i) / n, double(j) / n, double(k) / n);

    // Kuhn split: one tetrahedron per monotone path from corner (0,0,0) to
    // corner (1,1,1); odd axis permutations are reoriented.
    static constexpr std::array<std::array<int, 3>, 6> perms = {
        {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}}};
    std::vector<std::array<int, 4>> cells;
    cells.reserve(static_cast<std::size_t>(6 * n * n * n));
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                for (std::size_t p = 0; p < perms.size(); ++p) {
                    std::array<int, 3> off{0, 0, 0};
                    std::array<int, 4> tet{};
                    tet[0] = vid(i, j, k);
                    for (int s = 0; s < 3; ++s) {
                        off[perms[p][s]] = 1;
                        tet[s + 1] = vid(i + off[0], j + off[1], k + off[2]);
                    }
                    if (p >= 3)
                        std::swap(tet[2], tet[3]);
                    cells.push_back(tet);
                }

    // Boundary: each boundary square contributes two triangles; recover them
    // from the cells so the split matches.
    std::map<std::array<int, 3>, int> count;
    for (const auto& c : cells)
        for (const auto& lf : kLocalFaces)
            ++count[sorted3({c[lf[0]], c[lf[1]], c[lf[2]]})];

    auto which_face = [&](const std::array<int, 3>& f) -> std::optional<CubeFace> {
        for (int axis = 0; axis < 3; ++axis) {
            bool lo = true;
            bool hi = true;
            for (int v : f) {
                double x = vertices[static_cast<std::size_t>(v)][axis];
                lo = lo && x == 0.0;
                hi = hi && x == 1.0;
            }
            if (lo)
                return static_cast<CubeFace>(2 * axis);
            if (hi)
                return static_cast<CubeFace>(2 * axis + 1);
        }
        return std::nullopt;
    };

    std::vector<TaggedFace> boundary;
    for (const auto& [f, c] : count) {
        if (c != 1)
            continue;
        auto cf = which_face(f);
        if (!cf)
            throw MeshError("structured cube: unexpected boundary face");
        boundary.push_back({f, dirichlet.count(*cf) ? BoundaryTag::Dirichlet : BoundaryTag::Neumann});
    }
    return Mesh(std::move(vertices), std::move(cells), boundary);
}

Mesh read_mesh(std::istream& in) {
    int line_no = 0;
    std::string line;
    auto next = [&]() -> std::istringstream {
        while (std::getline(in, line)) {
            ++line_no;
            auto pos = line.find_first_not_of(" \t\r");
            if (pos != std::string::npos && line[pos] != '#')
                return std::istringstream(line);
        }
        throw MeshError("line " + std::to_string(line_no + 1) + ": unexpected end of file");
    };
    auto fail = [&](const std::string& what) {
        throw MeshError("line " + std::to_string(line_no) + ": " + what);
    };
    auto check_end = [&](std::istringstream& s) {
        std::string extra;
        if (s >> extra)
            fail("trailing content '" + extra + "'");
    };

    auto header = next();
    long nv = 0, nc = 0, nb = 0;
    if (!(header >> nv >> nc >> nb) || nv < 4 || nc < 1 || nb < 1)
        fail("expected header 'nv nc nb' with positive counts");
    check_end(header);

    std::vector<Vec3> vertices;
    for (long i = 0; i < nv; ++i) {
        auto s = next();
        Vec3 x;
        if (!(s >> x[0] >> x[1] >> x[2]))
            fail("expected vertex coordinates 'x y z'");
        check_end(s);
        vertices.push_back(x);
    }

    std::vector<std::array<int, 4>> cells;
    for (long i = 0; i < nc; ++i) {
        auto s = next();
        std::array<int, 4> c{};
        if (!(s >> c[0] >> c[1] >> c[2] >> c[3]))
            fail("expected cell 'v0 v1 v2 v3'");
        check_end(s);
        for (int v : c)
            if (v < 0 || v >= nv)
                fail("vertex index " + std::to_string(v) + " out of range");
        const double vol = signed_volume(vertices[static_cast<std::size_t>(c[0])], vertices[static_cast<std::size_t>(c[1])],
                                         vertices[static_cast<std::size_t>(c[2])], vertices[static_cast<std::size_t>(c[3])]);
        if (!(vol > 0.0))
            fail("cell has non-positive orientation");
        cells.push_back(c);
    }

    std::vector<TaggedFace> boundary;
    for (long i = 0; i < nb; ++i) {
        auto s = next();
        TaggedFace tf{};
        std::string tag;
        if (!(s >> tf.vertices[0] >> tf.vertices[1] >> tf.vertices[2] >> tag))
            fail("expected boundary face 'v0 v1 v2 tag'");
        check_end(s);
        if (tag == "D")
            tf.tag = BoundaryTag::Dirichlet;
        else if (tag == "N")
            tf.tag = BoundaryTag::Neumann;
        else
            fail("boundary tag must be D or N, got '" + tag + "'");
        for (int v : tf.vertices)
            if (v < 0 || v >= nv)
                fail("vertex index " + std::to_string(v) + " out of range");
        boundary.push_back(tf);
    }
    return Mesh(std::move(vertices), std::move(cells), boundary);
}

Mesh read_mesh_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open mesh file " + path);
    return read_mesh(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
    std::size_t nb = 0;
    for (std::size_t f = 0; f < mesh.num_faces(); ++f)
        nb += mesh.is_boundary_face(static_cast<int>(f)) ? 1 : 0;
    out << mesh.num_vertices() << ' ' << mesh.num_cells() << ' ' << nb << '\n';
    out.precision(17);
    for (const auto& v : mesh.vertices())
        out << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
        const auto& cv = mesh.cell(static_cast<int>(c));
        out << cv[0] << ' ' << cv[1] << ' ' << cv[2] << ' ' << cv[3] << '\n';
    }
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
        const int fi = static_cast<int>(f);
        if (!mesh.is_boundary_face(fi))
            continue;
        const auto& fv = mesh.face(fi);
        out << fv[0] << ' ' << fv[1] << ' ' << fv[2] << ' '
            << (*mesh.boundary_tag(fi) == BoundaryTag::Dirichlet ? 'D' : 'N') << '\n';
    }
}

namespace ref {

Vec3 face_normal(int face) {
    switch (face) {
    case 0: return Vec3(1, 1, 1).normalized();
    case 1: return Vec3(-1, 0, 0);
    case 2: return Vec3(0, -1, 0);
    case 3: return Vec3(0, 0, -1);
    default: throw std::out_of_range("reference face index");
    }
}

double face_area(int face) { return face == 0 ? 0.5 * std::sqrt(3.0) : 0.5; }

double edge_length(int edge) { return edge < 3 ? 1.0 : std::sqrt(2.0); }

} // namespace ref

ElementTransform element_transform(const std::array<Vec3, 4>& v) {
    ElementTransform xf;
    xf.origin = v[0];
    xf.jacobian.col(0) = v[1] - v[0];
    xf.jacobian.col(1) = v[2] - v[0];
    xf.jacobian.col(2) = v[3] - v[0];
    xf.det = xf.jacobian.determinant();
    if (!(xf.det > 0.0))
        throw MeshError("element transform: non-positive jacobian determinant");
    xf.inverse = xf.jacobian.inverse();
    xf.inverse_transpose = xf.inverse.transpose();

    for (int i = 0; i < 4; ++i) {
        const auto& lf = kLocalFaces[static_cast<std::size_t>(i)];
        const double area = 0.5 * (v[lf[1]] - v[lf[0]]).cross(v[lf[2]] - v[lf[0]]).norm();
        xf.face_scale[i] = area / ref::face_area(i);
        Vec3 n = (xf.det / xf.face_scale[i]) * (xf.inverse_transpose * ref::face_normal(i));
        xf.face_normal[i] = n.normalized();
    }
    for (int e = 0; e < 6; ++e) {
        const auto& le = kLocalEdges[static_cast<std::size_t>(e)];
        const Vec3 t_ref = ref::vertices[le[1]] - ref::vertices[le[0]];
        const Vec3 t = xf.jacobian * t_ref;
        xf.edge_scale[e] = t.norm() / t_ref.norm();
        xf.edge_tangent[e] = t.normalized();
    }
    xf.h = Eigen::JacobiSVD<Mat3>(xf.jacobian).singularValues()(0);
    return xf;
}

ElementTransform element_transform(const Mesh& mesh, int cell) {
    const auto& cv = mesh.cell(cell);
    return element_transform({mesh.vertex(cv[0]), mesh.vertex(cv[1]), mesh.vertex(cv[2]), mesh.vertex(cv[3])});
}

double face_jump_measure(const Mesh& mesh, int face) {
    const auto& fv = mesh.face(face);
    double d = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            d = std::max(d, (mesh.vertex(fv[i]) - mesh.vertex(fv[j])).norm());
    return d;
}

} // namespace tdnns
