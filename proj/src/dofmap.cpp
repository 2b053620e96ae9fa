#include "tdnns/dofmap.hpp"

namespace tdnns {

DofMap::DofMap(const Mesh& mesh, Space space, int order, WVariant variant) : space_(space), order_(order) {
    const std::size_t ncells = mesh.num_cells();
    bases_.resize(ncells);
    for (std::size_t c = 0; c < ncells; ++c)
        bases_[c] = &cached_basis(space, order, mesh.vertex_ranks(static_cast<int>(c)), variant);

    const ReferenceBasis& b0 = *bases_[0];
    per_cell_ = b0.size();
    for (const auto& d : b0.dofs())
        if (d.entity == 0 || d.kind == EntityKind::Interior)
            ++per_entity_[static_cast<std::size_t>(d.kind)];

    const std::array<std::size_t, 4> counts = {mesh.num_vertices(), mesh.num_edges(), mesh.num_faces(), ncells};
    int offset = 0;
    for (std::size_t kind = 0; kind < 4; ++kind) {
        block_offset_[kind] = offset;
        offset += per_entity_[kind] * static_cast<int>(counts[kind]);
    }
    ndofs_ = offset;

    cell_dofs_.resize(ncells * static_cast<std::size_t>(per_cell_));
    for (std::size_t c = 0; c < ncells; ++c) {
        const int ci = static_cast<int>(c);
        const auto& dofs = bases_[c]->dofs();
        for (int i = 0; i < per_cell_; ++i) {
            const auto& d = dofs[static_cast<std::size_t>(i)];
            int entity = 0;
            switch (d.kind) {
            case EntityKind::Vertex: entity = mesh.cell(ci)[d.entity]; break;
            case EntityKind::Edge: entity = mesh.cell_edges(ci)[d.entity]; break;
            case EntityKind::Face: entity = mesh.cell_faces(ci)[d.entity]; break;
            case EntityKind::Interior: entity = ci; break;
            }
            cell_dofs_[c * static_cast<std::size_t>(per_cell_) + static_cast<std::size_t>(i)] =
                entity_offset(d.kind, entity) + d.moment;
        }
    }

    constrained_.assign(static_cast<std::size_t>(ndofs_), false);
    auto mark = [&](EntityKind kind, const std::vector<bool>& on) {
        const int per = entity_count(kind);
        for (std::size_t e = 0; e < on.size(); ++e)
            if (on[e])
                for (int m = 0; m < per; ++m)
                    constrained_[static_cast<std::size_t>(entity_offset(kind, static_cast<int>(e)) + m)] = true;
    };
    if (space == Space::Sigma) {
        mark(EntityKind::Face, mesh.faces_with_tag(BoundaryTag::Neumann));
    } else {
        mark(EntityKind::Vertex, mesh.vertices_on(BoundaryTag::Dirichlet));
        mark(EntityKind::Edge, mesh.edges_on(BoundaryTag::Dirichlet));
        mark(EntityKind::Face, mesh.faces_with_tag(BoundaryTag::Dirichlet));
    }

    free_index_.assign(static_cast<std::size_t>(ndofs_), -1);
    for (int i = 0; i < ndofs_; ++i)
        if (!constrained_[static_cast<std::size_t>(i)]) {
            free_index_[static_cast<std::size_t>(i)] = static_cast<int>(free_dofs_.size());
            free_dofs_.push_back(i);
        }
    nfree_ = static_cast<int>(free_dofs_.size());
}

int DofMap::entity_offset(EntityKind kind, int entity) const {
    const auto k = static_cast<std::size_t>(kind);
    return block_offset_[k] + per_entity_[k] * entity;
}

SpaceSet::SpaceSet(const Mesh& mesh, int k)
    : sigma(mesh, Space::Sigma, k), v(mesh, Space::V, k), w(mesh, Space::W, k + 1), k(k) {}

} // namespace tdnns
