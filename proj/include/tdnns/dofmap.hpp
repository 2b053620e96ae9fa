#pragma once

#include <span>
#include <vector>

#include "tdnns/mesh.hpp"
#include "tdnns/reference.hpp"

namespace tdnns {

/// Global numbering of one finite element space.
///
/// Entity DOFs are laid out vertex block, edge block, face block, interior
/// block. Shared entities receive identical global indices from every
/// incident cell. Essential constraints: Sigma DOFs on Neumann faces, V and W
/// DOFs on entities of the Dirichlet boundary.
class DofMap {
public:
    DofMap(const Mesh& mesh, Space space, int order, WVariant variant = WVariant::Moment);

    Space space() const { return space_; }
    int order() const { return order_; }
    int size() const { return ndofs_; }
    int num_free() const { return nfree_; }
    int dofs_per_cell() const { return per_cell_; }

    /// Global DOF indices of a cell, in the reference basis' local order.
    std::span<const int> cell_dofs(int c) const {
        return {cell_dofs_.data() + static_cast<std::size_t>(c) * per_cell_, static_cast<std::size_t>(per_cell_)};
    }
    const ReferenceBasis& basis(int c) const { return *bases_[static_cast<std::size_t>(c)]; }

    bool is_constrained(int dof) const { return constrained_[static_cast<std::size_t>(dof)]; }
    const std::vector<bool>& constrained() const { return constrained_; }
    /// Position among free DOFs, or -1 for constrained DOFs.
    int free_index(int dof) const { return free_index_[static_cast<std::size_t>(dof)]; }
    const std::vector<int>& free_dofs() const { return free_dofs_; }

    /// First global index of an entity's DOFs and their count.
    int entity_offset(EntityKind kind, int entity) const;
    int entity_count(EntityKind kind) const { return per_entity_[static_cast<std::size_t>(kind)]; }

private:
    Space space_;
    int order_;
    int ndofs_ = 0;
    int nfree_ = 0;
    int per_cell_ = 0;
    std::array<int, 4> per_entity_{};
    std::array<int, 4> block_offset_{};
    std::vector<int> cell_dofs_;
    std::vector<const ReferenceBasis*> bases_;
    std::vector<bool> constrained_;
    std::vector<int> free_index_;
    std::vector<int> free_dofs_;
};

/// The three spaces for polynomial order k (Sigma and V of order k, W of
/// order k + 1).
struct SpaceSet {
    DofMap sigma;
    DofMap v;
    DofMap w;
    int k;

    SpaceSet(const Mesh& mesh, int k);
};

} // namespace tdnns
