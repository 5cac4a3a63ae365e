#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vrrw {

// Vertices are contiguous indices: interiors first (0..num_interior-1, in
// class order for the d-partite family), then leaves grouped by attachment
// vertex/class, ascending. The layout is part of the external contract:
// CSV columns and sampling order depend on it.
using Vertex = std::int32_t;

enum class GraphFamily { complete_like, d_partite };

// One pendant vertex of a d-partite graph, anchored at one or more interior
// vertices that must all belong to the same class.
struct LeafAttachment {
    std::vector<Vertex> anchors;
};

class GraphTopology {
public:
    // Clique on d interior vertices, leaf_counts[i] pendant leaves at interior i.
    static GraphTopology complete_like(int d, const std::vector<int>& leaf_counts);

    // Classes with no internal edges, all cross-class pairs adjacent, and
    // each leaf adjacent only to vertices of a single class.
    static GraphTopology d_partite(const std::vector<int>& class_sizes,
                                   const std::vector<LeafAttachment>& leaf_attachments);

    GraphFamily family() const { return family_; }

    // Number of interior vertices (complete-like) or classes (d-partite);
    // the "d" of the family.
    int d() const { return d_; }

    int num_interior() const { return num_interior_; }
    int num_leaves() const { return num_vertices_ - num_interior_; }
    int num_vertices() const { return num_vertices_; }

    bool is_leaf(Vertex v) const { return v >= num_interior_; }
    bool contains(Vertex v) const { return v >= 0 && v < num_vertices_; }

    // Group = interior vertex index (complete-like) or class index
    // (d-partite); leaves map to the group they attach to. Aggregated
    // observables are reported per group.
    int group_of(Vertex v) const;

    // Neighbors in ascending order (interiors before leaves by construction).
    std::span<const Vertex> neighbors(Vertex v) const;

    // Interior members of a class (d-partite) or the singleton {i} (complete-like).
    std::span<const Vertex> group_members(int group) const;

    // Leaves attached to interior i (complete-like) or to class i (d-partite).
    std::span<const Vertex> group_leaves(int group) const;

    int leaf_count(int group) const { return static_cast<int>(group_leaves(group).size()); }
    bool has_leaves() const { return num_leaves() > 0; }

    // Limit occupation measure: 1/d on each interior coordinate, 0 on each
    // leaf (complete-like, length |V|); 1/d per class (d-partite, length d).
    std::vector<double> uniform_target() const;

    struct VertexDesc {
        bool leaf;
        int interior_index;      // own index, or attachment group for a leaf
        int leaf_index;          // position among its group's leaves, -1 for interiors
        int class_member_index;  // position within its class (d-partite), -1 otherwise
    };
    VertexDesc describe(Vertex v) const;

    std::string label(Vertex v) const;  // "2" or "l3.1", for logs and errors

private:
    GraphTopology() = default;
    void finalize_adjacency(std::vector<std::vector<Vertex>> adj);

    GraphFamily family_ = GraphFamily::complete_like;
    int d_ = 0;
    int num_interior_ = 0;
    int num_vertices_ = 0;
    std::vector<Vertex> adjacency_;       // flattened neighbor lists
    std::vector<std::int32_t> adj_offset_;  // size num_vertices_+1
    std::vector<int> group_;              // per vertex
    std::vector<Vertex> members_flat_;    // interiors grouped by class/group
    std::vector<std::int32_t> members_offset_;
    std::vector<Vertex> leaves_flat_;     // leaves grouped by group
    std::vector<std::int32_t> leaves_offset_;
};

}  // namespace vrrw
