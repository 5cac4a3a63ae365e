#include "vrrw/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace vrrw {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

GraphTopology GraphTopology::complete_like(int d, const std::vector<int>& leaf_counts) {
    require(d >= 2, "complete_like: need at least 2 interior vertices");
    require(static_cast<int>(leaf_counts.size()) == d,
            "complete_like: leaf_counts length must equal d");
    for (int r : leaf_counts) require(r >= 0, "complete_like: negative leaf count");

    GraphTopology g;
    g.family_ = GraphFamily::complete_like;
    g.d_ = d;
    g.num_interior_ = d;
    const int total_leaves = std::accumulate(leaf_counts.begin(), leaf_counts.end(), 0);
    g.num_vertices_ = d + total_leaves;

    g.group_.resize(g.num_vertices_);
    g.members_offset_.assign(d + 1, 0);
    g.leaves_offset_.assign(d + 1, 0);
    std::vector<std::vector<Vertex>> adj(g.num_vertices_);

    for (int i = 0; i < d; ++i) {
        g.group_[i] = i;
        g.members_flat_.push_back(i);
        g.members_offset_[i + 1] = i + 1;
        for (int j = 0; j < d; ++j)
            if (j != i) adj[i].push_back(j);
    }
    Vertex next_leaf = d;
    for (int i = 0; i < d; ++i) {
        for (int r = 0; r < leaf_counts[i]; ++r) {
            g.group_[next_leaf] = i;
            g.leaves_flat_.push_back(next_leaf);
            adj[next_leaf].push_back(i);
            adj[i].push_back(next_leaf);
            ++next_leaf;
        }
        g.leaves_offset_[i + 1] = static_cast<std::int32_t>(g.leaves_flat_.size());
    }
    g.finalize_adjacency(std::move(adj));
    return g;
}

GraphTopology GraphTopology::d_partite(const std::vector<int>& class_sizes,
                                       const std::vector<LeafAttachment>& leaf_attachments) {
    const int d = static_cast<int>(class_sizes.size());
    require(d >= 3, "d_partite: need at least 3 classes");
    for (int s : class_sizes) require(s >= 1, "d_partite: empty class");

    GraphTopology g;
    g.family_ = GraphFamily::d_partite;
    g.d_ = d;
    g.num_interior_ = std::accumulate(class_sizes.begin(), class_sizes.end(), 0);

    // class of each interior vertex, in layout order
    std::vector<int> cls(g.num_interior_);
    {
        int v = 0;
        for (int c = 0; c < d; ++c)
            for (int m = 0; m < class_sizes[c]; ++m) cls[v++] = c;
    }

    // leaves sorted by attachment class so the contiguous layout holds
    std::vector<std::pair<int, const LeafAttachment*>> ordered;
    ordered.reserve(leaf_attachments.size());
    for (const LeafAttachment& la : leaf_attachments) {
        require(!la.anchors.empty(), "d_partite: leaf with no attachment vertices");
        int leaf_class = -1;
        for (Vertex a : la.anchors) {
            require(a >= 0 && a < g.num_interior_, "d_partite: attachment vertex out of range");
            if (leaf_class < 0)
                leaf_class = cls[a];
            else
                require(cls[a] == leaf_class,
                        "d_partite: leaf attached to vertices of two different classes");
        }
        ordered.emplace_back(leaf_class, &la);
    }
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    g.num_vertices_ = g.num_interior_ + static_cast<int>(ordered.size());
    g.group_.resize(g.num_vertices_);
    g.members_offset_.assign(d + 1, 0);
    g.leaves_offset_.assign(d + 1, 0);
    std::vector<std::vector<Vertex>> adj(g.num_vertices_);

    for (int v = 0; v < g.num_interior_; ++v) {
        g.group_[v] = cls[v];
        g.members_flat_.push_back(v);
        for (int w = 0; w < g.num_interior_; ++w)
            if (cls[w] != cls[v]) adj[v].push_back(w);
    }
    for (int c = 0; c < d; ++c)
        g.members_offset_[c + 1] = g.members_offset_[c] + class_sizes[c];

    Vertex next_leaf = g.num_interior_;
    int emitted = 0;
    for (int c = 0; c < d; ++c) {
        for (const auto& [leaf_class, la] : ordered) {
            if (leaf_class != c) continue;
            g.group_[next_leaf] = c;
            g.leaves_flat_.push_back(next_leaf);
            std::vector<Vertex> anchors(la->anchors);
            std::sort(anchors.begin(), anchors.end());
            anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
            for (Vertex a : anchors) {
                adj[next_leaf].push_back(a);
                adj[a].push_back(next_leaf);
            }
            ++next_leaf;
            ++emitted;
        }
        g.leaves_offset_[c + 1] = static_cast<std::int32_t>(g.leaves_flat_.size());
    }
    require(emitted == static_cast<int>(ordered.size()), "d_partite: internal layout error");
    g.finalize_adjacency(std::move(adj));
    return g;
}

void GraphTopology::finalize_adjacency(std::vector<std::vector<Vertex>> adj) {
    adj_offset_.assign(num_vertices_ + 1, 0);
    for (int v = 0; v < num_vertices_; ++v) {
        std::sort(adj[v].begin(), adj[v].end());
        adj_offset_[v + 1] = adj_offset_[v] + static_cast<std::int32_t>(adj[v].size());
    }
    adjacency_.reserve(adj_offset_[num_vertices_]);
    for (int v = 0; v < num_vertices_; ++v)
        adjacency_.insert(adjacency_.end(), adj[v].begin(), adj[v].end());
}

int GraphTopology::group_of(Vertex v) const {
    require(contains(v), "group_of: unknown vertex");
    return group_[v];
}

std::span<const Vertex> GraphTopology::neighbors(Vertex v) const {
    require(contains(v), "neighbors: unknown vertex");
    return {adjacency_.data() + adj_offset_[v],
            static_cast<std::size_t>(adj_offset_[v + 1] - adj_offset_[v])};
}

std::span<const Vertex> GraphTopology::group_members(int group) const {
    require(group >= 0 && group < d_, "group_members: bad group");
    return {members_flat_.data() + members_offset_[group],
            static_cast<std::size_t>(members_offset_[group + 1] - members_offset_[group])};
}

std::span<const Vertex> GraphTopology::group_leaves(int group) const {
    require(group >= 0 && group < d_, "group_leaves: bad group");
    return {leaves_flat_.data() + leaves_offset_[group],
            static_cast<std::size_t>(leaves_offset_[group + 1] - leaves_offset_[group])};
}

std::vector<double> GraphTopology::uniform_target() const {
    if (family_ == GraphFamily::complete_like) {
        std::vector<double> target(num_vertices_, 0.0);
        for (int i = 0; i < d_; ++i) target[i] = 1.0 / d_;
        return target;
    }
    return std::vector<double>(d_, 1.0 / d_);
}

GraphTopology::VertexDesc GraphTopology::describe(Vertex v) const {
    require(contains(v), "describe: unknown vertex");
    VertexDesc desc{};
    desc.leaf = is_leaf(v);
    desc.interior_index = group_[v];
    desc.leaf_index = -1;
    desc.class_member_index = -1;
    if (desc.leaf) {
        const auto l = group_leaves(group_[v]);
        desc.leaf_index = static_cast<int>(std::find(l.begin(), l.end(), v) - l.begin());
    } else if (family_ == GraphFamily::d_partite) {
        desc.class_member_index = static_cast<int>(v - members_offset_[group_[v]]);
    }
    return desc;
}

std::string GraphTopology::label(Vertex v) const {
    const VertexDesc desc = describe(v);
    if (!desc.leaf) return std::to_string(v);
    return "l" + std::to_string(desc.interior_index) + "." + std::to_string(desc.leaf_index);
}

}  // namespace vrrw
