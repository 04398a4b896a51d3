#include "arc/ptree.hpp"

#include <algorithm>

namespace arc {

bool SpanningPath::is_permutation() const {
    std::vector<bool> seen(order.size(), false);
    for (auto i : order) {
        if (i >= order.size() || seen[i]) return false;
        seen[i] = true;
    }
    return true;
}

std::vector<Edge> SpanningPath::edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 1; i < order.size(); ++i) out.emplace_back(order[i - 1], order[i]);
    return out;
}

std::size_t PartitionTree::depth() const {
    std::vector<std::size_t> level(nodes.size(), 0);
    std::size_t deepest = 0;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        deepest = std::max(deepest, level[v]);
        if (!nodes[v].is_leaf()) {
            level[static_cast<std::size_t>(nodes[v].left)] = level[v] + 1;
            level[static_cast<std::size_t>(nodes[v].right)] = level[v] + 1;
        }
    }
    return deepest;
}

std::size_t PartitionTree::internal_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes.begin(), nodes.end(), [](const PNode& v) { return !v.is_leaf(); }));
}

std::vector<std::uint32_t> PartitionTree::members(std::size_t node) const {
    const auto& v = nodes.at(node);
    return {path.order.begin() + v.begin, path.order.begin() + v.end};
}

SpanningPath tree_to_path(const SpanningTree& t, const WeightedPointSet& pts) {
    const std::size_t n = pts.size();
    if (t.n != n) throw ContractViolation("tree and point set sizes differ");
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (const auto& e : t.edges) {
        if (e.b >= n) throw ContractViolation("tree edge out of range");
        adj[e.a].push_back(e.b);
        adj[e.b].push_back(e.a);
    }
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());

    SpanningPath path;
    path.order.reserve(n);
    std::vector<bool> seen(n, false);
    std::vector<std::uint32_t> stack{0};
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        if (seen[v]) continue;
        seen[v] = true;
        path.order.push_back(v);
        for (auto it = adj[v].rbegin(); it != adj[v].rend(); ++it) {
            if (!seen[*it]) stack.push_back(*it);
        }
    }
    if (path.order.size() != n) throw ContractViolation("spanning tree is disconnected");
    return path;
}

namespace {

std::int32_t build_range(PartitionTree& t, const WeightedPointSet& pts, std::uint32_t begin, std::uint32_t end) {
    const auto id = static_cast<std::int32_t>(t.nodes.size());
    t.nodes.push_back({begin, end, 0.0, -1, -1, nullptr});
    if (end - begin == 1) {
        t.nodes[static_cast<std::size_t>(id)].cum_weight = pts.weight(t.path.order[begin]);
        return id;
    }
    const std::uint32_t mid = begin + (end - begin + 1) / 2;
    const auto l = build_range(t, pts, begin, mid);
    const auto r = build_range(t, pts, mid, end);
    auto& node = t.nodes[static_cast<std::size_t>(id)];
    node.left = l;
    node.right = r;
    node.cum_weight = t.nodes[static_cast<std::size_t>(l)].cum_weight + t.nodes[static_cast<std::size_t>(r)].cum_weight;
    return id;
}

}  // namespace

PartitionTree path_to_partition_tree(const SpanningPath& p, const WeightedPointSet& pts) {
    if (p.order.size() != pts.size() || !p.is_permutation()) {
        throw ContractViolation("path is not a permutation of the points");
    }
    PartitionTree t;
    t.path = p;
    t.nodes.reserve(2 * p.order.size());
    build_range(t, pts, 0, static_cast<std::uint32_t>(p.order.size()));
    return t;
}

std::size_t visiting_number(const PartitionTree& t, PointView q, const WeightedPointSet& pts, const EpsParams& params) {
    if (q.size() != pts.dim()) throw ContractViolation("query has wrong dimension");
    enum : unsigned { kNear = 1, kFar = 2, kAnnulus = 4, kOutside = 8 };
    const double r2 = params.radius * params.radius;
    const double o2 = params.outer_radius() * params.outer_radius();

    // Flags of each node's member set, children before parents (reverse preorder).
    std::vector<unsigned> flags(t.nodes.size(), 0);
    std::size_t count = 1;
    for (std::size_t v = t.nodes.size(); v-- > 0;) {
        const auto& node = t.nodes[v];
        if (node.is_leaf()) {
            const double s = squared_distance(q, pts.point(t.path.order[node.begin]));
            unsigned f = 0;
            if (s <= r2) f |= kNear;
            if (s >= o2) f |= kFar;
            if (s > r2 && s <= o2) f |= kAnnulus;
            if (s > o2) f |= kOutside;
            flags[v] = f;
            continue;
        }
        const unsigned f = flags[static_cast<std::size_t>(node.left)] | flags[static_cast<std::size_t>(node.right)];
        flags[v] = f;
        const bool stabbed = (f & kNear) && (f & kFar);
        const bool inside_outer = (f & kAnnulus) && !(f & kOutside);
        const bool misses_inner = (f & kAnnulus) && !(f & kNear);
        if (stabbed || inside_outer || misses_inner) count += 2;
    }
    return count;
}

SpanningPath canonical_path_of_tree(const PartitionTree& t) {
    SpanningPath out;
    out.order.reserve(t.n_points());
    for (const auto& v : t.nodes) {
        if (v.is_leaf()) out.order.push_back(t.path.order[v.begin]);
    }
    return out;
}

}  // namespace arc
