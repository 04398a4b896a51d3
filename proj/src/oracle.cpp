#include "arc/oracle.hpp"

namespace arc::oracle {

namespace {

double gap(PointView a, PointView b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    return s;
}

void check_dim(const WeightedPointSet& pts, PointView q) {
    if (q.size() != pts.dim()) throw ContractViolation("query has wrong dimension");
}

}  // namespace

double exact_range_weight(const WeightedPointSet& pts, PointView q, double radius) {
    check_dim(pts, q);
    if (radius < 0.0) throw ContractViolation("radius must be nonnegative");
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (gap(q, pts.point(i)) <= radius * radius) total += pts.weight(i);
    }
    return total;
}

std::vector<std::uint32_t> exact_ball(const WeightedPointSet& pts, PointView q, double radius) {
    check_dim(pts, q);
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (gap(q, pts.point(i)) <= radius * radius) out.push_back(static_cast<std::uint32_t>(i));
    }
    return out;
}

bool check_sandwich(const WeightedPointSet& pts, PointView q, const EpsParams& params,
                    const std::vector<std::uint32_t>& members) {
    check_dim(pts, q);
    std::vector<bool> in_s(pts.size(), false);
    for (auto i : members) {
        if (i >= pts.size()) return false;
        in_s[i] = true;
    }
    const double r2 = params.radius * params.radius;
    const double o2 = params.outer_radius() * params.outer_radius();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double s = gap(q, pts.point(i));
        if (s <= r2 && !in_s[i]) return false;
        if (s > o2 && in_s[i]) return false;
    }
    return true;
}

std::size_t exact_sigma(PointView q, const std::vector<Edge>& edges, const WeightedPointSet& pts,
                        const EpsParams& params) {
    check_dim(pts, q);
    const double r2 = params.radius * params.radius;
    const double o2 = params.outer_radius() * params.outer_radius();
    std::size_t count = 0;
    for (const auto& e : edges) {
        if (e.a >= pts.size() || e.b >= pts.size()) throw ContractViolation("edge index out of range");
        const double da = gap(q, pts.point(e.a));
        const double db = gap(q, pts.point(e.b));
        if ((da <= r2 && db >= o2) || (db <= r2 && da >= o2)) ++count;
    }
    return count;
}

std::size_t exact_tq(const WeightedPointSet& pts, PointView q, const EpsParams& params) {
    check_dim(pts, q);
    const double r2 = params.radius * params.radius;
    const double o2 = params.outer_radius() * params.outer_radius();
    std::size_t count = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double s = gap(q, pts.point(i));
        if (s > r2 && s <= o2) ++count;
    }
    return count;
}

std::vector<SpanningTree> enumerate_spanning_trees(std::size_t n) {
    if (n < 2 || n > 8) throw ContractViolation("tree enumeration supports 2 <= n <= 8");
    std::vector<SpanningTree> out;
    const std::size_t len = n - 2;
    std::size_t total = 1;
    for (std::size_t i = 0; i < len; ++i) total *= n;
    out.reserve(total);

    std::vector<std::uint32_t> seq(len, 0);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (std::size_t i = len; i-- > 0;) {
            seq[i] = static_cast<std::uint32_t>(c % n);
            c /= n;
        }
        std::vector<std::size_t> degree(n, 1);
        for (auto v : seq) ++degree[v];
        SpanningTree t;
        t.n = n;
        for (auto v : seq) {
            std::uint32_t leaf = 0;
            while (degree[leaf] != 1) ++leaf;
            t.edges.emplace_back(leaf, v);
            --degree[leaf];
            --degree[v];
        }
        std::uint32_t u = 0;
        while (degree[u] != 1) ++u;
        std::uint32_t w = u + 1;
        while (degree[w] != 1) ++w;
        t.edges.emplace_back(u, w);
        out.push_back(std::move(t));
    }
    return out;
}

namespace {

struct Visit {
    const PartitionTree& tree;
    PointView q;
    const WeightedPointSet& pts;
    double r;
    double outer;

    bool qualifies(const PNode& u) const {
        bool in_ball = false, at_least_outer = false, in_annulus = false, all_in_outer = true;
        for (std::uint32_t k = u.begin; k < u.end; ++k) {
            const double d2 = gap(q, pts.point(tree.path.order[k]));
            in_ball = in_ball || d2 <= r * r;
            at_least_outer = at_least_outer || d2 >= outer * outer;
            in_annulus = in_annulus || (d2 > r * r && d2 <= outer * outer);
            all_in_outer = all_in_outer && d2 <= outer * outer;
        }
        if (in_ball && at_least_outer) return true;
        if (in_annulus && all_in_outer) return true;
        return in_annulus && !in_ball;
    }

    std::size_t below(std::size_t v) const {
        const auto& u = tree.nodes[v];
        if (u.is_leaf()) return 0;
        std::size_t count = qualifies(u) ? 2 : 0;
        count += below(static_cast<std::size_t>(u.left));
        count += below(static_cast<std::size_t>(u.right));
        return count;
    }
};

}  // namespace

std::size_t exact_visiting_oracle(const PartitionTree& t, PointView q, const WeightedPointSet& pts,
                                  const EpsParams& params) {
    check_dim(pts, q);
    const Visit visit{t, q, pts, params.radius, params.outer_radius()};
    return 1 + visit.below(0);
}

OracleReport report(std::string quantity, double value, const WeightedPointSet& pts) {
    return {std::move(quantity), value, digest(pts)};
}

OracleReport report(std::string quantity, std::uint64_t value, const WeightedPointSet& pts) {
    return {std::move(quantity), value, digest(pts)};
}

}  // namespace arc::oracle
